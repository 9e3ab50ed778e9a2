"""Scenario files, run orchestration and reproducible CSV/JSON output.

A scenario is a YAML document with four blocks::

    model:
      kind: kepler
      params: {m: 1.0, alpha: 1.0, E: 0.05}
    frames:
      angular: {reference: phi, clock: {kind: linear, coefficients: [0.0, 1.0]}}
      radial: {reference: r, clock: {kind: linear, coefficients: [0.0, 1.0]}}
    run:
      command: rrft
      frame: angular
      target: radial
      times: [0.0]
      t_hat: 6.0
      initial: [[5.0, -0.2]]
    numerics: {seed: 0}

``gaugeframe <config> [--tol X] [--output DIR] [--command NAME]`` runs it.
Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 numeric-domain error. ``GAUGEFRAME_LOG`` selects ``quiet``, ``info`` or
``debug`` logging.
"""

import argparse
import csv
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, GaugeFrameError, NumericDomainError
from .flow_engine import flow, trace_orbit
from .gauge_system import GaugeClock, constraint_residual
from .models import (make_energy_constrained, make_kepler, make_lattice_pft, make_linear_toy,
                     make_relativistic_particle)
from .relational import evolve_geometric, evolve_hamiltonian, reduced_hamiltonian, \
    reduced_hamiltonian_gradient
from .rrft import FrameMap, FramePair, apply_rrft, pullback_hamiltonian
from . import verification

log = logging.getLogger("gaugeframe")

COMMANDS = ("reduce", "evolve", "rrft", "orbit", "verify")
MODEL_KINDS = ("relativistic_particle", "kepler", "linear_toy", "energy_constrained", "lattice_pft")
EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

_MODEL_DEFAULTS = {
    "relativistic_particle": {"D": 1, "m": 1.0},
    "kepler": {"m": 1.0, "alpha": 1.0, "E": 0.05},
    "linear_toy": {},
    "energy_constrained": {"E": 1.0},
    "lattice_pft": {"D": 1, "N": 128, "dz": 0.1, "mu": 0.0, "guard": 8},
}


# ---------------------------------------------------------------- scenario types

@dataclass(frozen=True)
class ClockSpec:
    kind: str
    coefficients: tuple

    def build(self):
        return GaugeClock(self.coefficients, self.kind)


@dataclass(frozen=True)
class FrameSpec:
    name: str
    reference: str
    clock: ClockSpec


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    params: dict
    branch: tuple = None


@dataclass(frozen=True)
class RunSpec:
    command: str
    frame: str = None
    target: str = None
    times: tuple = (0.0, 1.0)
    t_hat: float = None
    initial: tuple = ()
    samples: int = 11
    route: str = "hamiltonian"
    s_range: tuple = (0.0, 1.0)
    s0: float = 0.1
    output: str = "output"


@dataclass(frozen=True)
class NumericsSpec:
    rtol: float = 1e-10
    atol: float = 1e-12
    fd_step: float = 1e-4
    seed: int = 0
    n_points: int = 100
    tol: float = None


@dataclass(frozen=True)
class Scenario:
    model: ModelSpec
    frames: tuple
    run: RunSpec
    numerics: NumericsSpec = field(default_factory=NumericsSpec)

    def frame_spec(self, name):
        for f in self.frames:
            if f.name == name:
                return f
        raise KeyError(name)


# ---------------------------------------------------------------- parsing

def _line_index(text):
    """Dotted field path to 1-based line number, from the YAML node tree."""
    index = {}

    def walk(node, path):
        index[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                sub = f"{path}.{key.value}" if path else str(key.value)
                index[sub] = key.start_mark.line + 1
                walk(value, sub)
                index[sub] = key.start_mark.line + 1
        elif isinstance(node, yaml.SequenceNode):
            for i, value in enumerate(node.value):
                walk(value, f"{path}[{i}]")

    root = yaml.compose(text)
    if root is not None:
        walk(root, "")
    return index


class _Collector:
    def __init__(self, lines):
        self.lines = lines
        self.errors = []

    def add(self, path, message):
        probe = path
        line = self.lines.get(probe)
        while line is None and "." in probe:
            probe = probe.rsplit(".", 1)[0]
            line = self.lines.get(probe)
        self.errors.append(ConfigError(message, path or None, line))


def _combined(first, errors):
    message = first.message
    if len(errors) > 1:
        message += f"; {len(errors) - 1} more: " + "; ".join(str(e) for e in errors[1:])
    return ConfigError(message, first.field, first.line, errors)


def _number(value, path, col, kind=float, positive=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool):
        col.add(path, f"expected a number, got {value!r}")
        return None
    try:
        out = kind(float(value)) if kind is int else kind(value)
        if kind is int and float(value) != int(float(value)):
            raise ValueError
    except (TypeError, ValueError):
        col.add(path, f"expected {'an integer' if kind is int else 'a number'}, got {value!r}")
        return None
    if kind is float and not np.isfinite(out):
        col.add(path, "value must be finite")
        return None
    if positive and not out > 0:
        col.add(path, f"must be positive, got {out!r}")
        return None
    return out


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    if isinstance(value, dict):
        return {k: _freeze(v) for k, v in value.items()}
    return value


def _float_tuple(value, path, col, nested=False):
    if value is None:
        return ()
    if not isinstance(value, (list, tuple)):
        col.add(path, "expected a list")
        return ()
    if nested and value and isinstance(value[0], (list, tuple)):
        return tuple(_float_tuple(v, f"{path}[{i}]", col) for i, v in enumerate(value))
    out = []
    for i, v in enumerate(value):
        x = _number(v, f"{path}[{i}]", col)
        out.append(x)
    return tuple(out)


def _mapping(value, path, col, required=True):
    if value is None:
        if required:
            col.add(path, "missing block")
        return {}
    if not isinstance(value, dict):
        col.add(path, "expected a mapping")
        return {}
    return value


def _unknown(block, allowed, path, col):
    for key in block:
        if key not in allowed:
            col.add(f"{path}.{key}" if path else str(key), f"unknown field {key!r}")


def parse_scenario(text):
    """Parse and validate a YAML scenario.

    Raises
    ------
    ConfigError
        With the dotted field path and line of the first problem; every
        problem found is listed in ``errors``.
    """
    try:
        data = yaml.safe_load(text)
        lines = _line_index(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"malformed scenario: {exc}", None,
                          mark.line + 1 if mark is not None else None) from None
    col = _Collector(lines)
    data = _mapping(data, "", col)
    _unknown(data, ("model", "frames", "run", "numerics"), "", col)

    mdata = _mapping(data.get("model"), "model", col)
    _unknown(mdata, ("kind", "params", "branch"), "model", col)
    kind = mdata.get("kind")
    if kind not in MODEL_KINDS:
        col.add("model.kind", f"unknown model kind {kind!r}; choose from {', '.join(MODEL_KINDS)}")
    params = dict(_MODEL_DEFAULTS.get(kind, {}))
    params.update(_freeze(_mapping(mdata.get("params"), "model.params", col, required=False)))
    branch = mdata.get("branch")
    if branch is not None:
        branch = tuple(branch) if isinstance(branch, list) else (branch,)
        if any(b not in (-1, 0, 1) for b in branch):
            col.add("model.branch", "branch signs must be -1, 0 or +1")
    model = ModelSpec(kind, params, branch)

    fdata = _mapping(data.get("frames"), "frames", col, required=kind != "lattice_pft")
    frames = []
    for name, spec in fdata.items():
        path = f"frames.{name}"
        spec = _mapping(spec, path, col)
        _unknown(spec, ("reference", "clock"), path, col)
        ref = spec.get("reference")
        if not isinstance(ref, str):
            col.add(f"{path}.reference", "reference field label is required")
        cdata = _mapping(spec.get("clock"), f"{path}.clock", col)
        _unknown(cdata, ("kind", "coefficients"), f"{path}.clock", col)
        ckind = cdata.get("kind", "linear")
        if ckind not in ("linear", "polynomial"):
            col.add(f"{path}.clock.kind", f"clock kind must be linear or polynomial, got {ckind!r}")
        coeffs = _float_tuple(cdata.get("coefficients"), f"{path}.clock.coefficients", col)
        if not coeffs:
            col.add(f"{path}.clock.coefficients", "at least one coefficient is required")
        elif ckind == "linear" and len(coeffs) > 2:
            col.add(f"{path}.clock.coefficients", "a linear clock has at most two coefficients")
        elif None not in coeffs and all(c == 0 for c in coeffs[1:]):
            col.add(f"{path}.clock", "clock rate is zero for all times; a frame needs a running clock")
        frames.append(FrameSpec(str(name), ref, ClockSpec(ckind, coeffs)))

    rdata = _mapping(data.get("run"), "run", col)
    allowed = {f.name for f in dataclasses.fields(RunSpec)}
    _unknown(rdata, allowed, "run", col)
    command = rdata.get("command")
    if command not in COMMANDS:
        col.add("run.command", f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    names = [f.name for f in frames]
    for key in ("frame", "target"):
        value = rdata.get(key)
        if value is not None and value not in names:
            col.add(f"run.{key}", f"frame {value!r} is not defined")
    route = rdata.get("route", "hamiltonian")
    if route not in ("hamiltonian", "geometric"):
        col.add("run.route", f"route must be hamiltonian or geometric, got {route!r}")
    samples = _number(rdata.get("samples", 11), "run.samples", col, int, positive=True)
    run = RunSpec(
        command=command,
        frame=rdata.get("frame", names[0] if names else None),
        target=rdata.get("target", names[1] if len(names) > 1 else None),
        times=_float_tuple(rdata.get("times", [0.0, 1.0]), "run.times", col),
        t_hat=_number(rdata.get("t_hat"), "run.t_hat", col, allow_none=True),
        initial=_float_tuple(rdata.get("initial", []), "run.initial", col, nested=True),
        samples=samples,
        route=route,
        s_range=_float_tuple(rdata.get("s_range", [0.0, 1.0]), "run.s_range", col),
        s0=_number(rdata.get("s0", 0.1), "run.s0", col),
        output=str(rdata.get("output", "output")),
    )
    if command in ("reduce", "evolve", "rrft", "orbit") and kind == "lattice_pft":
        col.add("run.command", "the lattice model supports the verify command only")
    if command in ("evolve", "reduce", "rrft", "orbit") and not run.initial:
        col.add("run.initial", f"command {command!r} needs initial values")
    if command == "rrft" and run.target is None:
        col.add("run.target", "rrft needs a target frame")

    ndata = _mapping(data.get("numerics"), "numerics", col, required=False)
    _unknown(ndata, {f.name for f in dataclasses.fields(NumericsSpec)}, "numerics", col)
    d = NumericsSpec()
    numerics = NumericsSpec(
        rtol=_number(ndata.get("rtol", d.rtol), "numerics.rtol", col, positive=True),
        atol=_number(ndata.get("atol", d.atol), "numerics.atol", col, positive=True),
        fd_step=_number(ndata.get("fd_step", d.fd_step), "numerics.fd_step", col, positive=True),
        seed=_number(ndata.get("seed", d.seed), "numerics.seed", col, int),
        n_points=_number(ndata.get("n_points", d.n_points), "numerics.n_points", col, int, positive=True),
        tol=_number(ndata.get("tol"), "numerics.tol", col, positive=True, allow_none=True),
    )
    if col.errors:
        raise _combined(col.errors[0], col.errors)
    scenario = Scenario(model, tuple(frames), run, numerics)
    try:
        build(scenario)
    except ConfigError as exc:
        raise ConfigError(exc.message, exc.field, exc.line or lines.get(exc.field)) from None
    return scenario


def _plain(value):
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def scenario_to_dict(scenario):
    model = {"kind": scenario.model.kind, "params": _plain(scenario.model.params)}
    if scenario.model.branch is not None:
        model["branch"] = list(scenario.model.branch)
    frames = {f.name: {"reference": f.reference,
                       "clock": {"kind": f.clock.kind, "coefficients": list(f.clock.coefficients)}}
              for f in scenario.frames}
    run = {k: _plain(v) for k, v in dataclasses.asdict(scenario.run).items() if v is not None}
    numerics = {k: v for k, v in dataclasses.asdict(scenario.numerics).items() if v is not None}
    return {"model": model, "frames": frames, "run": run, "numerics": numerics}


def serialize(scenario):
    """YAML text that :func:`parse_scenario` maps back to an equal scenario."""
    return yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False, default_flow_style=None)


# ---------------------------------------------------------------- model construction

def _build_model(spec):
    p = dict(spec.params)
    try:
        if spec.kind == "relativistic_particle":
            model = make_relativistic_particle(int(p["D"]), float(p["m"]))
        elif spec.kind == "kepler":
            model = make_kepler(float(p["m"]), float(p["alpha"]), float(p["E"]))
        elif spec.kind == "linear_toy":
            model = make_linear_toy()
        elif spec.kind == "energy_constrained":
            return _build_energy(p, spec.branch)
        else:
            model = make_lattice_pft(int(p["D"]), int(p["N"]), float(p["dz"]), float(p["mu"]),
                                     int(p.get("guard", 8)))
    except KeyError as exc:
        raise ConfigError(f"missing model parameter {exc.args[0]!r}", "model.params") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), "model.params") from None
    if spec.branch is not None:
        fixed = next(iter(model.systems.values())).branch.sigma
        if tuple(spec.branch) != fixed:
            raise ConfigError(f"model {spec.kind!r} has the fixed branch {list(fixed)}", "model.branch")
    return model


def _build_energy(p, branch):
    """Diagonal inverse metric and a harmonic potential ``sum omega_a^2 K_a^2 / 2``."""
    try:
        diag = np.asarray(p["inverse_metric_diagonal"], dtype=float)
        omega = np.asarray(p.get("omega", [0.0] * diag.size), dtype=float)
        E = float(p["E"])
    except KeyError as exc:
        raise ConfigError(f"missing model parameter {exc.args[0]!r}", "model.params") from None
    if diag.shape != omega.shape:
        raise ConfigError("omega and inverse_metric_diagonal must have equal length", "model.params")
    sign = -1 if branch is None else int(branch[0])
    n = diag.size
    labels = tuple(f"K{a + 1}" for a in range(n)) + tuple(f"M{a + 1}" for a in range(n))
    frames = {labels[a]: (labels[a], sign) for a in range(n)}
    ginv = np.diag(diag)
    return make_energy_constrained(lambda K: ginv, lambda K: 0.5 * float(omega ** 2 @ K ** 2), E,
                                   labels=labels, frames=frames,
                                   potential_grad=lambda K: omega ** 2 * K)


def build(scenario):
    """Model and frames named in the scenario.

    Returns
    -------
    model : ModelSystem
    frames : dict
        Scenario frame name to :class:`GaugeFrame`.
    """
    model = _build_model(scenario.model)
    frames = {}
    if scenario.model.kind == "lattice_pft":
        return model, frames
    by_reference = {}
    for name, system in model.systems.items():
        ref = system.split.labels[system.split.gauge_slots[0]]
        by_reference[ref] = name
    for fs in scenario.frames:
        if fs.reference not in by_reference:
            raise ConfigError(f"no frame of model {scenario.model.kind!r} uses {fs.reference!r} as "
                              f"reference; choose from {sorted(by_reference)}",
                              f"frames.{fs.name}.reference")
        try:
            clock = fs.clock.build()
        except ValueError as exc:
            raise ConfigError(str(exc), f"frames.{fs.name}.clock") from None
        frames[fs.name] = model.frame(by_reference[fs.reference], clock).with_clocks((clock,), fs.name)
    return model, frames


# ---------------------------------------------------------------- output

def fmt(value):
    """17 significant digits: lossless for binary64."""
    return format(float(value), ".17g")


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return path


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


@dataclass(frozen=True)
class RunOutcome:
    exit_code: int
    artifacts: tuple = ()
    report: object = None
    message: str = ""


def _points(initial):
    arr = np.asarray(initial, dtype=float)
    return arr[None, :] if arr.ndim == 1 else arr


def _rtol_atol(scenario):
    return scenario.numerics.rtol, scenario.numerics.atol


def _cmd_reduce(scenario, model, frames, out):
    frame = frames[scenario.run.frame]
    qp = _points(scenario.run.initial)[0]
    t0, t1 = scenario.run.times[0], scenario.run.times[-1]
    times = np.linspace(t0, t1, scenario.run.samples)
    labels = frame.split.true_labels
    rows = []
    for t in times:
        h = reduced_hamiltonian(frame, t, qp)
        grad = reduced_hamiltonian_gradient(frame, t, qp)
        rows.append([t, h, *grad])
    header = ["t", "h"] + [f"dh/d{lab}" for lab in labels]
    return [write_csv(out / "reduce.csv", header, rows)]


def _cmd_evolve(scenario, model, frames, out):
    frame = frames[scenario.run.frame]
    rtol, atol = _rtol_atol(scenario)
    qp = _points(scenario.run.initial)[0]
    t0, t1 = scenario.run.times[0], scenario.run.times[-1]
    times = np.linspace(t0, t1, scenario.run.samples)
    if scenario.run.route == "hamiltonian":
        states = evolve_hamiltonian(frame, qp, t0, t1, times, rtol, atol).states
    else:
        states = np.array([evolve_geometric(frame, qp, t0, t, rtol, atol) for t in times])
    rows = [[t, *s] for t, s in zip(times, states)]
    return [write_csv(out / "evolve.csv", ["t", *frame.split.true_labels], rows)]


def _cmd_rrft(scenario, model, frames, out):
    src, dst = frames[scenario.run.frame], frames[scenario.run.target]
    t = scenario.run.times[0]
    t_hat = scenario.run.t_hat if scenario.run.t_hat is not None else t
    rtol, atol = _rtol_atol(scenario)
    smap = FrameMap(FramePair(src, dst), t, t_hat, True, rtol, atol)
    records = []
    for qp in _points(scenario.run.initial):
        image = apply_rrft(smap, qp)
        h_b, h_a = pullback_hamiltonian(smap, qp)
        records.append({"point": [float(v) for v in qp], "image": [float(v) for v in image],
                        "h_a": float(h_a), "h_b_pullback": float(h_b),
                        "abs_diff": float(abs(h_b - h_a))})
    payload = {"source": scenario.run.frame, "target": scenario.run.target, "t": t, "t_hat": t_hat,
               "source_labels": list(src.split.true_labels),
               "target_labels": list(dst.split.true_labels), "records": records}
    return [write_json(out / "rrft.json", payload)]


def emit_orbit_figure_data(scenario, out=None):
    """Gauge-orbit samples plus the points where the orbit crosses each cut.

    The orbit starts on the cut ``run.times[0]`` of ``run.frame`` at the true
    values ``run.initial`` and is sampled over ``run.s_range``. Rows are
    flagged ``sample`` or ``cut``; cut rows are added for every entry of
    ``run.times``.

    Returns
    -------
    pathlib.Path
    """
    model, frames = build(scenario)
    out = Path(scenario.run.output if out is None else out)
    frame = frames[scenario.run.frame]
    rtol, atol = _rtol_atol(scenario)
    qp = _points(scenario.run.initial)[0]
    z0 = frame.embed(scenario.run.times[0], qp)
    trace = trace_orbit(frame, z0, tuple(scenario.run.s_range), scenario.run.samples,
                        rtol=rtol, atol=atol)
    rows = [["sample", "", s, *z, r] for s, z, r in zip(trace.s, trace.points, trace.residuals)]
    x0 = frame.split.x(z0)[0]
    for t in scenario.run.times:
        s_cut = frame.k(t)[0] - x0
        z = flow(trace.generator, z0, s_cut, rtol, atol)
        rows.append(["cut", fmt(t), s_cut, *z, constraint_residual(frame.constraints, z)])
    if trace.truncated:
        log.warning("orbit left the branch; trace truncated at s = %s", fmt(trace.s[-1]))
    header = ["row", "cut_t", "s", *frame.split.labels, "residual"]
    return write_csv(out / "orbit.csv", header, rows)


def _cmd_orbit(scenario, model, frames, out):
    return [emit_orbit_figure_data(scenario, out)]


def verification_report(scenario, model=None, frames=None):
    """Run the invariant suite that matches the scenario's model."""
    if model is None:
        model, frames = build(scenario)
    rng = np.random.default_rng(scenario.numerics.seed)
    tol = scenario.numerics.tol
    n = scenario.numerics.n_points
    kind = scenario.model.kind
    run = scenario.run
    if kind == "lattice_pft":
        p = model.params
        dz = p["dz"]
        return verification.lattice_suite(p["D"], p["N"] * dz, (2 * dz, dz, dz / 2), run.s0,
                                          p["mu"], rng, tol)
    src = frames[run.frame]
    dst = frames[run.target] if run.target else None
    t = run.times[0]
    t_hat = run.t_hat if run.t_hat is not None else t
    if kind == "relativistic_particle":
        return verification.particle_suite(model, src, dst, t, t_hat, rng, n, tol)
    if kind == "linear_toy":
        return verification.toy_suite(model, src, dst, t, t_hat, rng, n, tol)
    if kind == "kepler":
        ang, rad = (src, dst) if src.split.gauge_slots == (1,) else (dst, src)
        return verification.kepler_suite(model, ang, rad, rng, n, tol)
    qps = _points(run.initial) if run.initial else None
    if qps is None:
        raise ConfigError("energy_constrained verification needs run.initial points", "run.initial")
    return verification.energy_suite(src, qps, run.times[0], run.times[-1], tol)


def _cmd_verify(scenario, model, frames, out):
    report = verification_report(scenario, model, frames)
    path = write_json(out / "verify.json", report.as_dict())
    return [path], report


_HANDLERS = {"reduce": _cmd_reduce, "evolve": _cmd_evolve, "rrft": _cmd_rrft,
             "orbit": _cmd_orbit, "verify": _cmd_verify}


def run(scenario, output=None):
    """Execute the scenario's command and write its artifacts.

    Returns
    -------
    RunOutcome
        Exit code 0 on success, 1 when a verification check fails, 2 on a
        configuration error, 3 on a numeric-domain error.
    """
    out = Path(scenario.run.output if output is None else output)
    try:
        model, frames = build(scenario)
        log.info("running %s on %s", scenario.run.command, scenario.model.kind)
        result = _HANDLERS[scenario.run.command](scenario, model, frames, out)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return RunOutcome(EXIT_CONFIG, message=str(exc))
    except NumericDomainError as exc:
        log.error("%s during %s: %s", type(exc).__name__, scenario.run.command, exc)
        return RunOutcome(EXIT_NUMERIC, message=f"{type(exc).__name__}: {exc}")
    if scenario.run.command == "verify":
        paths, report = result
        for c in report.checks:
            log.info("%-22s %s  max_error=%.3e tol=%.3g", c.name, "pass" if c.passed else "FAIL",
                     c.max_error, c.tolerance)
        return RunOutcome(EXIT_OK if report.passed else EXIT_VERIFY, tuple(paths), report)
    return RunOutcome(EXIT_OK, tuple(result))


def _configure_logging():
    level = os.environ.get("GAUGEFRAME_LOG", "info").lower()
    levels = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.INFO), format="%(levelname)s %(message)s",
                        stream=sys.stderr)
    if level not in levels:
        log.warning("unknown GAUGEFRAME_LOG value %r, using info", level)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="gaugeframe", description=__doc__.split("\n\n")[0])
    parser.add_argument("config", help="scenario YAML file")
    parser.add_argument("--tol", type=float, help="override every verification tolerance")
    parser.add_argument("--output", help="output directory")
    parser.add_argument("--command", choices=COMMANDS, help="override run.command")
    args = parser.parse_args(argv)
    _configure_logging()
    try:
        text = Path(args.config).read_text()
        scenario = parse_scenario(text)
        if args.command:
            scenario = dataclasses.replace(scenario, run=dataclasses.replace(scenario.run, command=args.command))
        if args.tol is not None:
            if not args.tol > 0:
                raise ConfigError("tolerance must be positive", "--tol")
            scenario = dataclasses.replace(
                scenario, numerics=dataclasses.replace(scenario.numerics, tol=args.tol))
    except OSError as exc:
        log.error("cannot read scenario: %s", exc)
        return EXIT_CONFIG
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except GaugeFrameError as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC
    outcome = run(scenario, args.output)
    for path in outcome.artifacts:
        log.info("wrote %s", path)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
