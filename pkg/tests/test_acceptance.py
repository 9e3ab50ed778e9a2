"""End-to-end acceptance gate: one test and one summary line per criterion."""

import numpy as np
import pytest

from gaugeframe.cli_io import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_VERIFY, main, parse_scenario, serialize
from gaugeframe.models import (
    boost_convergence,
    conormal_identities,
    convergence_orders,
    gaussian_packet,
    make_energy_constrained,
    make_kepler,
    make_lattice_pft,
    make_linear_toy,
    make_relativistic_particle,
    pft_generators,
)
from gaugeframe.phase_core import poisson_bracket
from gaugeframe.relational import evolve_geometric, evolve_hamiltonian, reduced_hamiltonian
from gaugeframe.verification import (
    canonical_bracket_check,
    dirac_t_independence_check,
    fluctuation_paradox_check,
    gauge_invariance_check,
    kepler_radial_momentum,
    kepler_suite,
    particle_suite,
    reference_value_check,
    sample_kepler,
    sample_particle,
    toy_suite,
)

SEED = 20240611


def fmt_err(x):
    return f"{x:.3e}"


@pytest.fixture(scope="module")
def particle_reports():
    out = {}
    for D in (1, 3):
        model = make_relativistic_particle(D, 1.0)
        f1, f2 = model.frame("frame1", 1.0), model.frame("frame2", 1.0)
        out[D] = particle_suite(model, f1, f2, 0.3, 0.8, np.random.default_rng(SEED + D), 100)
    return out


def test_criterion_1_particle_observables(particle_reports, acceptance_log):
    errs = {D: r["oracle_obs"].max_error for D, r in particle_reports.items()}
    ok = all(e <= 1e-8 for e in errs.values())
    acceptance_log(1, ok, "particle observable oracle, 100 points, "
                   + ", ".join(f"D={D} max {fmt_err(e)}" for D, e in errs.items()) + " (tol 1e-8)")
    assert ok


def test_criterion_2_particle_rrft(particle_reports, acceptance_log):
    ok = True
    parts = []
    for D, rep in particle_reports.items():
        m, rt, sy = rep["oracle_rrft"].max_error, rep["roundtrip"].max_error, rep["symplectic"].max_error
        ok &= m <= 1e-6 and rt <= 1e-7 and sy <= 1e-6
        parts.append(f"D={D} map {fmt_err(m)} roundtrip {fmt_err(rt)} symplectic {fmt_err(sy)}")
    acceptance_log(2, ok, "particle frame map; " + "; ".join(parts) + " (tol 1e-6/1e-7/1e-6)")
    assert ok


def test_criterion_3_particle_hamiltonian_mismatch(particle_reports, acceptance_log):
    ok = True
    parts = []
    for D, rep in particle_reports.items():
        c = rep["pullback"]
        ok &= c.max_error <= 1e-8 and c.detail["min_h"] >= 1.0 - 1e-9 and c.detail["min_abs_h_hat_pullback"] < 1.0
        parts.append(f"D={D} pullback {fmt_err(c.max_error)}, min h {c.detail['min_h']:.6f}, "
                     f"min |h_hat S| {c.detail['min_abs_h_hat_pullback']:.4f}")
    acceptance_log(3, ok, "Hamiltonian mismatch; " + "; ".join(parts) + " (m = 1)")
    assert ok


def test_criterion_4_kepler_oracles(acceptance_log):
    model = make_kepler(1.0, 1.0, 0.05)
    rep = kepler_suite(model, model.frame("angular", 1.0), model.frame("radial", 1.0),
                       np.random.default_rng(SEED), 50)
    names = ("oracle_phi_hat", "oracle_shape", "oracle_rrft", "oracle_hamiltonians")
    ok = all(rep[n].max_error <= 1e-6 and rep[n].samples >= 50 for n in names)
    acceptance_log(4, ok, "Kepler oracles on 50 points, "
                   + ", ".join(f"{n} {fmt_err(rep[n].max_error)}" for n in names) + " (tol 1e-6)")
    assert ok


def test_criterion_5_kepler_frame_equivalence(acceptance_log):
    model = make_kepler(1.0, 1.0, 0.05)
    ang, rad = model.frame("angular", 1.0), model.frame("radial", 1.0)
    g = model.oracles["conserved"]
    l = -1.0
    e = model.oracles["eccentricity"](l)
    # start 0.4 rad past perihelion on the incoming leg and sweep 2 rad outwards
    r_start = l * l / (1 + e * np.cos(0.4))
    p_start = kepler_radial_momentum(model, r_start, l)
    phi0 = 0.0
    times = np.linspace(phi0, phi0 + 2.0, 41)
    traj = evolve_hamiltonian(ang, [r_start, p_start], times[0], times[-1], times)
    l_ang = np.array([-reduced_hamiltonian(ang, t, s) for t, s in zip(times, traj.states)])
    g_ang = np.array([g(s[0], t, li) for t, s, li in zip(times, traj.states, l_ang)])

    r_end = traj.states[-1, 0]
    radii = np.linspace(r_start, r_end, 41)
    traj_r = evolve_hamiltonian(rad, [phi0, l], radii[0], radii[-1], radii)
    g_rad = np.array([g(r, s[0], s[1]) for r, s in zip(radii, traj_r.states)])
    l_rad = traj_r.states[:, 1]

    drift = max(np.ptp(g_ang), np.ptp(l_ang), np.ptp(g_rad), np.ptp(l_rad))
    mismatch = max(abs(np.mean(g_ang) - np.mean(g_rad)), abs(np.mean(l_ang) - np.mean(l_rad)))
    end_phi = abs(traj_r.states[-1, 0] - times[-1])
    ok = drift <= 1e-7 and mismatch <= 1e-6 and end_phi <= 1e-6
    acceptance_log(5, ok, f"Kepler frames over delta phi = 2 (r {r_start:.3f} to {r_end:.3f}, e = {e:.4f}): "
                   f"(g, l) mismatch {fmt_err(mismatch)} (tol 1e-6), drift {fmt_err(drift)} (tol 1e-7), "
                   f"endpoint angle {fmt_err(end_phi)}")
    assert ok


def _route_error(frame, qps, t0, t1):
    return max(float(np.max(np.abs(evolve_geometric(frame, qp, t0, t1)
                                    - evolve_hamiltonian(frame, qp, t0, t1).states[-1]))) for qp in qps)


def test_criterion_6_route_equivalence(acceptance_log):
    rng = np.random.default_rng(SEED)
    errs = {}
    particle = make_relativistic_particle(3, 1.0)
    errs["particle"] = _route_error(particle.frame("frame1", 1.0), sample_particle(rng, 3, 10), 0.2, 1.2)

    kepler = make_kepler(1.0, 1.0, 0.05)
    ang, rad = kepler.frame("angular", 1.0), kepler.frame("radial", 1.0)
    kep = []
    for l, r, _ in sample_kepler(rng, kepler, 5, (1.2, 1.5)):
        kep.append(_route_error(ang, [[r, kepler_radial_momentum(kepler, r, l)]], 0.0, 1.0))
    for l, r, _ in sample_kepler(rng, kepler, 5, (2.5, 4.0)):
        kep.append(_route_error(rad, [[rng.uniform(-1, 1), l]], r, r - 1.0 if r - 1.0 > 0.6 * r else r + 1.0))
    errs["kepler"] = max(kep)

    toy = make_linear_toy()
    errs["linear_toy"] = _route_error(toy.frame("A", 1.0), rng.uniform(-2, 2, (10, 2)), 0.0, 1.0)

    osc = make_energy_constrained(lambda K: np.eye(2), lambda K: 0.5 * (K[0] ** 2 + 2 * K[1] ** 2), 3.0, dim=2,
                                  potential_grad=lambda K: np.array([K[0], 2 * K[1]]))
    qps = np.column_stack([rng.uniform(-0.5, 0.5, 10), rng.uniform(-0.8, 0.8, 10)])
    errs["energy_constrained"] = _route_error(osc.frame("K2", 1.0), qps, 0.0, 1.0)
    ok = all(e <= 1e-7 for e in errs.values())
    acceptance_log(6, ok, "route equivalence over unit spans, "
                   + ", ".join(f"{k} {fmt_err(v)}" for k, v in errs.items()) + " (tol 1e-7)")
    assert ok


def test_criterion_7_observable_map_properties(acceptance_log):
    rng = np.random.default_rng(SEED)
    worst = {"gauge_invariance": 0.0, "reference_value": 0.0, "canonical_brackets": 0.0,
             "dirac_t_independence": 0.0}
    tol = {"gauge_invariance": 1e-6, "reference_value": 1e-10, "canonical_brackets": 1e-6,
           "dirac_t_independence": 1e-9}
    cases = []
    for D in (1, 3):
        model = make_relativistic_particle(D, 1.0)
        frame = model.frame("frame1", 1.0)
        zs = [frame.constraints.on_surface(qp, [x]) for qp, x in
              zip(sample_particle(rng, D, 10), rng.uniform(-1, 1, 10))]
        cases.append((frame, 0.4, zs))
    kepler = make_kepler(1.0, 1.0, 0.05)
    zs = []
    for l, r, _ in sample_kepler(rng, kepler, 10, (2.5, 4.0)):
        zs.append(np.array([r, rng.uniform(-0.1, 0.1), kepler_radial_momentum(kepler, r, l), l]))
    cases.append((kepler.frame("angular", 1.0), 0.1, zs))
    toy = make_linear_toy()
    frame = toy.frame("A", 1.0)
    cases.append((frame, 0.5, [frame.constraints.on_surface(qp, [x]) for qp, x in
                               zip(rng.uniform(-2, 2, (10, 2)), rng.uniform(-2, 2, 10))]))
    for frame, t, zs in cases:
        worst["gauge_invariance"] = max(worst["gauge_invariance"], gauge_invariance_check(frame, t, zs).max_error)
        worst["reference_value"] = max(worst["reference_value"], reference_value_check(frame, t, zs).max_error)
        worst["canonical_brackets"] = max(worst["canonical_brackets"],
                                          canonical_bracket_check(frame, t, zs[:5]).max_error)
        worst["dirac_t_independence"] = max(worst["dirac_t_independence"],
                                            dirac_t_independence_check(frame, (t, t + 0.3, t - 0.2),
                                                                       zs[:3]).max_error)
    ok = all(worst[k] <= tol[k] for k in worst)
    acceptance_log(7, ok, "observable-map properties on particle D=1,3, Kepler, toy: "
                   + ", ".join(f"{k} {fmt_err(v)} (tol {tol[k]:g})" for k, v in worst.items()))
    assert ok


def test_criterion_8_linear_toy(acceptance_log):
    model = make_linear_toy()
    rep = toy_suite(model, model.frame("A", 1.0), model.frame("B", 1.0), 0.2, 0.5,
                    np.random.default_rng(SEED), 100, 1e-10)
    m, rp = rep["oracle_rrft"].max_error, rep["reparametrization"].max_error
    ok = m <= 1e-10 and rp <= 1e-10
    acceptance_log(8, ok, f"linear toy map (k + k_hat - q, -p) {fmt_err(m)}, "
                   f"reparametrized Hamiltonians {fmt_err(rp)} (tol 1e-10)")
    assert ok


def test_criterion_9_lattice_field_theory(acceptance_log):
    dzs = (0.2, 0.1, 0.05)
    length = 12.8
    bh, bp, ident = [], [], 0.0
    rng = np.random.default_rng(SEED)
    for dz in dzs:
        model = make_lattice_pft(1, int(round(length / dz)), dz)
        grid = model.params["grid"]
        gens = pft_generators(model, on_fields=True)
        u = gaussian_packet(grid)
        bh.append(abs(poisson_bracket(gens["kappa_B"], gens["h"], u) - gens["p_momentum"](u)))
        bp.append(abs(poisson_bracket(gens["kappa_B"], gens["p_momentum"], u) - gens["h"](u)))
        x = np.vstack([np.zeros(grid.sites), grid.coords])
        x = x + rng.uniform(-0.2, 0.2, (2, 1)) * np.sin(rng.uniform(0.1, 1.0, (2, 1)) * grid.coords[0])
        ident = max(ident, *conormal_identities(grid, x))
    assert int(round(length / 0.1)) == 128
    o_h, o_p = convergence_orders(dzs, bh), convergence_orders(dzs, bp)
    reports, o_b = boost_convergence(0.1, dzs, length)
    in_band = lambda o: bool(np.all(np.abs(o - 2.0) <= 0.3))
    ok = in_band(o_h) and in_band(o_p) and in_band(o_b) and ident <= 1e-12
    acceptance_log(9, ok, f"lattice N=128 dz=0.1: {{kB,h}}-p {fmt_err(bh[1])} orders {np.round(o_h, 3).tolist()}, "
                   f"{{kB,p}}-h {fmt_err(bp[1])} orders {np.round(o_p, 3).tolist()}, "
                   f"boost deviation {fmt_err(reports[1].abs_deviation)} orders {np.round(o_b, 3).tolist()}, "
                   f"co-normal identities {fmt_err(ident)} (tol 1e-12)")
    assert ok


def test_criterion_10_fluctuation_paradox(acceptance_log):
    model = make_relativistic_particle(1, 1.0)
    f1, f2 = model.frame("frame1", 1.0), model.frame("frame2", 1.0)
    rng = np.random.default_rng(SEED)
    zs = [f1.constraints.on_surface(qp, [x]) for qp, x in zip(sample_particle(rng, 1, 100), rng.uniform(-1, 1, 100))]
    check = fluctuation_paradox_check(f1, f2, 0.3, 0.8, zs, 0)
    entry = check.as_dict()
    ok = entry["pass"] and entry["samples"] == 100
    acceptance_log(10, ok, f"report entry {entry['check']!r}: spread of K0 in its own frame {fmt_err(check.max_error)}, "
                   f"in the other frame {check.detail['spread_other_frame']:.3f} (needs > 0.1)")
    assert ok


SCENARIO = """
model:
  kind: relativistic_particle
  params: {D: 1, m: 1.0}
frames:
  lab: {reference: K0, clock: {kind: linear, coefficients: [0.0, 1.0]}}
  other: {reference: K1, clock: {kind: linear, coefficients: [0.0, 1.0]}}
run:
  command: COMMAND
  times: [0.3, 1.3]
  t_hat: 0.8
  initial: [[0.1, -0.7], [-0.4, -1.2]]
numerics: {seed: 3, n_points: 20}
"""


def test_criterion_11_cli_contract(tmp_path, acceptance_log):
    identical = True
    roundtrip = True
    for command, artifact in (("verify", "verify.json"), ("evolve", "evolve.csv"), ("rrft", "rrft.json"),
                              ("orbit", "orbit.csv"), ("reduce", "reduce.csv")):
        text = SCENARIO.replace("COMMAND", command)
        sc = parse_scenario(text)
        roundtrip &= parse_scenario(serialize(sc)) == sc
        path = tmp_path / f"{command}.yaml"
        path.write_text(text)
        codes = [main([str(path), "--output", str(tmp_path / f"{command}{i}")]) for i in range(2)]
        identical &= codes == [EXIT_OK, EXIT_OK]
        identical &= (tmp_path / f"{command}0" / artifact).read_bytes() == \
            (tmp_path / f"{command}1" / artifact).read_bytes()
    verify = tmp_path / "verify.yaml"
    bad = tmp_path / "bad.yaml"
    bad.write_text(SCENARIO.replace("COMMAND", "launch"))
    off = tmp_path / "off.yaml"
    off.write_text(SCENARIO.replace("COMMAND", "rrft").replace("[-0.4, -1.2]", "[-0.4, 1.2]"))
    codes = {
        0: main([str(verify), "--output", str(tmp_path / "c0")]),
        1: main([str(verify), "--tol", "1e-30", "--output", str(tmp_path / "c1")]),
        2: main([str(bad)]),
        3: main([str(off), "--output", str(tmp_path / "c3")]),
    }
    contract = codes == {0: EXIT_OK, 1: EXIT_VERIFY, 2: EXIT_CONFIG, 3: EXIT_NUMERIC}
    ok = identical and roundtrip and contract
    acceptance_log(11, ok, f"byte-identical reruns {identical}, parse/serialize identity {roundtrip}, "
                   f"exit codes {codes}")
    assert ok
