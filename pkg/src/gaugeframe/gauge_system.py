"""Constraint systems, branch selection, gauge clocks and frames.

A :class:`ConstraintSystem` holds the secondary constraints twice: in raw
form ``C_I(q, p, x, y)`` and solved on one branch as
``Cbar_I = y_I + h_I(x; q, p)``. A :class:`GaugeFrame` adds the gauge
conditions ``G^I(t) = x^I - k^I(t)``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BranchViolation, NoConvergence, NonFiniteEvaluation, SingularTransversality
from .phase_core import CoordinateSplit, ScalarField

RADICAND_TOL = 1e-12


def guarded_sqrt(value, tol=RADICAND_TOL):
    """Square root that clamps tiny negative radicands and rejects the rest.

    Raises
    ------
    BranchViolation
        If any radicand is below ``-tol``.
    """
    value = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(value)):
        raise NonFiniteEvaluation("non-finite radicand")
    if np.any(value < -tol):
        raise BranchViolation(f"negative radicand {float(np.min(value)):.3e} outside the branch")
    out = np.sqrt(np.maximum(value, 0.0))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BranchSigns:
    """Sign of each solved momentum ``y_I`` on the chosen branch.

    ``+1``/``-1`` demand that sign, ``0`` marks a constraint with a single
    root (no sign condition).
    """

    sigma: tuple

    def __post_init__(self):
        sigma = tuple(int(s) for s in self.sigma)
        if any(s not in (-1, 0, 1) for s in sigma):
            raise ValueError("branch signs must be -1, 0 or +1")
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def single(cls, n):
        return cls((0,) * n)

    def check(self, y, tol=0.0):
        y = np.atleast_1d(y)
        for i, (s, v) in enumerate(zip(self.sigma, y)):
            if s and s * v < -tol:
                raise BranchViolation(f"y[{i}] = {v:.6g} has the wrong sign for branch {s:+d}")


@dataclass(frozen=True)
class GaugeClock:
    """Gauge function ``k(t)`` given by polynomial coefficients in ascending order."""

    coefficients: tuple
    kind: str = "polynomial"

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a clock needs at least one coefficient")
        if self.kind not in ("linear", "polynomial"):
            raise ValueError(f"unknown clock kind {self.kind!r}")
        if self.kind == "linear" and len(coeffs) > 2:
            raise ValueError("a linear clock has at most two coefficients")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def linear(cls, rate, offset=0.0):
        """``k(t) = offset + rate * t``."""
        return cls((offset, rate), "linear")

    @classmethod
    def constant(cls, value):
        return cls((value, 0.0), "linear")

    def value(self, t):
        return float(np.polynomial.polynomial.polyval(t, self.coefficients))

    def rate(self, t):
        c = self.coefficients
        if len(c) == 1:
            return 0.0
        dc = np.polynomial.polynomial.polyder(c)
        return float(np.polynomial.polynomial.polyval(t, dc))

    @property
    def is_frozen(self):
        return all(c == 0.0 for c in self.coefficients[1:])


@dataclass(frozen=True)
class ConstraintSystem:
    """Secondary constraints in raw and solved form on one branch.

    Parameters
    ----------
    split : CoordinateSplit
        Which slots are solved for (the gauge slots).
    h : callable
        ``z -> array(n_gauge)`` of the solved parts ``h_I(x; q, p)``; must
        not read the ``y`` entries of ``z``.
    h_jac : callable, optional
        ``z -> array(n_gauge, dim)``, analytic Jacobian of ``h``.
    raw : callable, optional
        ``z -> array(n_gauge)`` of the raw constraints ``C_I``.
    raw_jac : callable, optional
        Analytic Jacobian of ``raw``.
    branch : BranchSigns, optional
        Defaults to single-root for every constraint.
    """

    split: CoordinateSplit
    h: Callable
    h_jac: Optional[Callable] = None
    raw: Optional[Callable] = None
    raw_jac: Optional[Callable] = None
    branch: Optional[BranchSigns] = None
    label: str = field(default="")

    def __post_init__(self):
        if self.branch is None:
            object.__setattr__(self, "branch", BranchSigns.single(self.split.n_gauge))
        if len(self.branch.sigma) != self.split.n_gauge:
            raise ValueError("need one branch sign per constraint")

    @property
    def n_gauge(self):
        return self.split.n_gauge

    def h_values(self, z):
        return np.atleast_1d(np.asarray(self.h(np.asarray(z, dtype=float)), dtype=float))

    def solved(self, z):
        """Values of ``Cbar_I = y_I + h_I``."""
        return self.split.y(z) + self.h_values(z)

    def jacobian(self, z, step=None):
        """Jacobian of the solved constraints, shape ``(n_gauge, dim)``."""
        z = np.asarray(z, dtype=float)
        if self.h_jac is not None:
            jac = np.array(self.h_jac(z), dtype=float, copy=True)
        else:
            jac = _fd_jacobian(self.h_values, z, step)
        jac[np.arange(self.n_gauge), self.split.y_index()] += 1.0
        return jac

    def raw_values(self, z):
        if self.raw is None:
            raise ValueError(f"constraint system {self.label!r} has no raw form")
        return np.atleast_1d(np.asarray(self.raw(np.asarray(z, dtype=float)), dtype=float))

    def raw_jacobian(self, z, step=None):
        z = np.asarray(z, dtype=float)
        if self.raw_jac is not None:
            return np.asarray(self.raw_jac(z), dtype=float)
        return _fd_jacobian(self.raw_values, z, step)

    def solved_fields(self):
        """One :class:`ScalarField` per solved constraint."""
        fields = []
        for i in range(self.n_gauge):
            fields.append(ScalarField(
                lambda z, i=i: float(self.solved(z)[i]),
                lambda z, i=i: self.jacobian(z)[i],
                f"Cbar[{i}]",
            ))
        return fields

    def on_surface(self, qp, x):
        """Complete true values and reference values to an on-surface point."""
        z = self.split.assemble(qp, x, np.zeros(self.n_gauge))
        z[self.split.y_index()] = -self.h_values(z)
        return z


def _fd_jacobian(fn, z, step=None):
    f0 = fn(z)
    jac = np.empty((f0.size, z.size))
    for j in range(z.size):
        h = step if step is not None else 1e-5 * max(1.0, abs(z[j]))
        e = np.zeros_like(z)
        e[j] = h
        d1 = (fn(z + e) - fn(z - e)) / (2 * h)
        d2 = (fn(z + 0.5 * e) - fn(z - 0.5 * e)) / h
        jac[:, j] = (4 * d2 - d1) / 3
    if not np.all(np.isfinite(jac)):
        raise NonFiniteEvaluation("non-finite constraint Jacobian")
    return jac


@dataclass(frozen=True)
class GaugeFrame:
    """Relational reference frame: reference fields plus gauge clocks.

    At least one clock must have a non-zero rate somewhere; frozen frames
    are still constructible with ``allow_frozen=True`` for diagnostics.
    """

    constraints: ConstraintSystem
    clocks: tuple
    name: str = ""
    true_domain: Optional[Callable] = None
    allow_frozen: bool = False

    def __post_init__(self):
        clocks = tuple(self.clocks)
        object.__setattr__(self, "clocks", clocks)
        if len(clocks) != self.constraints.n_gauge:
            raise ValueError(f"frame {self.name!r} needs {self.constraints.n_gauge} clocks, got {len(clocks)}")
        if not self.allow_frozen and all(c.is_frozen for c in clocks):
            raise ValueError(f"frame {self.name!r}: at least one clock must have a non-zero rate")

    @property
    def split(self):
        return self.constraints.split

    def k(self, t):
        return np.array([c.value(t) for c in self.clocks])

    def kdot(self, t):
        return np.array([c.rate(t) for c in self.clocks])

    def with_clocks(self, clocks, name=None):
        return GaugeFrame(self.constraints, tuple(clocks), name or self.name,
                          self.true_domain, self.allow_frozen)

    def gauge_fields(self, t):
        """``G^I(t) = x^I - k^I(t)`` as scalar fields."""
        k = self.k(t)
        fields = []
        for i, xi in enumerate(self.split.x_index()):
            unit = np.zeros(self.split.dim)
            unit[xi] = 1.0
            fields.append(ScalarField(lambda z, xi=xi, ki=k[i]: float(z[xi] - ki),
                                      lambda z, u=unit: u, f"G[{i}]"))
        return fields

    def embed(self, t, qp):
        """Point of the cut ``x = k(t)`` with true values ``qp`` (y from the constraints)."""
        return self.constraints.on_surface(np.asarray(qp, dtype=float), self.k(t))

    def project(self, z):
        return self.split.true_part(z)

    def check_domain(self, qp):
        if self.true_domain is not None and not self.true_domain(np.asarray(qp, dtype=float)):
            raise BranchViolation(f"true values {np.asarray(qp)} outside the domain of frame {self.name!r}")


@dataclass(frozen=True)
class StabilityResult:
    """Solution ``X_*`` of the stability condition and the matrix it used."""

    X_star: np.ndarray
    matrix: np.ndarray


def newton_momenta(raw_values, raw_jacobian, z, y_index, guess, tol=1e-12, max_iter=50):
    """Newton iteration on ``raw_values(z) = 0`` over the entries ``z[y_index]``.

    The stopping test is relative to ``1 + max |dC/dy| (|y| + 1)``.
    """
    z = np.array(z, dtype=float)
    z[y_index] = guess
    converged = False
    for _ in range(max_iter):
        c = raw_values(z)
        jy = raw_jacobian(z)[:, y_index]
        scale = 1.0 + np.max(np.abs(jy) * (np.abs(z[y_index]) + 1.0))
        try:
            dy = np.linalg.solve(jy, -c)
        except np.linalg.LinAlgError:
            raise NoConvergence("singular y-Jacobian in momentum solve") from None
        z[y_index] += dy
        if not np.all(np.isfinite(z)):
            raise NoConvergence("Newton iterate diverged")
        if converged:
            # one polishing step after the residual test passed
            return z[y_index].copy()
        converged = np.max(np.abs(c)) <= tol * scale
    raise NoConvergence(f"momentum solve did not converge in {max_iter} iterations")


def solve_for_momenta(system, z_partial, guess=None, tol=1e-12, max_iter=50, branch=None):
    """Solve the raw constraints for the gauge momenta ``y`` by Newton iteration.

    Parameters
    ----------
    system : ConstraintSystem
        Must carry a raw form.
    z_partial : array
        Kinematical vector; its ``y`` entries are ignored.
    guess : array, optional
        Starting ``y``; defaults to ``sigma_I`` (``1`` for single roots).
    tol : float
        Relative residual tolerance, scaled by the constraint magnitude.

    Returns
    -------
    numpy.ndarray
        The ``y`` values.

    Raises
    ------
    NoConvergence
        After ``max_iter`` iterations.
    BranchViolation
        If the root has the wrong sign or is not the solved-branch root.
    """
    branch = branch or system.branch
    if guess is None:
        guess = [s if s else 1.0 for s in branch.sigma]
    z = np.array(z_partial, dtype=float)
    y = newton_momenta(system.raw_values, system.raw_jacobian, z, system.split.y_index(),
                       np.atleast_1d(np.asarray(guess, dtype=float)), tol, max_iter)
    branch.check(y)
    z[system.split.y_index()] = y
    expected = -system.h_values(z)
    if np.any(np.abs(y - expected) > 1e-8 * (1.0 + np.abs(expected))):
        raise BranchViolation("Newton converged to a root outside the selected branch")
    return y


def constraint_residual(system, z):
    """``max_I |Cbar_I(z)|``."""
    values = system.solved(z)
    if not np.all(np.isfinite(values)):
        raise NonFiniteEvaluation("non-finite constraint value")
    return float(np.max(np.abs(values)))


def gauge_residual(frame, t, z):
    """Component-wise ``x^I(z) - k^I(t)``."""
    return frame.split.x(z) - frame.k(t)


def stability_multipliers(frame, t, z, use_raw=False, max_condition=1e12):
    """Solve the stability condition ``Delta X = kdot(t)``.

    ``Delta^I_J = {C_J, x^I} = dC_J/dy_I``. With solved constraints this is
    the identity and ``X_* = kdot`` exactly.

    Raises
    ------
    SingularTransversality
        If ``Delta`` is singular or badly conditioned.
    """
    system = frame.constraints
    yi = frame.split.y_index()
    jac = system.raw_jacobian(z) if use_raw else system.jacobian(z)
    delta = jac[:, yi].T
    cond = np.linalg.cond(delta)
    if not np.isfinite(cond) or cond > max_condition:
        raise SingularTransversality(f"stability matrix has condition number {cond:.3e}")
    x_star = np.linalg.solve(delta, frame.kdot(t))
    return StabilityResult(x_star, delta)


__all__ = [
    "guarded_sqrt",
    "BranchSigns",
    "GaugeClock",
    "ConstraintSystem",
    "GaugeFrame",
    "StabilityResult",
    "newton_momenta",
    "solve_for_momenta",
    "constraint_residual",
    "gauge_residual",
    "stability_multipliers",
]
