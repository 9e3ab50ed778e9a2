"""Hamiltonian flows of constraint combinations and landing on gauge cuts.

All flows are integrated with the embedded Dormand-Prince 4(5) pair of
:func:`scipy.integrate.solve_ivp`. The coefficients ``g^I`` of a generator
``g^I Cbar_I`` are numbers frozen before the flow starts; the substitution
``g = k(t) - x`` happens at the initial point only.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BranchViolation, NonFiniteEvaluation, StepFailure
from .gauge_system import constraint_residual
from .phase_core import gradient, hamiltonian_vector_field

RTOL = 1e-10
ATOL = 1e-12


@dataclass(frozen=True)
class FlowGenerator:
    """Generator ``g^I Cbar_I`` with constant coefficients."""

    coefficients: np.ndarray
    constraints: object

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if g.size != self.constraints.n_gauge:
            raise ValueError("one coefficient per constraint is required")
        object.__setattr__(self, "coefficients", g)

    @property
    def is_zero(self):
        return not np.any(self.coefficients)

    def vector_field(self, z):
        jac = self.constraints.jacobian(z)
        return hamiltonian_vector_field(self.coefficients @ jac)


@dataclass(frozen=True)
class OrbitTrace:
    """Samples of a gauge orbit.

    ``points[i]`` is the orbit point at flow parameter ``s[i]``;
    ``residuals[i]`` the constraint residual there. ``truncated`` is set
    when the orbit left the branch before the last requested sample.
    """

    s: np.ndarray
    points: np.ndarray
    residuals: np.ndarray
    generator: FlowGenerator
    truncated: bool = False


def integrate(rhs, z0, s_final, rtol=RTOL, atol=ATOL, max_step=None):
    """Integrate ``dz/ds = rhs(z)`` from 0 to ``s_final`` and return the end point.

    Raises
    ------
    StepFailure
        If the integrator gives up (step underflow, typically at a branch edge).
    """
    z0 = np.asarray(z0, dtype=float)
    if s_final == 0:
        return z0.copy()
    if max_step is None:
        max_step = abs(s_final) / 8
    sol = solve_ivp(lambda s, z: rhs(z), (0.0, s_final), z0, method="RK45",
                    rtol=rtol, atol=atol, max_step=max_step)
    if sol.status != 0:
        raise StepFailure(sol.message)
    z = sol.y[:, -1]
    if not np.all(np.isfinite(z)):
        raise NonFiniteEvaluation("flow produced non-finite coordinates")
    return z


def flow(gen, z0, s_final=1.0, rtol=RTOL, atol=ATOL, project=True):
    """Flow ``z0`` along ``gen`` for parameter length ``s_final``.

    Every ``Cbar_I`` is an exact first integral of the flow (``h`` does not
    involve ``y`` and the solved constraints commute). With ``project`` the
    end point's ``y`` is reset from the initial constraint values, which
    removes the integrator's drift off the constraint surface.
    """
    z0 = np.array(z0, dtype=float)
    if gen.is_zero:
        return z0
    system = gen.constraints
    c0 = system.solved(z0) if project else None
    z = integrate(gen.vector_field, z0, s_final, rtol, atol)
    if project:
        z[system.split.y_index()] = c0 - system.h_values(z)
    return z


def hamiltonian_flow(field, z0, s_final, rtol=RTOL, atol=ATOL, max_step=None):
    """Flow of an arbitrary scalar field (analytic gradient strongly advised)."""
    return integrate(lambda z: hamiltonian_vector_field(gradient(field, z)),
                     z0, s_final, rtol, atol, max_step)


def cut_generator(frame, t, z0):
    """Generator whose unit flow lands ``z0`` on the cut ``x = k(t)``."""
    return FlowGenerator(frame.k(t) - frame.split.x(z0), frame.constraints)


def flow_to_cut(frame, t, z0, rtol=RTOL, atol=ATOL):
    """Gauge-transform ``z0`` onto the cut ``x = k(t)`` of ``frame``.

    Since ``dx^I/ds = g^I`` is constant along the flow, the landing on the cut
    is exact up to rounding.
    """
    return flow(cut_generator(frame, t, z0), z0, 1.0, rtol, atol)


def trace_orbit(frame, z0, s_range, n_samples, index=None, rtol=RTOL, atol=ATOL):
    """Sample the gauge orbit through ``z0`` uniformly in the flow parameter.

    The generator has unit coefficient on clock ``index`` (default: the first
    clock that is not frozen) and zero elsewhere. Leaving the branch truncates
    the trace at the last valid sample instead of raising.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    if index is None:
        index = next((i for i, c in enumerate(frame.clocks) if not c.is_frozen), 0)
    g = np.zeros(frame.constraints.n_gauge)
    g[index] = 1.0
    gen = FlowGenerator(g, frame.constraints)
    s0, s1 = s_range
    grid = np.array([s0]) if n_samples == 1 else np.linspace(s0, s1, n_samples)
    z = np.array(z0, dtype=float)
    if s0 != 0:
        z = flow(gen, z, s0, rtol, atol)
    points = [z]
    truncated = False
    for a, b in zip(grid[:-1], grid[1:]):
        try:
            z = flow(gen, z, b - a, rtol, atol)
        except (BranchViolation, StepFailure):
            truncated = True
            break
        points.append(z)
    points = np.array(points)
    residuals = np.array([constraint_residual(frame.constraints, p) for p in points])
    return OrbitTrace(grid[:len(points)], points, residuals, gen, truncated)


__all__ = [
    "RTOL",
    "ATOL",
    "FlowGenerator",
    "OrbitTrace",
    "integrate",
    "flow",
    "hamiltonian_flow",
    "cut_generator",
    "flow_to_cut",
    "trace_orbit",
]
