"""Relational observables, reduced Hamiltonians and the two evolution routes.

The observable ``O_F(t)`` at a constraint-surface point is ``F`` evaluated
where the gauge orbit through the point meets the cut ``x = k(t)``; it is
computed by flowing onto the cut, not by summing the bracket series.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import StepFailure
from .flow_engine import ATOL, RTOL, flow_to_cut


@dataclass(frozen=True)
class RelationalObservable:
    """``O_F(t)`` for a base field ``F`` in a given frame."""

    base: object
    frame: object
    t: float

    def __call__(self, z):
        return evaluate_observable(self, z)


@dataclass(frozen=True)
class Trajectory:
    """Reduced-space samples ``states[i]`` at ``times[i]``."""

    times: np.ndarray
    states: np.ndarray
    labels: tuple


def evaluate_observable(obs, z, rtol=RTOL, atol=ATOL):
    return obs.base(flow_to_cut(obs.frame, obs.t, z, rtol, atol))


def observable_values(frame, t, z, rtol=RTOL, atol=ATOL):
    """The whole landing point: every ``O_{z_i}(t)`` at once."""
    return flow_to_cut(frame, t, z, rtol, atol)


def reduced_hamiltonian(frame, t, qp):
    """``h_s(q, p; t) = kdot^I(t) h_I(x = k(t); q, p)``."""
    rates = frame.kdot(t)
    if not np.any(rates):
        return 0.0
    z = frame.embed(t, qp)
    return float(rates @ frame.constraints.h_values(z))


def reduced_hamiltonian_gradient(frame, t, qp):
    """Gradient of ``h_s`` with respect to the true values ``(q, p)``."""
    rates = frame.kdot(t)
    if not np.any(rates):
        return np.zeros(len(qp))
    z = frame.embed(t, qp)
    jac = frame.constraints.jacobian(z)[:, frame.split.true_index()]
    return rates @ jac


def physical_hamiltonian(frame, t, t_ref, z):
    """``H_s(t)``: the reduced Hamiltonian with ``(q, p)`` replaced by
    their relational observables at ``t_ref``, evaluated at ``z``."""
    landed = flow_to_cut(frame, t_ref, z)
    return reduced_hamiltonian(frame, t, frame.project(landed))


def evolve_hamiltonian(frame, qp0, t0, t1, t_eval=None, rtol=RTOL, atol=ATOL):
    """Integrate Hamilton's equations of the reduced Hamiltonian.

    Time is carried as an extra coordinate with unit rate, so explicitly
    time-dependent clocks are handled like autonomous ones.
    """
    qp0 = np.asarray(qp0, dtype=float)
    n = qp0.size // 2
    if t_eval is None:
        t_eval = np.array([t0, t1])
    t_eval = np.asarray(t_eval, dtype=float)

    def rhs(tau, state):
        t = state[-1]
        g = reduced_hamiltonian_gradient(frame, t, state[:-1])
        return np.concatenate([g[n:], -g[:n], [1.0]])

    if t1 == t0:
        states = np.repeat(qp0[None, :], t_eval.size, axis=0)
        return Trajectory(t_eval, states, frame.split.true_labels)
    sol = solve_ivp(rhs, (t0, t1), np.concatenate([qp0, [t0]]), method="RK45",
                    t_eval=t_eval, rtol=rtol, atol=atol, max_step=abs(t1 - t0) / 8)
    if sol.status != 0:
        raise StepFailure(sol.message)
    return Trajectory(sol.t, sol.y[:-1].T, frame.split.true_labels)


def evolve_geometric(frame, qp0, t0, t1, rtol=RTOL, atol=ATOL):
    """Embed at cut ``t0``, follow the gauge orbit to cut ``t1``, project."""
    qp0 = np.asarray(qp0, dtype=float)
    if t1 == t0:
        return qp0.copy()
    z0 = frame.embed(t0, qp0)
    return frame.project(flow_to_cut(frame, t1, z0, rtol, atol))


__all__ = [
    "RelationalObservable",
    "Trajectory",
    "evaluate_observable",
    "observable_values",
    "reduced_hamiltonian",
    "reduced_hamiltonian_gradient",
    "physical_hamiltonian",
    "evolve_hamiltonian",
    "evolve_geometric",
]
