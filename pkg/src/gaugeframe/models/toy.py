"""Two-pair linear toy model.

Coordinates ``(q, x)`` with momenta ``(p, y)`` and the constraint
``C = p^2/2 - y^2/2``, used on the branch ``Cbar = y + p``. Frame ``A`` takes
``x`` as reference field (``h = p``), frame ``B`` takes ``q``
(``h = y``). Every map has a closed form, so the engine can be compared with
the oracles to integrator precision.
"""

import numpy as np

from ..gauge_system import ConstraintSystem
from ..phase_core import CoordinateSplit
from .base import ModelSystem, _as_clock

LABELS = ("q", "x", "p", "y")


def make_linear_toy(k=1.0, k_hat=1.0):
    """Build the toy model with default clocks ``k`` (frame A) and ``k_hat`` (frame B).

    Clocks are :class:`GaugeClock` instances or rates of linear clocks.

    Returns
    -------
    ModelSystem
        Oracles:

        ``oracle_obs(qp, x, k)``: ``(q + k - x, p)``;
        ``oracle_obs_hat(qp_hat, q, k_hat)``: ``(x + k_hat - q, y)``;
        ``oracle_rrft(qp, k, k_hat)``: ``(k + k_hat - q, -p)``;
        ``oracle_h(qp, k_dot)``: ``k_dot p``;
        ``oracle_h_hat(qp_hat, k_hat_dot)``: ``k_hat_dot y``;
        ``reparametrization(t, clock, clock_hat)``: ``(T, T')`` with
        ``k_hat(T(t)) = -k(t)`` for linear clocks.
    """
    clock, clock_hat = _as_clock(k), _as_clock(k_hat)

    def raw(z):
        return np.array([0.5 * z[2] ** 2 - 0.5 * z[3] ** 2])

    def raw_jac(z):
        return np.array([[0.0, 0.0, z[2], -z[3]]])

    def h_a(z):
        return np.array([z[2]])

    def h_b(z):
        return np.array([z[3]])

    jac_a = np.array([[0.0, 0.0, 1.0, 0.0]])
    jac_b = np.array([[0.0, 0.0, 0.0, 1.0]])
    sys_a = ConstraintSystem(CoordinateSplit(LABELS, (0,), (1,)), h_a, lambda z: jac_a,
                             raw, raw_jac, None, "toy/A")
    sys_b = ConstraintSystem(CoordinateSplit(LABELS, (1,), (0,)), h_b, lambda z: jac_b,
                             raw, raw_jac, None, "toy/B")

    def oracle_obs(qp, x, k):
        q, p = qp
        return np.array([q + k - x, p])

    def oracle_obs_hat(qp_hat, q, k_hat):
        x, y = qp_hat
        return np.array([x + k_hat - q, y])

    def oracle_rrft(qp, k, k_hat):
        q, p = qp
        return np.array([k + k_hat - q, -p])

    def oracle_h(qp, k_dot):
        return k_dot * qp[1]

    def oracle_h_hat(qp_hat, k_hat_dot):
        return k_hat_dot * qp_hat[1]

    def reparametrization(t, clock, clock_hat):
        clock, clock_hat = _as_clock(clock), _as_clock(clock_hat)
        if len(clock_hat.coefficients) > 2 or len(clock.coefficients) > 2:
            raise ValueError("closed-form reparametrization needs linear clocks")
        c0, c1 = (clock.coefficients + (0.0,))[:2]
        d0, d1 = (clock_hat.coefficients + (0.0,))[:2]
        if d1 == 0:
            raise ValueError("frame B clock is frozen")
        return (-(c0 + c1 * t) - d0) / d1, -c1 / d1

    return ModelSystem(
        name="linear_toy",
        params={"k": clock.coefficients, "k_hat": clock_hat.coefficients},
        systems={"A": sys_a, "B": sys_b},
        oracles={
            "oracle_obs": oracle_obs,
            "oracle_obs_hat": oracle_obs_hat,
            "oracle_rrft": oracle_rrft,
            "oracle_h": oracle_h,
            "oracle_h_hat": oracle_h_hat,
            "reparametrization": reparametrization,
        },
        raw=raw,
        default_clocks={"A": (clock,), "B": (clock_hat,)},
    )


__all__ = ["make_linear_toy"]
