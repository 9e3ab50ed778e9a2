"""Free relativistic particle in ``D + 1`` dimensions.

Kinematical coordinates ``(K^0..K^D, M_0..M_D)`` with the mass-shell
constraint ``C = -M_0^2 + sum_a M_a^2 + m^2``. Two frames:

* ``frame1`` uses ``K^0`` as reference field, ``h = sqrt(m^2 + p_1^2 + e)``;
* ``frame2`` uses ``K^1``, with true pairs ``(K^0, M_0), (K^a, M_a)_{a>=2}``
  and ``h = sqrt(p_1^2 - m^2 - e)``, where ``p_1 = M_0``.

Here ``e`` is the sum of squares of the momenta with index ``>= 2``. The
branch is ``M_0 < 0, M_1 < 0`` in both frames.
"""

import numpy as np

from ..gauge_system import BranchSigns, ConstraintSystem, guarded_sqrt
from ..phase_core import CoordinateSplit
from .base import ModelSystem


def particle_labels(D):
    return tuple(f"K{a}" for a in range(D + 1)) + tuple(f"M{a}" for a in range(D + 1))


def make_relativistic_particle(D=1, m=1.0):
    """Build the particle model.

    Parameters
    ----------
    D : int
        Number of spatial dimensions, at least 1.
    m : float
        Rest mass, positive.

    Returns
    -------
    ModelSystem
        Frames ``frame1`` and ``frame2`` plus closed-form oracles:

        ``oracle_obs(qp, x, k)``
            frame-1 observables of the true pairs at clock value ``k``;
        ``oracle_obs_hat(qp_hat, x_hat, k_hat)``
            the same in frame 2;
        ``oracle_rrft(qp, k, k_hat)``
            frame-1 cut values to frame-2 cut values;
        ``oracle_rrft_inverse(qp_hat, k, k_hat)``
            the reverse map;
        ``oracle_pullback(qp, k_hat_dot)``
            frame-2 Hamiltonian at the image, ``-k_hat_dot * p_1``;
        ``oracle_h(qp, k_dot)`` and ``oracle_h_hat(qp_hat, k_hat_dot)``.
    """
    D = int(D)
    m = float(m)
    if D < 1:
        raise ValueError("D must be at least 1")
    if not m > 0:
        raise ValueError("the rest mass must be positive")
    n = D + 1
    labels = particle_labels(D)
    m2 = m * m

    def raw(z):
        M = z[n:]
        return np.array([-M[0] ** 2 + M[1:] @ M[1:] + m2])

    def raw_jac(z):
        jac = np.zeros((1, 2 * n))
        jac[0, n] = -2 * z[n]
        jac[0, n + 1:] = 2 * z[n + 1:]
        return jac

    def h1(z):
        M = z[n + 1:]
        return np.array([guarded_sqrt(m2 + M @ M)])

    def h1_jac(z):
        jac = np.zeros((1, 2 * n))
        jac[0, n + 1:] = z[n + 1:] / h1(z)[0]
        return jac

    def h2(z):
        M = z[n + 2:]
        return np.array([guarded_sqrt(z[n] ** 2 - m2 - M @ M)])

    def h2_jac(z):
        hv = h2(z)[0]
        jac = np.zeros((1, 2 * n))
        jac[0, n] = z[n] / hv
        jac[0, n + 2:] = -z[n + 2:] / hv
        return jac

    branch = BranchSigns((-1,))
    split1 = CoordinateSplit(labels, range(1, n), (0,))
    split2 = CoordinateSplit(labels, (0,) + tuple(range(2, n)), (1,))
    sys1 = ConstraintSystem(split1, h1, h1_jac, raw, raw_jac, branch, "particle/frame1")
    sys2 = ConstraintSystem(split2, h2, h2_jac, raw, raw_jac, branch, "particle/frame2")

    def domain1(qp):
        return qp[D] < 0

    def domain2(qp):
        p = qp[D:]
        return p[0] < 0 and p[0] ** 2 > m2 + p[1:] @ p[1:]

    def oracle_obs(qp, x, k):
        qp = np.asarray(qp, dtype=float)
        q, p = qp[:D], qp[D:]
        return np.concatenate([q + (k - x) * p / np.sqrt(m2 + p @ p), p])

    def oracle_obs_hat(qp_hat, x_hat, k_hat):
        qp_hat = np.asarray(qp_hat, dtype=float)
        q, p = qp_hat[:D], qp_hat[D:]
        root = np.sqrt(p[0] ** 2 - m2 - p[1:] @ p[1:])
        dq = np.concatenate([[p[0]], -p[1:]]) / root
        return np.concatenate([q + (k_hat - x_hat) * dq, p])

    def oracle_rrft(qp, k, k_hat):
        qp = np.asarray(qp, dtype=float)
        q, p = qp[:D], qp[D:]
        energy = np.sqrt(m2 + p @ p)
        lapse = (k_hat - q[0]) / p[0]
        q_hat = np.concatenate([[k + lapse * energy], q[1:] + lapse * p[1:]])
        return np.concatenate([q_hat, [-energy], p[1:]])

    def oracle_rrft_inverse(qp_hat, k, k_hat):
        qp_hat = np.asarray(qp_hat, dtype=float)
        q, p = qp_hat[:D], qp_hat[D:]
        p1 = -np.sqrt(p[0] ** 2 - m2 - p[1:] @ p[1:])
        lapse = (k - q[0]) / p[0]
        q_new = np.concatenate([[k_hat - lapse * p1], q[1:] - lapse * p[1:]])
        return np.concatenate([q_new, [p1], p[1:]])

    def oracle_pullback(qp, k_hat_dot):
        return -k_hat_dot * float(np.asarray(qp)[D])

    def oracle_h(qp, k_dot):
        p = np.asarray(qp, dtype=float)[D:]
        return k_dot * np.sqrt(m2 + p @ p)

    def oracle_h_hat(qp_hat, k_hat_dot):
        p = np.asarray(qp_hat, dtype=float)[D:]
        return k_hat_dot * np.sqrt(p[0] ** 2 - m2 - p[1:] @ p[1:])

    return ModelSystem(
        name="relativistic_particle",
        params={"D": D, "m": m},
        systems={"frame1": sys1, "frame2": sys2},
        oracles={
            "oracle_obs": oracle_obs,
            "oracle_obs_hat": oracle_obs_hat,
            "oracle_rrft": oracle_rrft,
            "oracle_rrft_inverse": oracle_rrft_inverse,
            "oracle_pullback": oracle_pullback,
            "oracle_h": oracle_h,
            "oracle_h_hat": oracle_h_hat,
        },
        raw=raw,
        domains={"frame1": domain1, "frame2": domain2},
    )
