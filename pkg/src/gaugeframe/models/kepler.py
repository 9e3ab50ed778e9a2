"""Planar Kepler problem at fixed energy.

Coordinates ``(r, phi)`` with momenta ``(p, l)`` and the energy constraint
``C = (p^2 + l^2/r^2)/(2m) - alpha/r - E``. Frames:

* ``angular``: reference field ``phi``, true pair ``(r, p)``,
  ``h = sqrt([2m(E - U(r)) - p^2] r^2)``;
* ``radial``: reference field ``r``, true pair ``(phi, l)``,
  ``h = sqrt(2m(E - U(r)) - l^2/r^2)``.

The branch is ``p < 0, l < 0``: an incoming orbit with clockwise angular
momentum. Orbit parameters derived from ``l`` are
``r0 = l^2/(m alpha)``, ``1/r1^2 = 2mE/l^2 + 1/r0^2`` and
``F(r) = r1 (1/r - 1/r0)``; along an orbit ``phi - arccos F(r)`` and ``l``
are conserved.
"""

import numpy as np

from ..errors import BranchViolation, DomainViolation
from ..gauge_system import BranchSigns, ConstraintSystem, guarded_sqrt
from ..phase_core import CoordinateSplit
from .base import ModelSystem, safe_arccos

LABELS = ("r", "phi", "p", "l")


def make_kepler(m=1.0, alpha=1.0, E=0.05):
    """Build the Kepler model with ``U(r) = -alpha/r``.

    Returns
    -------
    ModelSystem
        Frames ``angular`` and ``radial``. Oracles (all pure):

        ``orbit_radii(l)``
            ``(r0, r1)``;
        ``F(r, l)``
            the normalized inverse radius;
        ``oracle_phi_hat(r, phi, l, k_hat)``
            angle observable of the radial frame;
        ``oracle_shape(r, phi, l, k)``
            radius observable of the angular frame;
        ``oracle_rrft(qp, k, k_hat)``
            angular cut values ``(r, p)`` to radial cut values ``(phi, l)``;
        ``oracle_hamiltonians(qp, k_dot, k_hat, k_hat_dot)``
            ``(h_radial(S(qp)), h_angular(qp))``;
        ``conserved(r, phi, l)``
            ``phi - arccos F(r)``;
        ``impact_parameter(l)`` and ``eccentricity(l)``.
    """
    m, alpha, E = float(m), float(alpha), float(E)
    if not m > 0 or not alpha > 0:
        raise ValueError("m and alpha must be positive")
    if E < 0:
        raise ValueError("only unbound orbits (E >= 0) are supported")

    def U(r):
        return -alpha / r

    def _radius(r):
        if not r > 0:
            raise DomainViolation(f"radius must be positive, got {r}")
        return r

    def raw(z):
        r, _, p, l = z
        r = _radius(r)
        return np.array([(p * p + l * l / (r * r)) / (2 * m) + U(r) - E])

    def raw_jac(z):
        r, _, p, l = z
        r = _radius(r)
        return np.array([[-l * l / (m * r ** 3) + alpha / r ** 2, 0.0, p / m, l / (m * r * r)]])

    def h_ang(z):
        r, _, p, _ = z
        r = _radius(r)
        return np.array([guarded_sqrt((2 * m * (E - U(r)) - p * p) * r * r)])

    def h_ang_jac(z):
        r, _, p, _ = z
        hv = h_ang(z)[0]
        if hv == 0:
            raise BranchViolation("angular momentum vanishes: edge of the branch")
        d_r = (4 * m * E * r + 2 * m * alpha - 2 * p * p * r) / (2 * hv)
        return np.array([[d_r, 0.0, -p * r * r / hv, 0.0]])

    def h_rad(z):
        r, _, _, l = z
        r = _radius(r)
        return np.array([guarded_sqrt(2 * m * (E - U(r)) - l * l / (r * r))])

    def h_rad_jac(z):
        r, _, _, l = z
        hv = h_rad(z)[0]
        if hv == 0:
            raise BranchViolation("radial momentum vanishes: turning point of the orbit")
        d_r = (-2 * m * alpha / r ** 2 + 2 * l * l / r ** 3) / (2 * hv)
        return np.array([[d_r, 0.0, 0.0, -l / (r * r * hv)]])

    branch = BranchSigns((-1,))
    sys_ang = ConstraintSystem(CoordinateSplit(LABELS, (0,), (1,)), h_ang, h_ang_jac,
                               raw, raw_jac, branch, "kepler/angular")
    sys_rad = ConstraintSystem(CoordinateSplit(LABELS, (1,), (0,)), h_rad, h_rad_jac,
                               raw, raw_jac, branch, "kepler/radial")

    def domain_ang(qp):
        r, p = qp
        return r > 0 and p < 0 and 2 * m * (E - U(r)) - p * p > 0

    def domain_rad(qp):
        return qp[1] < 0

    def orbit_radii(l):
        r0 = l * l / (m * alpha)
        r1 = 1.0 / np.sqrt(2 * m * E / (l * l) + 1.0 / r0 ** 2)
        return r0, r1

    def F(r, l):
        r0, r1 = orbit_radii(l)
        return r1 * (1.0 / r - 1.0 / r0)

    def conserved(r, phi, l):
        return phi - safe_arccos(F(r, l))

    def oracle_phi_hat(r, phi, l, k_hat):
        return phi - safe_arccos(F(r, l)) + safe_arccos(F(k_hat, l))

    def oracle_shape(r, phi, l, k):
        _, r1 = orbit_radii(l)
        f = F(r, l)
        delta = phi - k
        sin_term = np.sqrt(max(1.0 - f * f, 0.0))
        return r1 / (r1 / r + f * (np.cos(delta) - 1.0) + sin_term * np.sin(delta))

    def angular_h(r, p):
        return np.sqrt((2 * m * (E - U(r)) - p * p) * r * r)

    def oracle_rrft(qp, k, k_hat):
        r, p = qp
        l = -angular_h(r, p)
        return np.array([k - safe_arccos(F(r, l)) + safe_arccos(F(k_hat, l)), l])

    def oracle_hamiltonians(qp, k_dot, k_hat, k_hat_dot):
        r, p = qp
        l2 = (2 * m * (E - U(r)) - p * p) * r * r
        h_hat = k_hat_dot * np.sqrt(2 * m * (E - U(k_hat)) - l2 / k_hat ** 2)
        return h_hat, k_dot * np.sqrt(l2)

    def impact_parameter(l):
        r0, r1 = orbit_radii(l)
        return r0 / (1.0 + r1 / r0)

    def eccentricity(l):
        r0, r1 = orbit_radii(l)
        return r0 / r1

    return ModelSystem(
        name="kepler",
        params={"m": m, "alpha": alpha, "E": E},
        systems={"angular": sys_ang, "radial": sys_rad},
        oracles={
            "orbit_radii": orbit_radii,
            "F": F,
            "conserved": conserved,
            "oracle_phi_hat": oracle_phi_hat,
            "oracle_shape": oracle_shape,
            "oracle_rrft": oracle_rrft,
            "oracle_hamiltonians": oracle_hamiltonians,
            "impact_parameter": impact_parameter,
            "eccentricity": eccentricity,
        },
        raw=raw,
        domains={"angular": domain_ang, "radial": domain_rad},
    )
