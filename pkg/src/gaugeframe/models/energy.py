"""Generic fixed-energy system ``C = g^{AB}(K) M_A M_B / 2 + U(K) - E``.

The solved form is never written down: for each frame the momentum of the
reference field is found by Newton iteration on the raw constraint, and its
gradient follows from the implicit function theorem.
"""

import numpy as np

from ..errors import BranchViolation, SingularTransversality
from ..gauge_system import BranchSigns, ConstraintSystem, newton_momenta
from ..phase_core import CoordinateSplit
from .base import ModelSystem

_CBRT_EPS = np.finfo(float).eps ** (1.0 / 3.0)


def _fd_grad(fn, K):
    """Central differences with one Richardson level."""
    g = np.empty_like(K)
    for i in range(K.size):
        h = _CBRT_EPS * max(1.0, abs(K[i]))
        e = np.zeros_like(K)
        e[i] = h
        d1 = (fn(K + e) - fn(K - e)) / (2 * h)
        d2 = (fn(K + 0.5 * e) - fn(K - 0.5 * e)) / h
        g[i] = (4 * d2 - d1) / 3
    return g


def make_energy_constrained(inverse_metric, potential, E, dim=None, labels=None,
                            frames=None, potential_grad=None, name="energy_constrained"):
    """Build a fixed-energy model from a metric and a potential.

    Parameters
    ----------
    inverse_metric : callable
        ``K -> (n, n)`` symmetric matrix ``g^{AB}(K)``.
    potential : callable
        ``K -> float``.
    E : float
        Energy level.
    dim : int, optional
        Number of configuration coordinates; required unless ``labels`` is given.
    labels : sequence of str, optional
        Configuration then momentum names; defaults to ``K1..Kn, M1..Mn``.
    frames : mapping, optional
        Frame name to ``(reference label, sign)``; ``sign`` is the branch sign
        of the reference momentum. Defaults to one frame per configuration
        coordinate, named after it, on the negative branch.
    potential_grad : callable, optional
        Analytic ``dU/dK``. The metric derivative is always taken numerically.

    Raises
    ------
    BranchViolation
        When evaluating ``h`` where the energy shell has no real point
        (``E < U`` after accounting for the other momenta).
    """
    if labels is None:
        if dim is None:
            raise ValueError("give either dim or labels")
        labels = tuple(f"K{a + 1}" for a in range(dim)) + tuple(f"M{a + 1}" for a in range(dim))
    labels = tuple(labels)
    n = len(labels) // 2
    E = float(E)
    if frames is None:
        frames = {labels[a]: (labels[a], -1) for a in range(n)}

    def shell(K, M):
        return 0.5 * M @ np.asarray(inverse_metric(K), dtype=float) @ M + potential(K) - E

    def raw(z):
        return np.array([shell(z[:n], z[n:])])

    def dK(z):
        K, M = z[:n], z[n:]
        if potential_grad is not None:
            grad_u = np.asarray(potential_grad(K), dtype=float)
            kinetic = _fd_grad(lambda k: 0.5 * M @ np.asarray(inverse_metric(k), dtype=float) @ M, K)
            return grad_u + kinetic
        return _fd_grad(lambda k: shell(k, M), K)

    def raw_jac(z):
        ginv = np.asarray(inverse_metric(z[:n]), dtype=float)
        return np.concatenate([dK(z), ginv @ z[n:]])[None, :]

    systems = {}
    for fname, (ref, sign) in frames.items():
        j = labels.index(ref)
        if j >= n:
            raise ValueError(f"reference field {ref!r} must be a configuration coordinate")
        yi = np.array([n + j])

        def h(z, j=j, yi=yi, sign=sign):
            z = np.array(z, dtype=float)
            K = z[:n]
            ginv = np.asarray(inverse_metric(K), dtype=float)
            others = z[n:].copy()
            others[j] = 0.0
            a = 0.5 * ginv[j, j]
            b = ginv[j] @ others
            c = shell(K, others)
            if a == 0:
                raise SingularTransversality("shell is linear in the reference momentum")
            disc = b * b - 4 * a * c
            if disc < -1e-12 * (1.0 + b * b + abs(4 * a * c)):
                raise BranchViolation("energy below the potential: no real momentum on this shell")
            vertex = -b / (2 * a)
            guess = vertex + (sign or 1) * (np.sqrt(max(disc, 0.0)) / (2 * abs(a)) + 1.0)
            y = newton_momenta(raw, raw_jac, z, yi, np.array([guess]), tol=1e-14)
            BranchSigns((sign,)).check(y)
            return -y

        def h_jac(z, j=j, h=h):
            z = np.array(z, dtype=float)
            z[n + j] = -h(z)[0]
            jac = raw_jac(z)[0]
            dcdy = jac[n + j]
            if abs(dcdy) < 1e-12:
                raise SingularTransversality("reference momentum at a turning point")
            out = jac / dcdy
            out[n + j] = 0.0
            return out[None, :]

        split = CoordinateSplit(labels, [a for a in range(n) if a != j], (j,))
        systems[fname] = ConstraintSystem(split, h, h_jac, raw, raw_jac,
                                          BranchSigns((sign,)), f"{name}/{fname}")

    return ModelSystem(
        name=name,
        params={"E": E, "labels": labels, "frames": dict(frames)},
        systems=systems,
        raw=raw,
    )
