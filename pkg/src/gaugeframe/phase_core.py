"""Phase-space kernel: coordinate splits, gradients, Poisson and Dirac brackets.

Points of the kinematical phase space are plain 1-D float arrays in the
kinematical order ``(K^1..K^n, M_1..M_n)``: configuration coordinates first,
then their conjugate momenta. A :class:`CoordinateSplit` designates which
configuration slots carry true pairs ``(q, p)`` and which carry gauge pairs
``(x, y)``; it never reorders the stored vector, it only provides views.

Bracket convention: ``{p_a, q^b} = delta_a^b``, so that the flow of a
generator ``H`` is ``dq/ds = dH/dp, dp/ds = -dH/dq``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import NonFiniteEvaluation

_CBRT_EPS = np.finfo(float).eps ** (1.0 / 3.0)


@dataclass(frozen=True)
class CoordinateSplit:
    """Division of canonical pairs into true and gauge pairs.

    Parameters
    ----------
    labels : sequence of str
        One name per entry of the kinematical vector, configuration names
        first, then momentum names.
    true_slots : sequence of int
        Configuration indices ``A`` whose pairs ``(K^A, M_A)`` are true
        degrees of freedom ``(q^a, p_a)``.
    gauge_slots : sequence of int
        Configuration indices whose pairs are gauge degrees of freedom
        ``(x^I, y_I)``, in constraint order.
    """

    labels: tuple
    true_slots: tuple
    gauge_slots: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "true_slots", tuple(int(i) for i in self.true_slots))
        object.__setattr__(self, "gauge_slots", tuple(int(i) for i in self.gauge_slots))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("coordinate labels must be unique")
        if len(self.labels) % 2:
            raise ValueError("need one label per configuration and momentum coordinate")
        slots = sorted(self.true_slots + self.gauge_slots)
        if slots != list(range(self.n)):
            raise ValueError("true and gauge slots must partition the configuration indices")

    @property
    def n(self):
        """Number of canonical pairs."""
        return len(self.labels) // 2

    @property
    def n_true(self):
        return len(self.true_slots)

    @property
    def n_gauge(self):
        return len(self.gauge_slots)

    @property
    def dim(self):
        return len(self.labels)

    @property
    def layout(self):
        """Indices of (q..., p..., x..., y...) inside the kinematical vector."""
        t = np.array(self.true_slots, dtype=int)
        g = np.array(self.gauge_slots, dtype=int)
        return np.concatenate([t, t + self.n, g, g + self.n])

    @property
    def true_labels(self):
        t = self.true_slots
        return tuple(self.labels[i] for i in t) + tuple(self.labels[i + self.n] for i in t)

    def index(self, label):
        """Vector index of a coordinate given its label."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown coordinate label {label!r}") from None

    def q(self, z):
        return np.asarray(z)[list(self.true_slots)]

    def p(self, z):
        return np.asarray(z)[[i + self.n for i in self.true_slots]]

    def x(self, z):
        return np.asarray(z)[list(self.gauge_slots)]

    def y(self, z):
        return np.asarray(z)[[i + self.n for i in self.gauge_slots]]

    def x_index(self):
        return np.array(self.gauge_slots, dtype=int)

    def y_index(self):
        return np.array(self.gauge_slots, dtype=int) + self.n

    def true_index(self):
        t = np.array(self.true_slots, dtype=int)
        return np.concatenate([t, t + self.n])

    def true_part(self, z):
        """Concatenated ``(q, p)`` values of a point."""
        return np.asarray(z, dtype=float)[self.true_index()]

    def assemble(self, qp, x, y):
        """Build a kinematical vector from true values ``qp = (q, p)`` and gauge values."""
        z = np.empty(self.dim)
        z[self.true_index()] = qp
        z[self.x_index()] = x
        z[self.y_index()] = y
        return z


@dataclass(frozen=True)
class ScalarField:
    """Real-valued function on phase space, optionally with an analytic gradient."""

    func: Callable
    grad: Optional[Callable] = None
    label: str = field(default="")

    def __call__(self, z):
        return self.func(z)

    def __mul__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        a, b = self, other

        def product_grad(z):
            return a(z) * np.asarray(b.grad(z)) + b(z) * np.asarray(a.grad(z))

        grad = product_grad if a.grad is not None and b.grad is not None else None
        return ScalarField(lambda z: a(z) * b(z), grad, f"({a.label})*({b.label})")

    def __add__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        a, b = self, other

        def sum_grad(z):
            return np.asarray(a.grad(z)) + np.asarray(b.grad(z))

        grad = sum_grad if a.grad is not None and b.grad is not None else None
        return ScalarField(lambda z: a(z) + b(z), grad, f"({a.label})+({b.label})")


def coordinate_field(split_or_dim, index, label=None):
    """The coordinate function ``z -> z[index]`` with its exact gradient."""
    dim = split_or_dim.dim if isinstance(split_or_dim, CoordinateSplit) else int(split_or_dim)
    if label is None and isinstance(split_or_dim, CoordinateSplit):
        label = split_or_dim.labels[index]
    unit = np.zeros(dim)
    unit[index] = 1.0
    unit.setflags(write=False)
    return ScalarField(lambda z: float(z[index]), lambda z: unit, label or f"z[{index}]")


def constant_field(value, dim):
    zero = np.zeros(dim)
    return ScalarField(lambda z: float(value), lambda z: zero, repr(value))


def _checked(value):
    if not np.all(np.isfinite(value)):
        raise NonFiniteEvaluation("non-finite value encountered while probing a phase-space function")
    return value


def gradient(f, z, step=None):
    """Gradient of a scalar field at ``z``.

    Returns the analytic gradient when ``f`` carries one. Otherwise uses
    central differences with one Richardson extrapolation level; the default
    step is ``eps**(1/3) * max(1, |z_i|)`` per component.

    Raises
    ------
    NonFiniteEvaluation
        If any probe evaluation is inf or nan.
    """
    z = np.asarray(z, dtype=float)
    if f.grad is not None:
        return _checked(np.asarray(f.grad(z), dtype=float))
    if step is not None and step <= 0:
        raise ValueError("finite-difference step must be positive")
    g = np.empty_like(z)
    for i in range(z.size):
        h = step if step is not None else _CBRT_EPS * max(1.0, abs(z[i]))
        e = np.zeros_like(z)
        e[i] = h
        f1 = _checked(f(z + e))
        f2 = _checked(f(z - e))
        f3 = _checked(f(z + 0.5 * e))
        f4 = _checked(f(z - 0.5 * e))
        d_full = (f1 - f2) / (2 * h)
        d_half = (f3 - f4) / h
        g[i] = (4.0 * d_half - d_full) / 3.0
    return g


def bracket_from_gradients(df, dg):
    """``{f, g}`` from the two gradients (kinematical order)."""
    n = df.size // 2
    return float(df[n:] @ dg[:n] - df[:n] @ dg[n:])


def hamiltonian_vector_field(dh):
    """``({h, z_i})_i`` from the gradient of ``h``: ``(dh/dM, -dh/dK)``."""
    n = dh.size // 2
    return np.concatenate([dh[n:], -dh[:n]])


def poisson_bracket(f, g, z, step=None):
    """Poisson bracket ``{f, g}(z)`` with ``{p_a, q^b} = delta_a^b``."""
    return bracket_from_gradients(gradient(f, z, step), gradient(g, z, step))


def poisson_tensor(n):
    """Matrix of ``{z_i, z_j}`` for kinematical order with ``n`` pairs.

    Used for small true-sector checks only; brackets never build it.
    """
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def dirac_bracket(f, g, frame, t, z, step=None):
    """Dirac bracket subordinate to the constraints and gauge cut of ``frame``.

    ``{f,g}* = {f,g} + {f,C_I}{G^I,g} - {g,C_I}{G^I,f}`` with the solved
    constraints ``C_I`` and gauge conditions ``G^I(t) = x^I - k^I(t)``.
    The gauge conditions enter only through their gradients, so the result
    does not depend on ``t``.
    """
    z = np.asarray(z, dtype=float)
    df = gradient(f, z, step)
    dg = gradient(g, z, step)
    jac_c = frame.constraints.jacobian(z)
    result = bracket_from_gradients(df, dg)
    for i, xi in enumerate(frame.split.x_index()):
        dG = np.zeros_like(z)
        dG[xi] = 1.0
        dC = jac_c[i]
        result += bracket_from_gradients(df, dC) * bracket_from_gradients(dG, dg)
        result -= bracket_from_gradients(dg, dC) * bracket_from_gradients(dG, df)
    return result


def jacobian_fd(fn, v, step=1e-5):
    """Jacobian of a vector map by a fourth-order central stencil."""
    v = np.asarray(v, dtype=float)
    f0 = np.asarray(fn(v), dtype=float)
    jac = np.empty((f0.size, v.size))
    for j in range(v.size):
        h = step * max(1.0, abs(v[j]))
        e = np.zeros_like(v)
        e[j] = h
        fp1, fm1 = np.asarray(fn(v + e)), np.asarray(fn(v - e))
        fp2, fm2 = np.asarray(fn(v + 2 * e)), np.asarray(fn(v - 2 * e))
        jac[:, j] = (8 * (fp1 - fm1) - (fp2 - fm2)) / (12 * h)
    return _checked(jac)


def sample_points(rng, lows, highs, count):
    """Uniform samples in a box, one row per point."""
    lows = np.asarray(lows, dtype=float)
    highs = np.asarray(highs, dtype=float)
    return lows + (highs - lows) * rng.random((count, lows.size))


__all__ = [
    "CoordinateSplit",
    "ScalarField",
    "coordinate_field",
    "constant_field",
    "gradient",
    "bracket_from_gradients",
    "hamiltonian_vector_field",
    "poisson_bracket",
    "poisson_tensor",
    "dirac_bracket",
    "jacobian_fd",
    "sample_points",
]
