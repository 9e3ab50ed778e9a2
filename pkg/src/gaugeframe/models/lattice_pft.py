"""Parametrized scalar field theory on a Dirichlet lattice in ``D = 1, 2``.

Per site ``i`` the kinematical variables are the field ``phi_i``, the
embedding ``x^A_i`` (``A = 0..D``) and their momenta. Lattice momenta are
stored as ``Pi_i = dz^D pi_i`` and ``Y_{A,i} = dz^D y_{A,i}``, so the unit
canonical bracket between site variables reproduces the continuum
functional bracket with integrals ``dz^D * sum``.

Field derivatives are second-order central differences with zero padding
outside the box; embedding derivatives use second-order one-sided stencils
at the edges, which are exact for the linear embeddings of inertial frames.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import SupportEscape
from ..flow_engine import ATOL, RTOL, hamiltonian_flow
from ..gauge_system import ConstraintSystem, GaugeClock, GaugeFrame
from ..phase_core import CoordinateSplit, ScalarField
from .base import ModelSystem

SUPPORT_TOL = 1e-6


@dataclass(frozen=True)
class LatticeGrid:
    """Square lattice of ``N^D`` sites with spacing ``dz``, centred on the origin."""

    D: int
    N: int
    dz: float
    mu: float = 0.0
    guard: int = 8

    def __post_init__(self):
        if self.D not in (1, 2):
            raise ValueError("lattice dimension must be 1 or 2")
        if self.N < 2 * self.guard + 3:
            raise ValueError("lattice too small for its guard band")
        if not self.dz > 0:
            raise ValueError("lattice spacing must be positive")
        if self.mu < 0:
            raise ValueError("mass parameter must be non-negative")

    @property
    def shape(self):
        return (self.N,) * self.D

    @property
    def sites(self):
        return self.N ** self.D

    @property
    def weight(self):
        """Volume element ``dz^D``."""
        return self.dz ** self.D

    @cached_property
    def coords(self):
        """``z^a`` at every site, shape ``(D, sites)``."""
        axis = (np.arange(self.N) - 0.5 * (self.N - 1)) * self.dz
        mesh = np.meshgrid(*([axis] * self.D), indexing="ij")
        return np.array([g.ravel() for g in mesh])

    @cached_property
    def guard_mask(self):
        """Sites within ``guard`` of any edge."""
        idx = np.indices(self.shape).reshape(self.D, -1)
        return np.any((idx < self.guard) | (idx >= self.N - self.guard), axis=0)

    @cached_property
    def labels(self):
        sites = range(self.sites)
        config = [f"phi[{i}]" for i in sites]
        mom = [f"Pi[{i}]" for i in sites]
        for A in range(self.D + 1):
            config += [f"x{A}[{i}]" for i in sites]
            mom += [f"Y{A}[{i}]" for i in sites]
        return tuple(config + mom)

    @property
    def n(self):
        return (self.D + 2) * self.sites

    def field_index(self):
        """Indices of ``(phi, Pi)`` inside the kinematical vector."""
        s = np.arange(self.sites)
        return np.concatenate([s, s + self.n])

    def potential(self, phi):
        return 0.5 * self.mu ** 2 * phi ** 2

    def potential_grad(self, phi):
        return self.mu ** 2 * phi

    def diff(self, f, a):
        """Central difference along axis ``a`` with zero padding."""
        g = np.asarray(f).reshape(self.shape)
        pad = [(0, 0)] * self.D
        pad[a] = (1, 1)
        gp = np.pad(g, pad)
        hi = [slice(None)] * self.D
        lo = [slice(None)] * self.D
        hi[a] = slice(2, None)
        lo[a] = slice(None, -2)
        return ((gp[tuple(hi)] - gp[tuple(lo)]) / (2 * self.dz)).ravel()

    def diff_embedding(self, f, a):
        g = np.asarray(f).reshape(self.shape)
        return np.gradient(g, self.dz, axis=a, edge_order=2).ravel()

    def pack(self, phi, pi, x=None, y=None):
        """Kinematical vector from densities ``phi, pi`` and embedding data.

        ``x`` defaults to the identity embedding at ``t = 0``; ``y`` to zero.
        """
        S = self.sites
        if x is None:
            x = np.vstack([np.zeros(S), self.coords])
        if y is None:
            y = np.zeros((self.D + 1, S))
        w = self.weight
        return np.concatenate([phi, np.ravel(x), w * np.asarray(pi), w * np.ravel(y)])

    def unpack(self, z):
        """``(phi, pi, x, y)`` densities of a kinematical vector."""
        S, n, w = self.sites, self.n, self.weight
        z = np.asarray(z, dtype=float)
        phi = z[:S]
        x = z[S:n].reshape(self.D + 1, S)
        pi = z[n:n + S] / w
        y = z[n + S:].reshape(self.D + 1, S) / w
        return phi, pi, x, y


def minkowski(D):
    return np.diag([-1.0] + [1.0] * D)


@dataclass(frozen=True)
class EmbeddingGeometry:
    """Tangents, induced metric and co-normal of an embedding, per site."""

    tangents: np.ndarray
    q: np.ndarray
    det_q: np.ndarray
    q_inv: np.ndarray
    normal: np.ndarray


def embedding_geometry(grid, x):
    """Geometry of the embedding ``x`` with shape ``(D + 1, sites)``."""
    D = grid.D
    eta = minkowski(D)
    tangents = np.array([[grid.diff_embedding(x[A], a) for a in range(D)] for A in range(D + 1)])
    q = np.einsum("AB,Aas,Bbs->abs", eta, tangents, tangents)
    qs = np.moveaxis(q, -1, 0)
    det_q = np.linalg.det(qs)
    q_inv = np.moveaxis(np.linalg.inv(qs), 0, -1)
    if D == 1:
        normal = np.array([tangents[1, 0], -tangents[0, 0]])
    else:
        normal = np.cross(tangents[:, 0].T, tangents[:, 1].T).T
    return EmbeddingGeometry(tangents, q, det_q, q_inv, normal)


def field_densities(grid, phi, pi, geometry):
    """``Z`` and ``Z_a`` per site."""
    dphi = np.array([grid.diff(phi, a) for a in range(grid.D)])
    grad2 = np.einsum("abs,as,bs->s", geometry.q_inv, dphi, dphi)
    Z = 0.5 * (pi ** 2 / geometry.det_q + grad2 + grid.potential(phi))
    return Z, pi * dphi


def solved_parts(grid, z):
    """``h_A`` per site, shape ``(D + 1, sites)``."""
    phi, pi, x, _ = grid.unpack(z)
    geo = embedding_geometry(grid, x)
    Z, Za = field_densities(grid, phi, pi, geo)
    eta = minkowski(grid.D)
    tangential = np.einsum("abs,AB,Bas,bs->As", geo.q_inv, eta, geo.tangents, Za)
    return geo.normal * Z + tangential


def raw_constraints(grid, z):
    """Normal and tangential constraints ``(c, c_a)`` per site, shape ``(D + 1, sites)``."""
    phi, pi, x, y = grid.unpack(z)
    geo = embedding_geometry(grid, x)
    Z, Za = field_densities(grid, phi, pi, geo)
    eta_inv = minkowski(grid.D)
    c = np.einsum("AB,As,Bs->s", eta_inv, y, geo.normal) - geo.det_q * Z
    ca = np.einsum("As,Aas->as", y, geo.tangents) + Za
    return np.vstack([c, ca])


def conormal_identities(grid, x):
    """Largest violations of ``eta^{AB} n_A n_B = -det q`` and ``n_A x^A_a = 0``."""
    geo = embedding_geometry(grid, np.asarray(x, dtype=float).reshape(grid.D + 1, -1))
    eta_inv = minkowski(grid.D)
    norm = np.einsum("AB,As,Bs->s", eta_inv, geo.normal, geo.normal)
    ortho = np.einsum("As,Aas->as", geo.normal, geo.tangents)
    return float(np.max(np.abs(norm + geo.det_q))), float(np.max(np.abs(ortho)))


def make_lattice_pft(D=1, N=128, dz=0.1, mu=0.0, guard=8):
    """Build the lattice field model.

    Returns
    -------
    ModelSystem
        One constraint system ``inertial`` solved for the embedding momenta;
        ``params["grid"]`` holds the :class:`LatticeGrid`. Frames come from
        :func:`inertial_frame`.
    """
    grid = LatticeGrid(int(D), int(N), float(dz), float(mu), int(guard))
    S = grid.sites
    gauge = tuple(range(S, grid.n))
    split = CoordinateSplit(grid.labels, tuple(range(S)), gauge)
    w = grid.weight

    def h(z):
        return w * solved_parts(grid, z).ravel()

    def raw(z):
        return w * raw_constraints(grid, z).ravel()

    system = ConstraintSystem(split, h, None, raw, None, None, f"pft/D{grid.D}")
    return ModelSystem(
        name="lattice_pft",
        params={"D": grid.D, "N": grid.N, "dz": grid.dz, "mu": grid.mu,
                "guard": grid.guard, "grid": grid},
        systems={"inertial": system},
        raw=raw,
    )


def lorentz_boost(D, rapidity, axis=1):
    """Boost matrix ``L`` along spatial axis ``axis``."""
    L = np.eye(D + 1)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    L[0, 0] = L[axis, axis] = ch
    L[0, axis] = L[axis, 0] = sh
    return L


def spatial_rotation(angle):
    """Rotation in the ``(z^1, z^2)`` plane, as a ``3 x 3`` Lorentz matrix."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def inertial_frame(model, L, name="inertial"):
    """Frame with clocks ``k^A(t, z) = L^A_0 t + L^A_a z^a`` at every site."""
    grid = model.params["grid"]
    L = np.asarray(L, dtype=float)
    if L.shape != (grid.D + 1, grid.D + 1):
        raise ValueError("Lorentz matrix has the wrong shape")
    eta = minkowski(grid.D)
    if not np.allclose(L.T @ eta @ L, eta, atol=1e-12):
        raise ValueError("matrix is not a Lorentz transformation")
    offsets = L[:, 1:] @ grid.coords
    clocks = [GaugeClock.linear(L[A, 0], offsets[A, i])
              for A in range(grid.D + 1) for i in range(grid.sites)]
    return GaugeFrame(model.constraints, tuple(clocks), name)


def reduced_density(model, L, t, phi, pi):
    """``sum_A L^A_0 h_A`` per site on the cut of the inertial frame ``L``."""
    grid = model.params["grid"]
    L = np.asarray(L, dtype=float)
    x = L[:, :1] * t + L[:, 1:] @ grid.coords
    z = grid.pack(phi, pi, x)
    return L[:, 0] @ solved_parts(grid, z)


def _field_generators(grid):
    """Generators as functions of ``u = (phi, Pi)``."""
    S, w, D = grid.sites, grid.weight, grid.D
    z1 = grid.coords[0]

    def split(u):
        return u[:S], u[S:] / w

    def dphi(phi):
        return [grid.diff(phi, a) for a in range(D)]

    def dT(f, a):
        return -grid.diff(f, a)

    def density(phi, pi):
        return 0.5 * (pi ** 2 + sum(d ** 2 for d in dphi(phi)) + grid.potential(phi))

    def h(u):
        phi, pi = split(u)
        return w * float(np.sum(density(phi, pi)))

    def h_grad(u):
        phi, pi = split(u)
        g_phi = sum(dT(d, a) for a, d in enumerate(dphi(phi))) + 0.5 * grid.potential_grad(phi)
        return np.concatenate([w * g_phi, pi])

    def momentum(u, a=0):
        phi, pi = split(u)
        return w * float(pi @ grid.diff(phi, a))

    def momentum_grad(u, a=0):
        phi, pi = split(u)
        return np.concatenate([w * dT(pi, a), grid.diff(phi, a)])

    def boost(u):
        phi, pi = split(u)
        return w * float(z1 @ density(phi, pi))

    def boost_grad(u):
        phi, pi = split(u)
        g_phi = sum(dT(z1 * d, a) for a, d in enumerate(dphi(phi))) + 0.5 * z1 * grid.potential_grad(phi)
        return np.concatenate([w * g_phi, z1 * pi])

    fields = {
        "h": ScalarField(h, h_grad, "h"),
        "p_momentum": ScalarField(momentum, momentum_grad, "p"),
        "kappa_B": ScalarField(boost, boost_grad, "kappa_B"),
    }
    if D == 2:
        z2 = grid.coords[1]
        fields["p_momentum_2"] = ScalarField(lambda u: momentum(u, 1),
                                             lambda u: momentum_grad(u, 1), "p2")

        def rotation(u):
            phi, pi = split(u)
            return w * float(z1 @ (pi * grid.diff(phi, 1)) - z2 @ (pi * grid.diff(phi, 0)))

        def rotation_grad(u):
            phi, pi = split(u)
            g_phi = dT(z1 * pi, 1) - dT(z2 * pi, 0)
            g_pi = z1 * grid.diff(phi, 1) - z2 * grid.diff(phi, 0)
            return np.concatenate([w * g_phi, g_pi])

        fields["kappa_R"] = ScalarField(rotation, rotation_grad, "kappa_R")
    return fields


def pft_generators(model, on_fields=False):
    """Energy, momentum, boost (and for ``D = 2`` rotation) generators.

    Parameters
    ----------
    on_fields : bool
        If true, the fields act on ``u = (phi, Pi)`` only; otherwise on the
        full kinematical vector, with zero embedding components.
    """
    grid = model.params["grid"]
    fields = _field_generators(grid)
    if on_fields:
        return fields
    idx = grid.field_index()
    dim = 2 * grid.n

    def lift(f):
        def grad(z):
            g = np.zeros(dim)
            g[idx] = f.grad(np.asarray(z)[idx])
            return g
        return ScalarField(lambda z: f(np.asarray(z)[idx]), grad, f.label)

    return {k: lift(f) for k, f in fields.items()}


def gaussian_packet(grid, amplitude=1.0, width=0.7, center=0.3):
    """Gaussian ``phi`` with ``pi = -d phi/dz^1`` (right-moving), exact derivative.

    Returns ``u = (phi, Pi)``.
    """
    z = grid.coords
    shift = z.copy()
    shift[0] = shift[0] - center
    phi = amplitude * np.exp(-0.5 * np.sum(shift ** 2, axis=0) / width ** 2)
    pi = phi * shift[0] / width ** 2
    return np.concatenate([phi, grid.weight * pi])


def check_support(grid, u, tol=SUPPORT_TOL):
    """Raise :class:`SupportEscape` if the fields reach the guard band."""
    S, w = grid.sites, grid.weight
    phi, pi = u[:S], u[S:] / w
    scale = max(np.max(np.abs(phi)), np.max(np.abs(pi)), 1e-300)
    edge = max(np.max(np.abs(phi[grid.guard_mask])), np.max(np.abs(pi[grid.guard_mask])))
    if edge > tol * scale:
        raise SupportEscape(f"field amplitude {edge:.3e} in the boundary band (scale {scale:.3e})")


@dataclass(frozen=True)
class BoostReport:
    """Energy after a boost flow against ``cosh(s0) h + sinh(s0) p``."""

    s0: float
    dz: float
    h_initial: float
    p_initial: float
    h_flowed: float
    predicted: float

    @property
    def abs_deviation(self):
        return abs(self.h_flowed - self.predicted)

    @property
    def rel_deviation(self):
        return self.abs_deviation / max(abs(self.predicted), 1e-300)


def verify_boost_hamiltonian(model, s0, config, rtol=RTOL, atol=ATOL):
    """Flow ``config`` under the boost generator for parameter ``s0`` and compare energies.

    Parameters
    ----------
    config : array
        Either ``u = (phi, Pi)`` or a full kinematical vector.

    Raises
    ------
    SupportEscape
        If the configuration touches the boundary band before or after the flow.
    StepFailure
        From the integrator.
    """
    grid = model.params["grid"]
    u = np.asarray(config, dtype=float)
    if u.size == 2 * grid.n:
        u = u[grid.field_index()]
    if u.size != 2 * grid.sites:
        raise ValueError("configuration does not match the lattice")
    gens = _field_generators(grid)
    check_support(grid, u)
    h0, p0 = gens["h"](u), gens["p_momentum"](u)
    if s0 == 0:
        return BoostReport(0.0, grid.dz, h0, p0, h0, h0)
    flowed = hamiltonian_flow(gens["kappa_B"], u, s0, rtol, atol)
    check_support(grid, flowed)
    predicted = np.cosh(s0) * h0 + np.sinh(s0) * p0
    return BoostReport(float(s0), grid.dz, h0, p0, gens["h"](flowed), float(predicted))


def convergence_orders(dzs, errors):
    """Observed orders ``log(e_i / e_{i+1}) / log(dz_i / dz_{i+1})``."""
    dzs, errors = np.asarray(dzs, dtype=float), np.asarray(errors, dtype=float)
    return np.log(errors[:-1] / errors[1:]) / np.log(dzs[:-1] / dzs[1:])


def boost_convergence(s0=0.1, dzs=(0.2, 0.1, 0.05), length=12.8, mu=0.0, **packet):
    """Boost check on a refinement sequence at fixed box length.

    Returns
    -------
    reports : list of BoostReport
    orders : numpy.ndarray
    """
    reports = []
    for dz in dzs:
        model = make_lattice_pft(1, int(round(length / dz)), dz, mu)
        grid = model.params["grid"]
        reports.append(verify_boost_hamiltonian(model, s0, gaussian_packet(grid, **packet)))
    return reports, convergence_orders(dzs, [r.abs_deviation for r in reports])
