"""Transformations between the true sectors of two relational frames.

The relational reference frame transformation (RRFT) ``S_{t, that}`` takes
frame-A true values, embeds them on A's cut at ``t``, follows the gauge orbit
to B's cut at ``that`` and reads off B's true values. The identity reference
frame transformation (IRFT) copies values slot for slot without dynamics.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BranchViolation, RangeViolation, SectorMismatch
from .flow_engine import ATOL, RTOL, flow_to_cut
from .phase_core import jacobian_fd, poisson_tensor
from .relational import reduced_hamiltonian


@dataclass(frozen=True)
class FramePair:
    """Two frames over the same kinematical phase space.

    ``irft_scales`` multiplies A's true values slot for slot when forming the
    identity transformation (e.g. ``(1/ell, ell)`` to match dimensions).
    """

    frame_a: object
    frame_b: object
    irft_scales: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.frame_a.split.labels != self.frame_b.split.labels:
            raise ValueError("frames of a pair must share the kinematical coordinates")
        if self.frame_a.split.n_true != self.frame_b.split.n_true:
            raise ValueError("frames of a pair must have the same number of true pairs")
        idx = self.index_map
        if len(idx["A2"]) != len(idx["I2"]):
            raise ValueError("swapped true and gauge slots must match in number")

    @property
    def index_map(self):
        """Slot sets: ``A1`` true in both, ``A2`` true in A only, ``I1`` gauge
        in both, ``I2`` gauge in A only (configuration indices)."""
        ta, tb = set(self.frame_a.split.true_slots), set(self.frame_b.split.true_slots)
        ga, gb = set(self.frame_a.split.gauge_slots), set(self.frame_b.split.gauge_slots)
        return {
            "A1": sorted(ta & tb),
            "A2": sorted(ta & gb),
            "I1": sorted(ga & gb),
            "I2": sorted(ga & tb),
        }

    def swapped(self):
        scales = None if self.irft_scales is None else 1.0 / np.asarray(self.irft_scales)
        return FramePair(self.frame_b, self.frame_a, scales)


@dataclass(frozen=True)
class FrameMap:
    """``S_{t, that}`` from ``pair.frame_a`` to ``pair.frame_b`` (or back)."""

    pair: FramePair
    t: float
    t_hat: float
    forward: bool = True
    rtol: float = field(default=RTOL)
    atol: float = field(default=ATOL)

    @property
    def source(self):
        return self.pair.frame_a if self.forward else self.pair.frame_b

    @property
    def target(self):
        return self.pair.frame_b if self.forward else self.pair.frame_a

    @property
    def t_source(self):
        return self.t if self.forward else self.t_hat

    @property
    def t_target(self):
        return self.t_hat if self.forward else self.t

    def __call__(self, qp):
        return apply_rrft(self, qp)


def _check_sector(frame, z, what):
    try:
        residual = np.max(np.abs(frame.constraints.solved(z)))
        frame.constraints.branch.check(frame.split.y(z))
    except BranchViolation as exc:
        raise SectorMismatch(f"{what} point outside the branch of frame {frame.name!r}: {exc}") from None
    scale = 1.0 + np.max(np.abs(frame.split.y(z)))
    if residual > 1e-8 * scale:
        raise SectorMismatch(
            f"{what} point lies on a different sector than frame {frame.name!r} (residual {residual:.3e})")


def apply_rrft(fmap, qp):
    """Map source-frame true values to target-frame true values.

    Raises
    ------
    SectorMismatch
        If the embedded or landed point is not on the target frame's branch.
    """
    src, dst = fmap.source, fmap.target
    z = src.embed(fmap.t_source, qp)
    _check_sector(dst, z, "embedded")
    landed = flow_to_cut(dst, fmap.t_target, z, fmap.rtol, fmap.atol)
    _check_sector(dst, landed, "landed")
    return dst.project(landed)


def apply_irft(pair, qp):
    """Identity reference frame transformation: slot-for-slot copy with scales.

    Raises
    ------
    RangeViolation
        When the copied values fall outside frame B's true-sector domain.
    """
    qp = np.asarray(qp, dtype=float)
    out = qp.copy() if pair.irft_scales is None else qp * np.asarray(pair.irft_scales, dtype=float)
    try:
        pair.frame_b.check_domain(out)
    except BranchViolation as exc:
        raise RangeViolation(str(exc)) from None
    return out


def invert_rrft(fmap):
    """The map in the opposite direction, ``S_{that, t}``."""
    return FrameMap(fmap.pair, fmap.t, fmap.t_hat, not fmap.forward, fmap.rtol, fmap.atol)


def pullback_hamiltonian(fmap, qp, t_eval=None, t_hat_eval=None):
    """Target Hamiltonian pulled back by the RRFT next to the source one.

    Returns
    -------
    tuple of float
        ``(h_target(S(qp); t_hat_eval), h_source(qp; t_eval))``. No equality
        is implied; generically they differ.
    """
    t_eval = fmap.t_source if t_eval is None else t_eval
    t_hat_eval = fmap.t_target if t_hat_eval is None else t_hat_eval
    image = apply_rrft(fmap, qp)
    return (reduced_hamiltonian(fmap.target, t_hat_eval, image),
            reduced_hamiltonian(fmap.source, t_eval, qp))


def symplectic_deviation(jac):
    """``max |J Omega J^T - Omega|`` for a true-sector Jacobian."""
    omega = poisson_tensor(jac.shape[0] // 2)
    return float(np.max(np.abs(jac @ omega @ jac.T - omega)))


def check_symplectic(map_fn, points, fd_step=1e-4):
    """Largest symplectic defect of ``map_fn`` over the sample points.

    The Jacobian is taken by a fourth-order central stencil.
    """
    worst = 0.0
    for qp in np.atleast_2d(points):
        worst = max(worst, symplectic_deviation(jacobian_fd(map_fn, qp, fd_step)))
    return worst


__all__ = [
    "FramePair",
    "FrameMap",
    "apply_rrft",
    "apply_irft",
    "invert_rrft",
    "pullback_hamiltonian",
    "symplectic_deviation",
    "check_symplectic",
]
