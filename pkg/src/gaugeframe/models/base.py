"""Common container for built-in models."""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np

from ..errors import DomainViolation
from ..gauge_system import GaugeClock, GaugeFrame

ARCCOS_SLACK = 1e-9


def _as_clock(c):
    if isinstance(c, GaugeClock):
        return c
    if np.isscalar(c):
        return GaugeClock.linear(float(c))
    return GaugeClock(tuple(c))


@dataclass(frozen=True)
class ModelSystem:
    """A constrained system with named frames and closed-form oracles.

    Parameters
    ----------
    name : str
        Model kind.
    params : mapping
        The parameters the model was built from.
    systems : mapping
        Frame name to the :class:`ConstraintSystem` solved for that frame's
        reference fields. All systems share the kinematical labels.
    oracles : mapping
        Named pure functions of plain arrays and numbers.
    raw : callable, optional
        The unsolved constraints ``z -> array``, common to all frames.
    domains : mapping, optional
        Frame name to a predicate on true values marking the frame's domain.
    default_clocks : mapping, optional
        Frame name to the clocks used when :meth:`frame` gets none.
    """

    name: str
    params: Mapping
    systems: Mapping
    oracles: Mapping = field(default_factory=dict)
    raw: Optional[Callable] = None
    domains: Mapping = field(default_factory=dict)
    default_clocks: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        object.__setattr__(self, "systems", MappingProxyType(dict(self.systems)))
        object.__setattr__(self, "oracles", MappingProxyType(dict(self.oracles)))
        object.__setattr__(self, "domains", MappingProxyType(dict(self.domains)))
        object.__setattr__(self, "default_clocks", MappingProxyType(dict(self.default_clocks)))
        labels = {s.split.labels for s in self.systems.values()}
        if len(labels) != 1:
            raise ValueError("all frames of a model must share the kinematical labels")

    @property
    def frame_names(self):
        return tuple(self.systems)

    @property
    def labels(self):
        return next(iter(self.systems.values())).split.labels

    @property
    def split(self):
        """Split of the first (default) frame."""
        return self.constraints.split

    @property
    def constraints(self):
        """Constraint system of the first (default) frame."""
        return next(iter(self.systems.values()))

    def frame(self, name, *clocks, allow_frozen=False):
        """Frame ``name`` with the given clocks.

        A bare number is read as the rate of a linear clock through zero.
        Without clocks the model's defaults for the frame are used.
        """
        if not clocks:
            clocks = self.default_clocks.get(name, ())
        try:
            system = self.systems[name]
        except KeyError:
            raise KeyError(f"model {self.name!r} has no frame {name!r}; "
                           f"choose from {self.frame_names}") from None
        clocks = tuple(_as_clock(c) for c in clocks)
        return GaugeFrame(system, clocks, name, self.domains.get(name), allow_frozen)


def safe_arccos(value, slack=ARCCOS_SLACK):
    """``arccos`` that tolerates rounding just outside ``[-1, 1]``.

    Raises
    ------
    DomainViolation
        When the argument lies further than ``slack`` outside the interval.
    """
    value = np.asarray(value, dtype=float)
    if np.any(np.abs(value) > 1.0 + slack) or not np.all(np.isfinite(value)):
        raise DomainViolation(f"arccos argument {value} outside [-1, 1]")
    out = np.arccos(np.clip(value, -1.0, 1.0))
    return float(out) if out.ndim == 0 else out
