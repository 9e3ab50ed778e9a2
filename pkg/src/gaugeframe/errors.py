"""Exception hierarchy shared by all gaugeframe modules."""


class GaugeFrameError(Exception):
    """Base class for every error raised by the package."""


class NumericDomainError(GaugeFrameError):
    """A computation left the region where the model is defined."""


class NonFiniteEvaluation(NumericDomainError):
    """A phase-space function returned inf or nan."""


class BranchViolation(NumericDomainError):
    """A point or root lies outside the selected constraint branch."""


class SectorMismatch(BranchViolation):
    """Two frames do not select the same constraint-surface sector at a point."""


class DomainViolation(NumericDomainError):
    """An argument of a closed-form oracle is outside its domain."""


class RangeViolation(NumericDomainError):
    """A slot-for-slot identification produced a value outside the target range."""


class SupportEscape(NumericDomainError):
    """A lattice configuration reached the boundary guard band."""


class NoConvergence(NumericDomainError):
    """An iterative solver hit its iteration limit."""


class StepFailure(NumericDomainError):
    """The adaptive integrator could not complete the requested flow."""


class SingularTransversality(NumericDomainError):
    """The gauge cut is (numerically) tangent to the gauge orbits."""


class ConfigError(GaugeFrameError):
    """Invalid scenario configuration.

    Parameters
    ----------
    message : str
        What is wrong.
    field : str, optional
        Dotted path of the offending field, e.g. ``"frames.angular.clock"``.
    line : int, optional
        1-based line number in the source text when known.
    errors : list of ConfigError, optional
        Every problem found when several were collected; the first one
        provides ``message``, ``field`` and ``line``.
    """

    def __init__(self, message, field=None, line=None, errors=None):
        self.message = message
        self.field = field
        self.line = line
        self.errors = list(errors) if errors else [self]
        where = ""
        if field is not None:
            where += f"[{field}] "
        if line is not None:
            where += f"(line {line}) "
        super().__init__(where + message)
