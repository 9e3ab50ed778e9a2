"""Relational observables and reference-frame changes for constrained Hamiltonian systems."""

from .errors import (
    BranchViolation,
    ConfigError,
    DomainViolation,
    GaugeFrameError,
    NoConvergence,
    NonFiniteEvaluation,
    NumericDomainError,
    RangeViolation,
    SectorMismatch,
    SingularTransversality,
    StepFailure,
    SupportEscape,
)
from .flow_engine import FlowGenerator, OrbitTrace, cut_generator, flow, flow_to_cut, trace_orbit
from .gauge_system import (
    BranchSigns,
    ConstraintSystem,
    GaugeClock,
    GaugeFrame,
    constraint_residual,
    gauge_residual,
    solve_for_momenta,
    stability_multipliers,
)
from .phase_core import (
    CoordinateSplit,
    ScalarField,
    coordinate_field,
    dirac_bracket,
    gradient,
    poisson_bracket,
)
from .relational import (
    RelationalObservable,
    Trajectory,
    evolve_geometric,
    evolve_hamiltonian,
    observable_values,
    physical_hamiltonian,
    reduced_hamiltonian,
)
from .rrft import FrameMap, FramePair, apply_irft, apply_rrft, check_symplectic, invert_rrft, pullback_hamiltonian

__version__ = "0.1.0"

__all__ = [
    "BranchViolation",
    "ConfigError",
    "DomainViolation",
    "GaugeFrameError",
    "NoConvergence",
    "NonFiniteEvaluation",
    "NumericDomainError",
    "RangeViolation",
    "SectorMismatch",
    "SingularTransversality",
    "StepFailure",
    "SupportEscape",
    "FlowGenerator",
    "OrbitTrace",
    "cut_generator",
    "flow",
    "flow_to_cut",
    "trace_orbit",
    "BranchSigns",
    "ConstraintSystem",
    "GaugeClock",
    "GaugeFrame",
    "constraint_residual",
    "gauge_residual",
    "solve_for_momenta",
    "stability_multipliers",
    "CoordinateSplit",
    "ScalarField",
    "coordinate_field",
    "dirac_bracket",
    "gradient",
    "poisson_bracket",
    "RelationalObservable",
    "Trajectory",
    "evolve_geometric",
    "evolve_hamiltonian",
    "observable_values",
    "physical_hamiltonian",
    "reduced_hamiltonian",
    "FrameMap",
    "FramePair",
    "apply_irft",
    "apply_rrft",
    "check_symplectic",
    "invert_rrft",
    "pullback_hamiltonian",
]
