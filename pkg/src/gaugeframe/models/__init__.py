"""Built-in constrained systems with closed-form oracles."""

from .base import ModelSystem, safe_arccos
from .energy import make_energy_constrained
from .kepler import make_kepler
from .lattice_pft import (
    BoostReport,
    LatticeGrid,
    boost_convergence,
    conormal_identities,
    convergence_orders,
    embedding_geometry,
    gaussian_packet,
    inertial_frame,
    lorentz_boost,
    make_lattice_pft,
    pft_generators,
    raw_constraints,
    reduced_density,
    solved_parts,
    spatial_rotation,
    verify_boost_hamiltonian,
)
from .particle import make_relativistic_particle
from .toy import make_linear_toy

__all__ = [
    "ModelSystem",
    "safe_arccos",
    "make_relativistic_particle",
    "make_kepler",
    "make_energy_constrained",
    "make_linear_toy",
    "make_lattice_pft",
    "LatticeGrid",
    "BoostReport",
    "pft_generators",
    "verify_boost_hamiltonian",
    "boost_convergence",
    "convergence_orders",
    "conormal_identities",
    "embedding_geometry",
    "gaussian_packet",
    "inertial_frame",
    "lorentz_boost",
    "spatial_rotation",
    "reduced_density",
    "raw_constraints",
    "solved_parts",
]
