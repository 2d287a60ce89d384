"""Bound states of the Dirac equation in a Coulomb field.

Closed-form radial solutions, spherical spinors, the two-parameter family of
four-component eigenstates, finite-difference operators for verification,
observable fields and an independent shooting solver.
"""

from .angular import HalfInt, SpinorLabel, SpinorSample, spherical_spinor
from .bispinor import (
    SPECIAL_CASES,
    BispinorField,
    BispinorSample,
    BoundState,
    Grid,
    SpinParams,
    assemble,
    beta_coeffs,
    evaluate_field,
    inner_product,
    make_grid,
    pauli_limit,
    special_case,
)
from .observables import density, enumerate_states, observe, spin_field
from .odeoracle import ShootingConfig, find_spectrum, integrate_radial
from .operators import OperatorHandle, apply, apply_bel, apply_jl, eigen_residual
from .radial import FINE_STRUCTURE, PhysicalConfig, QuantumNumbers, energy, fine_structure, solve_radial

__all__ = [
    "FINE_STRUCTURE",
    "SPECIAL_CASES",
    "BispinorField",
    "BispinorSample",
    "BoundState",
    "Grid",
    "HalfInt",
    "OperatorHandle",
    "PhysicalConfig",
    "QuantumNumbers",
    "ShootingConfig",
    "SpinParams",
    "SpinorLabel",
    "SpinorSample",
    "apply",
    "apply_bel",
    "apply_jl",
    "assemble",
    "beta_coeffs",
    "density",
    "eigen_residual",
    "energy",
    "enumerate_states",
    "evaluate_field",
    "find_spectrum",
    "fine_structure",
    "inner_product",
    "integrate_radial",
    "make_grid",
    "observe",
    "pauli_limit",
    "solve_radial",
    "special_case",
    "spherical_spinor",
    "spin_field",
]
