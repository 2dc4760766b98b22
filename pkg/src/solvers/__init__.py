"""Stationary densities and their linear stability."""

from .stability import (
    SpectrumResult,
    build_linearized,
    classify,
    convolution_matrix,
    differentiation_matrix,
    second_differentiation_matrix,
    spectrum,
)
from .stationary import (
    FixedPointResult,
    SelfConsistencyProblem,
    default_starts,
    find_fixed_points,
    rho_field,
    rho_from_m,
    rho_from_moments,
    self_map,
)

__all__ = [
    "FixedPointResult",
    "SelfConsistencyProblem",
    "SpectrumResult",
    "build_linearized",
    "classify",
    "convolution_matrix",
    "default_starts",
    "differentiation_matrix",
    "find_fixed_points",
    "rho_field",
    "rho_from_m",
    "rho_from_moments",
    "second_differentiation_matrix",
    "self_map",
    "spectrum",
]
