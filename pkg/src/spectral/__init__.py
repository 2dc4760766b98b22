"""Fourier representation of real periodic fields on the torus."""

from .field import (
    SQRT_2PI,
    SpectralField,
    dealiased_product,
    derivative,
    grid,
    l2_distance_squared,
    l2_norm,
    l2_norm_squared,
    project,
    resize,
    to_fourier,
    to_real,
    trapezoid,
)

__all__ = [
    "SQRT_2PI",
    "SpectralField",
    "dealiased_product",
    "derivative",
    "grid",
    "l2_distance_squared",
    "l2_norm",
    "l2_norm_squared",
    "project",
    "resize",
    "to_fourier",
    "to_real",
    "trapezoid",
]
