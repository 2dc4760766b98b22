"""Monte Carlo studies built on top of the integrators."""

from .convergence import (
    ConvergencePoint,
    ConvergenceReport,
    bootstrap_ci,
    fit_slope,
    mse_study_J,
    mse_study_dt,
    reference_tail,
)

__all__ = [
    "ConvergencePoint",
    "ConvergenceReport",
    "bootstrap_ci",
    "fit_slope",
    "mse_study_J",
    "mse_study_dt",
    "reference_tail",
]
