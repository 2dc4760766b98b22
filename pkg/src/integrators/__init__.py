"""Time integrators: the spectral SPDE stepper and the scalar Langevin demo."""

from .langevin import (
    LANGEVIN_PRESETS,
    LangevinPotential,
    get_langevin_potential,
    simulate_langevin,
    total_variation,
)
from .noise import NoiseDraw, NoiseStream, StochasticIncrement
from .spde import (
    ExponentialEulerStepper,
    SimConfig,
    Trajectory,
    diffusion_weights,
    full_operator,
    initial_field,
    mkv_drift,
    residual_norm,
    simulate,
    step,
)

__all__ = [
    "ExponentialEulerStepper",
    "LANGEVIN_PRESETS",
    "LangevinPotential",
    "NoiseDraw",
    "NoiseStream",
    "SimConfig",
    "StochasticIncrement",
    "Trajectory",
    "diffusion_weights",
    "full_operator",
    "get_langevin_potential",
    "initial_field",
    "mkv_drift",
    "residual_norm",
    "simulate",
    "simulate_langevin",
    "step",
    "total_variation",
]
