"""Model definitions: potentials, diffusion and noise."""

from .potentials import DOUBLE_WELL, FOUR_WELL, PRESETS, Potentials, TrigSeries, get_potentials
from .spec import ModelSpec, NoiseSpec, convolve_Fprime, preset

__all__ = [
    "DOUBLE_WELL",
    "FOUR_WELL",
    "PRESETS",
    "ModelSpec",
    "NoiseSpec",
    "Potentials",
    "TrigSeries",
    "convolve_Fprime",
    "get_potentials",
    "preset",
]
