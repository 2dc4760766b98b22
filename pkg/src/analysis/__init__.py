"""Trajectory diagnostics: observables, heat maps and mode counting."""

from .modes import Cluster, ModeReport, count_hops, count_modes, count_modes_1d
from .observables import I1, I2, ObservableSeries, heatmap, mass, neg_fraction

__all__ = [
    "Cluster",
    "I1",
    "I2",
    "ModeReport",
    "ObservableSeries",
    "count_hops",
    "count_modes",
    "count_modes_1d",
    "heatmap",
    "mass",
    "neg_fraction",
]
