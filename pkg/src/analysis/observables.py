"""Scalar diagnostics of SPDE states and heat-map assembly."""

import logging
from dataclasses import dataclass, field
from typing import List, Protocol

import numpy as np

from ..spectral.field import SQRT_2PI, SpectralField, half_to_grid, to_real


logger = logging.getLogger(__name__)


def I1(u: SpectralField) -> float:
    """``int u(x) sin x dx = -sqrt(2*pi) * Im(u_1)``."""
    return float(-SQRT_2PI * u.half[1].imag)


def I2(u: SpectralField) -> float:
    """``int u(x) cos x dx = sqrt(2*pi) * Re(u_1)``."""
    return float(SQRT_2PI * u.half[1].real)


def mass(u: SpectralField) -> float:
    """``int u(x) dx = sqrt(2*pi) * u_0``."""
    return float(SQRT_2PI * u.half[0].real)


def neg_fraction(u: SpectralField, M: int = 0) -> float:
    """Fraction of grid points (default 2J) where the field is negative."""
    samples = half_to_grid(u.half, M or 2 * u.J)
    return float(np.mean(samples < 0.0))


@dataclass
class ObservableSeries:
    """
    Time series of the first-harmonic functionals of a trajectory.

    All arrays share the length of ``times``.
    """

    times: np.ndarray = field(default_factory=lambda: np.empty(0))
    I1: np.ndarray = field(default_factory=lambda: np.empty(0))
    I2: np.ndarray = field(default_factory=lambda: np.empty(0))
    mass: np.ndarray = field(default_factory=lambda: np.empty(0))
    neg_fraction: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __len__(self) -> int:
        return int(self.times.size)

    @classmethod
    def from_states(cls, times: np.ndarray, states: List[SpectralField]) -> "ObservableSeries":
        """Evaluate every observable on a list of states."""
        return cls(
            times=np.asarray(times, dtype=float),
            I1=np.array([I1(u) for u in states]),
            I2=np.array([I2(u) for u in states]),
            mass=np.array([mass(u) for u in states]),
            neg_fraction=np.array([neg_fraction(u) for u in states]),
        )

    def points(self) -> np.ndarray:
        """``(I1, I2)`` pairs, shape (n, 2)."""
        return np.column_stack([self.I1, self.I2])

    def mass_drift(self) -> float:
        """Largest deviation of the mass from its initial value."""
        if not len(self):
            return 0.0
        return float(np.max(np.abs(self.mass - self.mass[0])))


class _HasSnapshots(Protocol):
    def states(self) -> List[SpectralField]: ...


def heatmap(trajectory: _HasSnapshots, M: int) -> np.ndarray:
    """
    Real-space picture of a trajectory.

    Args:
        trajectory: Anything exposing ``states()`` (a :class:`Trajectory`)
        M: Spatial samples per row

    Returns:
        Matrix of shape (stored snapshots, M); row n is ``to_real(snapshot_n, M)``
    """
    states = trajectory.states()
    if not states:
        raise ValueError("trajectory has no snapshots")
    return np.vstack([to_real(u, M) for u in states])
