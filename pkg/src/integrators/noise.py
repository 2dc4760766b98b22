"""
Counter-based Gaussian noise for the spectral SPDE stepper.

The complex normal for mode k at step n is a pure function of
``(seed, trial, k, n)``: step n uses a Philox generator keyed by
``(seed, trial)`` with its counter positioned at n, and mode k reads the
``(2k-2, 2k-1)`` entries of that generator's normal sequence. Runs at
different J therefore see identical noise on the modes they share, and runs
at different time steps can rebuild coarse increments from fine ones.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class NoiseDraw:
    """
    Unit complex normals for one step.

    Attributes:
        xi: Half-spectrum ``xi_k`` for ``k = 0 .. J/2`` with independent
            real and imaginary parts of variance 1/2; ``xi_0`` and the
            Nyquist entry are zero. ``xi_{-k} = conj(xi_k)`` is implied.
    """

    xi: np.ndarray

    def increment(self, ou_scale: np.ndarray) -> np.ndarray:
        """Stochastic-convolution increment ``lambda_k * sqrt(...) * xi_k``."""
        return ou_scale * self.xi


@dataclass(frozen=True, eq=False)
class StochasticIncrement:
    """A precomputed stochastic-convolution increment (already scaled)."""

    values: np.ndarray

    def increment(self, ou_scale: np.ndarray) -> np.ndarray:
        return self.values


Forcing = Optional[Union[NoiseDraw, StochasticIncrement]]


class NoiseStream:
    """
    Reproducible per-step noise addressed by ``(seed, trial, n)``.

    Args:
        seed: 64-bit master seed
        trial: Trial index; distinct trials get disjoint Philox keys
    """

    def __init__(self, seed: int, trial: int = 0) -> None:
        self.seed = int(seed) & _MASK64
        self.trial = int(trial) & _MASK64
        self._key = np.array([self.seed, self.trial], dtype=np.uint64)

    def _generator(self, n: int) -> np.random.Generator:
        counter = np.array([0, 0, n & _MASK64, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(counter=counter, key=self._key))

    def normals(self, n: int, n_modes: int) -> np.ndarray:
        """Complex normals for modes ``k = 1 .. n_modes`` at step n."""
        raw = self._generator(n).standard_normal(2 * n_modes)
        return (raw[0::2] + 1j * raw[1::2]) / np.sqrt(2.0)

    def draw(self, n: int, J: int) -> NoiseDraw:
        """Noise for all resolved modes of a J-mode field at step n."""
        xi = np.zeros(J // 2 + 1, dtype=np.complex128)
        xi[1:J // 2] = self.normals(n, J // 2 - 1)
        return NoiseDraw(xi)
