"""Scalar Langevin dynamics ``dY = -U'(Y) dt + sqrt(alpha) dB`` in a multi-well potential."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from ..utils.errors import ConfigurationError


logger = logging.getLogger(__name__)

_CHUNK = 65536


def _double_well(y):
    return (y ** 2 - 1.0) ** 2 / 4.0


def _double_well_prime(y):
    return y ** 3 - y


def _multi_well(y):
    return y ** 2 / 8.0 + np.cos(2.0 * y)


def _multi_well_prime(y):
    return y / 4.0 - 2.0 * np.sin(2.0 * y)


@dataclass(frozen=True)
class LangevinPotential:
    """A confining potential U with its derivative and a plotting window."""

    name: str
    U: Callable
    U_prime: Callable
    start: float
    window: tuple

    def maxwellian(self, alpha: float, edges: np.ndarray) -> np.ndarray:
        """
        Bin probabilities of the invariant density ``exp(-2U/alpha)``.

        Integrated with a fine midpoint rule inside each bin and normalized
        over the histogram range.
        """
        fine = np.linspace(edges[0], edges[-1], 64 * (len(edges) - 1) + 1)
        mid = 0.5 * (fine[1:] + fine[:-1])
        energy = 2.0 * self.U(mid) / alpha
        weights = np.exp(-(energy - energy.min())) * np.diff(fine)
        per_bin = weights.reshape(len(edges) - 1, 64).sum(axis=1)
        return per_bin / per_bin.sum()

    def minima(self, n_grid: int = 4001) -> np.ndarray:
        """Local minima of U on its window (grid search)."""
        y = np.linspace(self.window[0], self.window[1], n_grid)
        u = self.U(y)
        interior = (u[1:-1] < u[:-2]) & (u[1:-1] < u[2:])
        return y[1:-1][interior]


LANGEVIN_PRESETS: Dict[str, LangevinPotential] = {
    "double_well": LangevinPotential("double_well", _double_well, _double_well_prime, 1.0, (-2.5, 2.5)),
    "multi_well": LangevinPotential("multi_well", _multi_well, _multi_well_prime, 1.5, (-7.0, 7.0)),
}


def get_langevin_potential(name: str) -> LangevinPotential:
    try:
        return LANGEVIN_PRESETS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown Langevin potential {name!r}; expected one of {sorted(LANGEVIN_PRESETS)}",
            "langevin.potential",
        ) from None


def simulate_langevin(
    U_prime: Callable[[float], float],
    alpha: float,
    dt: float,
    t_max: float,
    seed: int,
    y0: float = 1.0,
) -> np.ndarray:
    """
    Euler-Maruyama path ``Y_{n+1} = Y_n - U'(Y_n) dt + sqrt(alpha dt) xi_n``.

    Args:
        U_prime: Derivative of the potential
        alpha: Noise intensity, >= 0
        dt: Time step
        t_max: Horizon
        seed: Seed of the normal increments
        y0: Initial position

    Returns:
        Path of length ``ceil(t_max/dt) + 1`` including ``y0``
    """
    if alpha < 0:
        raise ConfigurationError(f"alpha must be >= 0, got {alpha}", "langevin.alpha")
    if not dt > 0:
        raise ConfigurationError(f"time step must be positive, got {dt}", "langevin.dt")

    n_steps = int(math.ceil(t_max / dt - 1e-9)) if t_max > 0 else 0
    path = np.empty(n_steps + 1)
    path[0] = y = float(y0)
    rng = np.random.default_rng(seed)
    amplitude = math.sqrt(alpha * dt)

    logger.info(f"Langevin run: alpha={alpha}, dt={dt}, {n_steps} steps")
    for start in range(0, n_steps, _CHUNK):
        count = min(_CHUNK, n_steps - start)
        kicks = amplitude * rng.standard_normal(count) if alpha > 0 else np.zeros(count)
        for i in range(count):
            y = y - U_prime(y) * dt + kicks[i]
            path[start + i + 1] = y
    return path


def total_variation(samples: np.ndarray, potential: LangevinPotential, alpha: float, bins: int = 60) -> float:
    """Total-variation distance between a sample histogram and the Maxwellian."""
    edges = np.linspace(potential.window[0], potential.window[1], bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    empirical = counts / max(1, counts.sum())
    return float(0.5 * np.abs(empirical - potential.maxwellian(alpha, edges)).sum())
