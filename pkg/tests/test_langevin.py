#!/usr/bin/env python3
"""
Test suite for the scalar Langevin demonstration.

Tests cover:
- Potentials, minima and the Maxwellian histogram
- Path length and reproducibility
- Total-variation distance
"""

import numpy as np
import pytest

from src.analysis import count_modes_1d
from src.integrators import LANGEVIN_PRESETS, get_langevin_potential, simulate_langevin, total_variation
from src.utils.errors import ConfigurationError


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture
def double_well():
    """U(y) = (y^2 - 1)^2 / 4."""
    return get_langevin_potential("double_well")


def _maxwellian_samples(potential, alpha, n, seed=0):
    """I.i.d. samples drawn bin by bin from the Maxwellian histogram."""
    edges = np.linspace(potential.window[0], potential.window[1], 601)
    probs = potential.maxwellian(alpha, edges)
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(probs), size=n, p=probs)
    return edges[idx] + rng.random(n) * np.diff(edges)[idx]


# ============================================================================
# Potential Tests
# ============================================================================

def test_double_well_minima(double_well):
    """Test the minima sit at y = -1 and y = 1."""
    assert np.allclose(double_well.minima(), [-1.0, 1.0], atol=1e-2)


def test_multi_well_has_several_minima():
    """Test the tilted cosine potential has more than two wells."""
    assert len(LANGEVIN_PRESETS["multi_well"].minima()) > 2


def test_maxwellian_is_normalized_and_symmetric(double_well):
    """Test the bin probabilities sum to one and mirror around zero."""
    edges = np.linspace(-2.5, 2.5, 61)
    probs = double_well.maxwellian(0.5, edges)
    assert probs.sum() == pytest.approx(1.0)
    assert np.allclose(probs, probs[::-1], rtol=1e-10)


def test_unknown_potential():
    """Test unknown names raise with the langevin.potential key."""
    with pytest.raises(ConfigurationError) as excinfo:
        get_langevin_potential("harmonic")
    assert excinfo.value.key == "langevin.potential"


# ============================================================================
# Path Tests
# ============================================================================

def test_path_length_and_start(double_well):
    """Test the path has ceil(t_max/dt) + 1 points and starts at y0."""
    path = simulate_langevin(double_well.U_prime, alpha=0.5, dt=0.01, t_max=1.0, seed=0, y0=0.3)
    assert path.shape == (101,)
    assert path[0] == 0.3


def test_zero_noise_stays_at_minimum(double_well):
    """Test alpha = 0 leaves a path started at a minimum in place."""
    path = simulate_langevin(double_well.U_prime, alpha=0.0, dt=0.01, t_max=1.0, seed=0, y0=1.0)
    assert np.all(path == 1.0)


def test_paths_are_reproducible(double_well):
    """Test equal seeds give equal paths."""
    first = simulate_langevin(double_well.U_prime, 0.5, 0.01, 5.0, seed=11)
    second = simulate_langevin(double_well.U_prime, 0.5, 0.01, 5.0, seed=11)
    assert np.array_equal(first, second)


def test_negative_alpha_rejected(double_well):
    """Test alpha < 0 raises ConfigurationError."""
    with pytest.raises(ConfigurationError):
        simulate_langevin(double_well.U_prime, alpha=-1.0, dt=0.01, t_max=1.0, seed=0)


# ============================================================================
# Distance Tests
# ============================================================================

def test_total_variation_small_for_maxwellian_samples(double_well):
    """Test exact samples of the invariant density are close in TV."""
    samples = _maxwellian_samples(double_well, 0.5, 200000)
    assert total_variation(samples, double_well, 0.5) < 0.03


def test_total_variation_large_for_one_well(double_well):
    """Test samples confined to one well are far from the invariant density."""
    samples = np.random.default_rng(1).normal(1.0, 0.1, 10000)
    assert total_variation(samples, double_well, 0.5) > 0.4


def test_maxwellian_samples_are_bimodal(double_well):
    """Test the 1-d mode counter finds both wells."""
    count, positions = count_modes_1d(_maxwellian_samples(double_well, 0.3, 50000))
    assert count == 2
    assert np.allclose(positions, [-1.0, 1.0], atol=0.15)


@pytest.mark.slow
def test_long_path_approaches_maxwellian(double_well):
    """Test a t = 1e5 Euler-Maruyama run matches the Maxwellian to within 0.05 in TV."""
    path = simulate_langevin(double_well.U_prime, alpha=0.5, dt=0.01, t_max=1e5, seed=3)
    assert total_variation(path, double_well, 0.5) < 0.05
    count, positions = count_modes_1d(path)
    assert count == 2
    assert np.allclose(positions, [-1.0, 1.0], atol=0.15)
