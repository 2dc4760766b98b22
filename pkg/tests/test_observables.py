#!/usr/bin/env python3
"""
Test suite for trajectory observables and heat maps.
"""

import numpy as np
import pytest

from src.analysis import I1, I2, ObservableSeries, heatmap, mass, neg_fraction
from src.spectral import SpectralField, grid, to_real, trapezoid


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture
def tilted():
    """Density (1 + 0.5 sin x + 0.2 cos x) / 2pi."""
    return SpectralField.from_function(
        lambda x: (1 + 0.5 * np.sin(x) + 0.2 * np.cos(x)) / (2 * np.pi), 16
    )


class _Snapshots:
    def __init__(self, states):
        self._states = states

    def states(self):
        return self._states


# ============================================================================
# Observable Tests
# ============================================================================

def test_first_harmonic_functionals(tilted):
    """Test I1 = int u sin x and I2 = int u cos x."""
    assert I1(tilted) == pytest.approx(0.25)
    assert I2(tilted) == pytest.approx(0.1)


def test_functionals_match_quadrature(tilted):
    """Test the closed forms against the trapezoid rule."""
    x = grid(64)
    samples = to_real(tilted, 64)
    assert I1(tilted) == pytest.approx(trapezoid(samples * np.sin(x)))
    assert I2(tilted) == pytest.approx(trapezoid(samples * np.cos(x)))
    assert mass(tilted) == pytest.approx(1.0)


def test_negative_fraction():
    """Test cos x is negative on half of a grid avoiding its zeros."""
    u = SpectralField.from_function(np.cos, 16)
    assert neg_fraction(u, M=30) == pytest.approx(0.5)
    assert neg_fraction(SpectralField.from_function(lambda x: 1 + 0 * x, 16)) == 0.0


def test_series_from_states(tilted):
    """Test the series evaluates every observable and reports mass drift."""
    series = ObservableSeries.from_states(np.array([0.0, 1.0]), [tilted, 2 * tilted])
    assert len(series) == 2
    assert series.points().shape == (2, 2)
    assert series.mass_drift() == pytest.approx(1.0)


def test_empty_series_has_no_drift():
    """Test an empty series reports zero drift."""
    assert ObservableSeries().mass_drift() == 0.0


# ============================================================================
# Heat Map Tests
# ============================================================================

def test_heatmap_rows_are_real_space_snapshots(tilted):
    """Test one row per snapshot with M samples each."""
    matrix = heatmap(_Snapshots([tilted, tilted]), 48)
    assert matrix.shape == (2, 48)
    assert np.allclose(matrix[0], to_real(tilted, 48))


def test_heatmap_requires_snapshots():
    """Test an empty trajectory raises ValueError."""
    with pytest.raises(ValueError):
        heatmap(_Snapshots([]), 32)
