#!/usr/bin/env python3
"""
Test suite for stationary densities and the self-consistency map.

Tests cover:
- Normalization and symmetry of the generated densities
- Root enumeration on both sides of the phase transition
- Agreement with the SPDE operator
"""

import numpy as np
import pytest
from scipy import special

from src.integrators import residual_norm
from src.models import DOUBLE_WELL, FOUR_WELL, Potentials, TrigSeries, preset
from src.solvers import (
    SelfConsistencyProblem,
    default_starts,
    find_fixed_points,
    rho_field,
    rho_from_m,
    rho_from_moments,
    self_map,
)
from src.spectral import trapezoid
from src.utils.errors import ConfigurationError


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture(scope="module")
def roots_low_noise():
    """Roots of the double-well model at sigma = 0.2."""
    return find_fixed_points(0.2)


# ============================================================================
# Density Tests
# ============================================================================

def test_density_is_normalized():
    """Test rho integrates to one for arbitrary moments."""
    result = rho_from_m(0.3, -0.1, 0.5)
    assert trapezoid(result.rho_grid) == pytest.approx(1.0, abs=1e-12)
    assert result.N_q == 4096


def test_normalization_constant_at_zero_moments():
    """Test Z = 2 pi I0(1/sigma) for rho = exp(-cos 2x / sigma) / Z."""
    result = rho_from_m(0.0, 0.0, 1.0)
    assert result.Z_sigma == pytest.approx(2 * np.pi * special.i0(1.0), rel=1e-12)


def test_large_diffusion_is_nearly_uniform():
    """Test rho -> 1/2pi as sigma grows."""
    result = rho_from_m(0.5, 0.5, 1e3)
    assert np.allclose(result.rho_grid, 1.0 / (2 * np.pi), rtol=5e-3)


def test_self_map_symmetries():
    """Test reflections of the double well act on the moments."""
    s1, c1 = self_map(0.4, 0.0, 0.3)
    assert c1 == pytest.approx(0.0, abs=1e-14)
    s2, _ = self_map(-0.4, 0.0, 0.3)
    assert s2 == pytest.approx(-s1, abs=1e-14)


def test_minimum_quadrature_points():
    """Test fewer than 256 quadrature points are refused."""
    with pytest.raises(ConfigurationError) as excinfo:
        rho_from_moments([0.0, 0.0], 0.5, N_q=128)
    assert excinfo.value.key == "N_q"


def test_problem_requires_positive_sigma():
    """Test sigma <= 0 raises with the model.sigma key."""
    with pytest.raises(ConfigurationError) as excinfo:
        SelfConsistencyProblem(DOUBLE_WELL, 0.0)
    assert excinfo.value.key == "model.sigma"


def test_problem_requires_interaction():
    """Test F = 0 has no moments to solve for."""
    flat = Potentials.from_series("flat", TrigSeries(cos=((2, 1.0),)), TrigSeries())
    with pytest.raises(ConfigurationError):
        SelfConsistencyProblem(flat, 0.5)


# ============================================================================
# Root Enumeration Tests
# ============================================================================

def test_default_starts_grid():
    """Test the 9 x 9 grid over [-2, 2]^2."""
    starts = default_starts(2)
    assert starts.shape == (81, 2)
    assert starts.min() == -2.0
    assert starts.max() == 2.0


def test_single_root_above_transition():
    """Test sigma = 1 has only the symmetric root."""
    roots = find_fixed_points(1.0)
    assert len(roots) == 1
    assert roots[0].m1 == pytest.approx(0.0, abs=1e-9)
    assert roots[0].m2 == pytest.approx(0.0, abs=1e-9)
    assert roots[0].residual <= 1e-10


def test_three_roots_below_transition(roots_low_noise):
    """Test sigma = 0.2 has the symmetric root and a mirrored pair."""
    assert len(roots_low_noise) == 3
    m1 = sorted(r.m1 for r in roots_low_noise)
    assert m1[1] == pytest.approx(0.0, abs=1e-9)
    assert m1[2] == pytest.approx(-m1[0], abs=1e-8)
    assert 0.7 <= m1[2] <= 1.0
    assert all(abs(r.m2) < 1e-8 for r in roots_low_noise)
    assert all(r.stability == "unknown" for r in roots_low_noise)


def test_roots_sorted_and_independent_of_workers(roots_low_noise):
    """Test the output is sorted by moments and equal for two workers."""
    m1 = [r.m1 for r in roots_low_noise]
    assert m1 == sorted(m1)
    parallel = find_fixed_points(0.2, workers=2)
    assert np.allclose([r.m1 for r in parallel], m1, atol=1e-9)


def test_starts_must_match_dimension():
    """Test starts with the wrong number of columns are rejected."""
    with pytest.raises(ConfigurationError):
        find_fixed_points(0.5, starts=np.zeros((3, 3)))


def test_four_well_preset_has_roots():
    """Test the four-well model produces converged roots."""
    roots = find_fixed_points(0.3, potentials=FOUR_WELL)
    assert roots
    assert all(r.residual <= 1e-10 for r in roots)


def test_roots_are_stationary_for_the_spde(roots_low_noise):
    """Test each root's density makes the full SPDE operator vanish."""
    spec = preset("double_well", sigma=0.2, gamma=0.0, s=0.75, J=128)
    for root in roots_low_noise:
        u = rho_field(root, DOUBLE_WELL, 128)
        assert residual_norm(spec, u) <= 1e-6
