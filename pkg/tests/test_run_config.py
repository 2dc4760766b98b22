#!/usr/bin/env python3
"""
Test suite for run configuration loading and validation.
"""

from pathlib import Path

import pytest

from config.run_config import RunConfig, apply_overrides, load_run_config
from src.utils.errors import ConfigurationError


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture
def toml_file(tmp_path):
    """A small configuration file."""
    path = tmp_path / "run.toml"
    path.write_text(
        "[model]\n"
        "sigma = 0.6\n"
        "\n"
        "[simulation]\n"
        "J = 32\n"
        "t_max = 10.0\n"
        "\n"
        "[output]\n"
        "formats = [\"csv\", \"png\"]\n",
        encoding="utf-8",
    )
    return path


# ============================================================================
# Loading Tests
# ============================================================================

def test_defaults():
    """Test the defaults describe the double-well heat-map run."""
    config = load_run_config()
    assert config.model.preset == "double_well"
    assert config.model.sigma == 0.2
    assert config.model.gamma == 1e-2
    assert config.model.s == 0.75
    assert config.simulation.J == 128
    assert config.simulation.dt == 1e-2
    assert config.simulation.t_max == 3e4
    assert config.analysis.N_q == 4096


def test_file_values(toml_file):
    """Test values from the file replace defaults."""
    config = load_run_config(toml_file)
    assert config.model.sigma == 0.6
    assert config.simulation.J == 32
    assert config.output.formats == ["csv", "png"]


def test_overrides_take_precedence(toml_file):
    """Test dotted overrides beat file values and None is ignored."""
    config = load_run_config(toml_file, {"model.sigma": 0.3, "model.gamma": None})
    assert config.model.sigma == 0.3
    assert config.model.gamma == 1e-2


def test_apply_overrides_builds_tables():
    """Test missing tables are created."""
    assert apply_overrides({}, {"a.b.c": 1}) == {"a": {"b": {"c": 1}}}


def test_missing_file(tmp_path):
    """Test a missing file raises FileNotFoundError."""
    with pytest.raises(FileNotFoundError):
        load_run_config(tmp_path / "absent.toml")


def test_toml_syntax_error(tmp_path):
    """Test malformed TOML raises ConfigurationError."""
    path = tmp_path / "bad.toml"
    path.write_text("[model\nsigma = ", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_run_config(path)


# ============================================================================
# Validation Tests
# ============================================================================

@pytest.mark.parametrize("overrides,key", [
    ({"model.sigma": 0.0}, "model.sigma"),
    ({"model.s": 0.5}, "model.s"),
    ({"simulation.J": 31}, "simulation.J"),
    ({"simulation.dt": -1.0}, "simulation.dt"),
    ({"model.unknown": 1}, "model.unknown"),
    ({"analysis.spectrum_method": "arnoldi"}, "analysis.spectrum_method"),
    ({"analysis.valley_ratio": 1.5}, "analysis.valley_ratio"),
])
def test_invalid_values_name_their_key(overrides, key):
    """Test validation errors become ConfigurationError with the dotted key."""
    with pytest.raises(ConfigurationError) as excinfo:
        load_run_config(overrides=overrides)
    assert excinfo.value.key == key


def test_unknown_preset():
    """Test an unknown preset is rejected."""
    with pytest.raises(ConfigurationError):
        load_run_config(overrides={"model.preset": "triple_well"})


def test_custom_preset_requires_series():
    """Test preset custom without V and F tables is rejected."""
    with pytest.raises(ConfigurationError):
        load_run_config(overrides={"model.preset": "custom"})


def test_custom_potentials():
    """Test a custom model is built from its series tables."""
    config = load_run_config(overrides={
        "model.preset": "custom",
        "model.V.cos": [[3, 1.0]],
        "model.F.cos": [[1, -1.0]],
        "model.F.sin": [[2, 0.2]],
        "simulation.J": 16,
        "output.heatmap_M": 16,
    })
    spec = config.spec()
    assert spec.potentials.name == "custom"
    assert spec.potentials.interaction_harmonics() == [1, 2]


def test_heatmap_grid_must_cover_modes():
    """Test heatmap_M < J is rejected."""
    with pytest.raises(ConfigurationError):
        load_run_config(overrides={"simulation.J": 512, "output.heatmap_M": 256})


# ============================================================================
# Hash Tests
# ============================================================================

def test_config_hash_is_stable():
    """Test equal configurations hash equally and different ones differ."""
    first = RunConfig()
    second = load_run_config()
    assert first.config_hash() == second.config_hash()
    assert len(first.config_hash()) == 64
    assert load_run_config(overrides={"model.sigma": 0.3}).config_hash() != first.config_hash()


def test_config_hash_ignores_output_table():
    """Test output location and rendering choices do not change the hash."""
    base = load_run_config()
    moved = load_run_config(overrides={
        "output.directory": "/tmp/elsewhere",
        "output.formats": ["csv"],
        "output.colormap": "grayscale",
    })
    assert moved.config_hash() == base.config_hash()
    assert load_run_config(overrides={"simulation.seed": 9}).config_hash() != base.config_hash()


def test_convergence_defaults_are_stable_steps():
    """Test the default time-step sweep stops at 2e-2 and nests over dt_ref."""
    conv = load_run_config().convergence
    assert max(conv.dt_list) == pytest.approx(2e-2)
    for dt in conv.dt_list:
        assert dt / conv.dt_ref == pytest.approx(round(dt / conv.dt_ref))


def test_shipped_convergence_run_file():
    """Test runs/convergence.toml holds the sigma = gamma = 0.1, s = 1, J = 128, t = 10 sweep."""
    config = load_run_config(Path(__file__).resolve().parents[1] / "runs" / "convergence.toml")
    assert (config.model.sigma, config.model.gamma, config.model.s) == (0.1, 0.1, 1.0)
    assert (config.simulation.J, config.simulation.t_max) == (128, 10.0)
    assert config.convergence.dt_list == [2e-2, 1e-2, 5e-3, 2e-3, 1e-3]


def test_sim_config_carries_trial():
    """Test the simulation section produces a SimConfig for a given trial."""
    sim = load_run_config().simulation.sim_config(trial=5)
    assert sim.trial == 5
    assert sim.J == 128
