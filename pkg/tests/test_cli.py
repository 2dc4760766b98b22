#!/usr/bin/env python3
"""
Test suite for the mkv_census entry script.

Tests cover:
- Exit codes for success, configuration, divergence and I/O errors
- Files written by each command
"""

import json

import pytest

from scripts.mkv_census import EXIT_CONFIG, EXIT_DIVERGENCE, EXIT_IO, EXIT_OK, main
from src.writers import read_csv, read_heatmap


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture
def small_run(tmp_path):
    """Arguments shared by the quick simulate runs."""
    return ["--J", "16", "--dt", "0.01", "--out", str(tmp_path), "--log-level", "WARNING"]


def _write_config(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return path


# ============================================================================
# simulate
# ============================================================================

def test_simulate_zero_horizon(tmp_path, small_run):
    """Test t_max = 0 writes one snapshot and skips mode detection."""
    config = _write_config(tmp_path, "[output]\nheatmap_M = 32\nformats = [\"csv\", \"bin\", \"ppm\", \"json\"]\n")
    code = main(["simulate", "--config", str(config), "--t-max", "0"] + small_run)
    assert code == EXIT_OK

    config_hash, rows = read_csv(tmp_path / "series.csv")
    assert len(rows) == 1
    assert float(rows[0]["mass"]) == pytest.approx(1.0)
    assert read_heatmap(tmp_path / "heatmap.bin").shape == (1, 32)
    assert (tmp_path / "heatmap.ppm").read_bytes().startswith(b"P6\n32 1\n255\n")

    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert summary["config_hash"] == config_hash
    assert summary["steps"] == 0
    assert summary["n_modes"] is None


def test_simulate_counts_modes(tmp_path, small_run):
    """Test a run with enough snapshots reports a mode count."""
    config = _write_config(tmp_path, "[simulation]\nsnapshot_stride = 1\n[output]\nheatmap_M = 32\n")
    code = main(["simulate", "--config", str(config), "--t-max", "2", "--sigma", "1.0"] + small_run)
    assert code == EXIT_OK
    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert summary["snapshots"] == 201
    assert summary["n_modes"] >= 1
    assert summary["mass_drift"] <= 1e-10


def test_simulate_rerun_writes_identical_series(tmp_path):
    """Test the same configuration written to two directories gives byte-identical series.csv."""
    config = _write_config(tmp_path, "[simulation]\nsnapshot_stride = 5\n[output]\nheatmap_M = 32\n")
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        args = ["simulate", "--config", str(config), "--J", "16", "--dt", "0.01", "--t-max", "1", "--seed", "7"]
        assert main(args + ["--out", str(out), "--log-level", "WARNING"]) == EXIT_OK
        outputs.append((out / "series.csv").read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0].startswith(b"# config_hash=")


def test_simulate_divergence_exit_code(tmp_path, small_run):
    """Test a blow-up exits with code 3 and keeps the partial series."""
    config = _write_config(
        tmp_path,
        "[simulation]\ninitial_condition = [[1, 1e200, 0.0]]\n[output]\nheatmap_M = 32\n",
    )
    code = main(["simulate", "--config", str(config), "--t-max", "1"] + small_run)
    assert code == EXIT_DIVERGENCE
    assert (tmp_path / "series_partial.csv").exists()


def test_invalid_parameter_exit_code(tmp_path, small_run):
    """Test sigma <= 0 exits with code 2."""
    assert main(["simulate", "--sigma", "-1"] + small_run) == EXIT_CONFIG


def test_missing_config_exit_code(tmp_path, small_run):
    """Test a missing configuration file exits with code 4."""
    assert main(["simulate", "--config", str(tmp_path / "absent.toml")] + small_run) == EXIT_IO


# ============================================================================
# fixed-points and stability
# ============================================================================

def test_fixed_points_then_stability(tmp_path):
    """Test the roots table feeds the stability command."""
    out = ["--out", str(tmp_path), "--log-level", "WARNING"]
    assert main(["fixed-points", "--sigma-list", "0.2", "1.0"] + out) == EXIT_OK

    _, rows = read_csv(tmp_path / "roots.csv")
    assert [r["sigma"] for r in rows].count("0.20000000000000001") == 3
    assert [r["sigma"] for r in rows].count("1") == 1
    assert sorted(r["stability"] for r in rows) == ["stable", "stable", "stable", "unstable"]

    assert main(["stability", "--roots", str(tmp_path / "roots.csv")] + out) == EXIT_OK
    _, leading = read_csv(tmp_path / "leading.csv")
    assert [r["label"] for r in leading] == [r["stability"] for r in rows]
    assert (tmp_path / "eigs_000.csv").exists()


def test_stability_missing_roots_file(tmp_path):
    """Test a missing roots file exits with code 4."""
    code = main(["stability", "--roots", str(tmp_path / "absent.csv"), "--out", str(tmp_path)])
    assert code == EXIT_IO


def test_stability_malformed_roots_file(tmp_path):
    """Test a roots file without moment columns exits with code 4."""
    roots = tmp_path / "roots.csv"
    roots.write_text("sigma,m1\n0.2,0.5\n", encoding="utf-8")
    assert main(["stability", "--roots", str(roots), "--out", str(tmp_path)]) == EXIT_IO


# ============================================================================
# converge and langevin
# ============================================================================

def test_converge_dt(tmp_path):
    """Test a tiny time-step study writes one row per step."""
    config = _write_config(
        tmp_path,
        "[simulation]\nJ = 16\nt_max = 0.1\n[output]\nheatmap_M = 32\n"
        "[convergence]\ntrials = 2\ndt_ref = 0.01\nbootstrap_samples = 100\n",
    )
    code = main([
        "converge", "--config", str(config), "--axis", "dt", "--sweep", "0.05", "0.02",
        "--out", str(tmp_path), "--log-level", "WARNING",
    ])
    assert code == EXIT_OK
    _, rows = read_csv(tmp_path / "convergence.csv")
    assert [float(r["param"]) for r in rows] == [0.02, 0.05]


def test_converge_rejects_non_nested_sweep(tmp_path):
    """Test a non-nested step exits with code 2."""
    config = _write_config(
        tmp_path, "[simulation]\nJ = 16\nt_max = 0.1\n[convergence]\ntrials = 1\ndt_ref = 0.01\n"
    )
    code = main(["converge", "--config", str(config), "--sweep", "0.015", "--out", str(tmp_path)])
    assert code == EXIT_CONFIG


def test_langevin(tmp_path):
    """Test the Langevin command writes the path and the histogram."""
    code = main([
        "langevin", "--potential", "double_well", "--alpha", "0.5", "--t-max", "20",
        "--out", str(tmp_path), "--log-level", "WARNING",
    ])
    assert code == EXIT_OK
    _, histogram = read_csv(tmp_path / "histogram.csv")
    assert len(histogram) == 60
    assert sum(float(r["maxwellian"]) for r in histogram) == pytest.approx(1.0)
    _, path = read_csv(tmp_path / "path.csv")
    assert len(path) == 21
