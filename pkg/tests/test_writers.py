#!/usr/bin/env python3
"""
Test suite for the output formats.

Tests cover:
- Hashed CSV tables and exact float text
- Roots tables and their validation
- MKVH binary heat maps
- PPM, PNG and JSON outputs
"""

import json
import struct

import numpy as np
import pytest

from src.utils.errors import RootFileError, ShapeError
from src.writers import (
    format_value,
    read_csv,
    read_heatmap,
    read_roots_csv,
    render_raster,
    write_csv,
    write_heatmap,
    write_json,
    write_png,
    write_ppm,
)


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture
def matrix():
    """3 x 4 matrix with distinct entries."""
    return np.arange(12, dtype=float).reshape(3, 4) / 7.0


# ============================================================================
# CSV Tests
# ============================================================================

def test_format_value():
    """Test floats keep 17 significant digits and other types stay readable."""
    assert float(format_value(0.1)) == 0.1
    assert format_value(np.float64(1 / 3)) == "0.33333333333333331"
    assert format_value(np.int64(7)) == "7"
    assert format_value(True) == "true"
    assert format_value("stable") == "stable"


def test_csv_starts_with_config_hash(tmp_path):
    """Test the hash line precedes the header."""
    path = write_csv(tmp_path / "t.csv", ["a", "b"], [(1, 0.5), (2, 0.25)], "abc123")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# config_hash=abc123"
    assert lines[1] == "a,b"
    config_hash, rows = read_csv(path)
    assert config_hash == "abc123"
    assert rows == [{"a": "1", "b": "0.5"}, {"a": "2", "b": "0.25"}]


def test_csv_rejects_ragged_rows(tmp_path):
    """Test a row with the wrong width raises ShapeError."""
    with pytest.raises(ShapeError):
        write_csv(tmp_path / "t.csv", ["a", "b"], [(1,)], "x")


def test_csv_creates_parent_directories(tmp_path):
    """Test nested output paths are created."""
    path = write_csv(tmp_path / "deep" / "dir" / "t.csv", ["a"], [(1,)], "x")
    assert path.exists()


# ============================================================================
# Roots Table Tests
# ============================================================================

def test_read_roots(tmp_path):
    """Test roots load as floats with their stability label."""
    path = write_csv(
        tmp_path / "roots.csv", ["sigma", "m1", "m2", "stability"],
        [(0.2, 0.98, 0.0, "stable"), (0.2, 0.0, 0.0, "unstable")], "h",
    )
    roots = read_roots_csv(path)
    assert roots[0] == {"sigma": 0.2, "m1": 0.98, "m2": 0.0, "stability": "stable"}
    assert roots[1]["stability"] == "unstable"


def test_read_roots_defaults_stability(tmp_path):
    """Test a missing stability column reads as unknown."""
    path = write_csv(tmp_path / "roots.csv", ["sigma", "m1", "m2"], [(1.0, 0.0, 0.0)], "h")
    assert read_roots_csv(path)[0]["stability"] == "unknown"


def test_read_roots_missing_column(tmp_path):
    """Test a table without m2 is rejected."""
    path = write_csv(tmp_path / "roots.csv", ["sigma", "m1"], [(1.0, 0.0)], "h")
    with pytest.raises(RootFileError, match="m2"):
        read_roots_csv(path)


def test_read_roots_unparsable_value(tmp_path):
    """Test non-numeric cells are rejected with their line."""
    path = write_csv(tmp_path / "roots.csv", ["sigma", "m1", "m2"], [(1.0, "abc", 0.0)], "h")
    with pytest.raises(RootFileError, match=":3:"):
        read_roots_csv(path)


def test_read_roots_empty(tmp_path):
    """Test a table with no rows is rejected."""
    path = write_csv(tmp_path / "roots.csv", ["sigma", "m1", "m2"], [], "h")
    with pytest.raises(RootFileError):
        read_roots_csv(path)


def test_read_roots_missing_file(tmp_path):
    """Test a missing file raises FileNotFoundError."""
    with pytest.raises(FileNotFoundError):
        read_roots_csv(tmp_path / "absent.csv")


# ============================================================================
# Heat Map Tests
# ============================================================================

def test_heatmap_layout(tmp_path, matrix):
    """Test the MKVH header fields and the little-endian payload."""
    path = write_heatmap(tmp_path / "h.bin", matrix)
    data = path.read_bytes()
    magic, version, rows, cols = struct.unpack_from("<4sHQQ", data)
    assert (magic, version, rows, cols) == (b"MKVH", 1, 3, 4)
    assert len(data) == 22 + 8 * 12
    assert struct.unpack_from("<d", data, 22 + 8 * 5)[0] == matrix[1, 1]
    assert np.array_equal(read_heatmap(path), matrix)


def test_heatmap_rejects_bad_files(tmp_path):
    """Test wrong magic and truncated payloads."""
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"XXXX" + bytes(18))
    with pytest.raises(ShapeError):
        read_heatmap(bad)
    short = tmp_path / "short.bin"
    short.write_bytes(struct.pack("<4sHQQ", b"MKVH", 1, 2, 2) + bytes(8))
    with pytest.raises(ShapeError):
        read_heatmap(short)


def test_heatmap_must_be_two_dimensional(tmp_path):
    """Test a vector is refused."""
    with pytest.raises(ShapeError):
        write_heatmap(tmp_path / "h.bin", np.ones(4))


# ============================================================================
# Raster Tests
# ============================================================================

def test_render_raster_extremes(matrix):
    """Test grayscale maps the minimum to black and the maximum to white."""
    rgb = render_raster(matrix, "grayscale")
    assert rgb.shape == (3, 4, 3)
    assert rgb.dtype == np.uint8
    assert tuple(rgb[0, 0]) == (0, 0, 0)
    assert tuple(rgb[-1, -1]) == (255, 255, 255)


def test_render_constant_matrix():
    """Test a constant matrix maps to the middle of the colormap."""
    rgb = render_raster(np.ones((2, 2)), "grayscale")
    assert np.all(rgb == rgb[0, 0])
    assert 120 <= rgb[0, 0, 0] <= 135


def test_ppm_layout(tmp_path, matrix):
    """Test the P6 header and one RGB triple per entry."""
    path = write_ppm(tmp_path / "h.ppm", matrix)
    data = path.read_bytes()
    header = b"P6\n4 3\n255\n"
    assert data.startswith(header)
    assert len(data) == len(header) + 3 * 12


def test_png_signature(tmp_path, matrix):
    """Test the PNG file carries the PNG signature."""
    path = write_png(tmp_path / "h.png", matrix)
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


# ============================================================================
# JSON Tests
# ============================================================================

def test_json_converts_numpy_values(tmp_path):
    """Test arrays, numpy scalars and complex numbers are serialized."""
    path = write_json(tmp_path / "s.json", {
        "array": np.array([1.0, 2.0]),
        "scalar": np.float64(0.5),
        "count": np.int64(3),
        "leading": complex(-0.1, 0.2),
        "label": "σ",
    })
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data == {"array": [1.0, 2.0], "scalar": 0.5, "count": 3, "leading": [-0.1, 0.2], "label": "σ"}
    assert "σ" in path.read_text(encoding="utf-8")
