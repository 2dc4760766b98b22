"""
Output formats: hashed CSV tables, the MKVH binary heat map, PPM/PNG rasters
and JSON summaries.
"""

import csv
import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import matplotlib
import numpy as np

from ..utils.errors import RootFileError, ShapeError


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

HEATMAP_MAGIC = b"MKVH"
HEATMAP_VERSION = 1
_HEADER = struct.Struct("<4sHQQ")

ROOT_COLUMNS = ("sigma", "m1", "m2")


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def format_value(value: Any) -> str:
    """Exact, platform-independent text for one CSV cell."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


# ----------------------------------------------------------------------
# CSV
# ----------------------------------------------------------------------

def write_csv(
    path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]], config_hash: str
) -> Path:
    """
    Write a table whose first line records the configuration hash.

    Returns:
        Path written
    """
    path = _prepare(path)
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# config_hash={config_hash}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ShapeError(f"row has {len(row)} cells, header has {len(header)}")
            writer.writerow([format_value(v) for v in row])
            count += 1
    logger.info(f"Wrote {count} row(s) to {path}")
    return path


def read_csv(path: PathLike) -> Tuple[str, List[Dict[str, str]]]:
    """
    Read a table written by :func:`write_csv`.

    Returns:
        ``(config_hash, rows)``; rows map column name to raw text
    """
    with open(path, "r", encoding="utf-8", newline="") as f:
        first = f.readline()
        config_hash = ""
        if first.startswith("# config_hash="):
            config_hash = first.strip().split("=", 1)[1]
        else:
            f.seek(0)
        return config_hash, list(csv.DictReader(f))


def read_roots_csv(path: PathLike) -> List[Dict[str, float]]:
    """
    Load a roots table (``sigma, m1, m2`` and optionally more moments).

    Raises:
        FileNotFoundError: If the file does not exist
        RootFileError: On missing columns or unparsable values
    """
    _, rows = read_csv(path)
    if not rows:
        raise RootFileError(f"{path}: no roots")
    missing = [c for c in ROOT_COLUMNS if c not in rows[0]]
    if missing:
        raise RootFileError(f"{path}: missing column(s) {', '.join(missing)}")

    moment_columns = [c for c in rows[0] if c.startswith("moment_")]
    roots = []
    for line, row in enumerate(rows, start=3):
        try:
            root = {c: float(row[c]) for c in ROOT_COLUMNS + tuple(moment_columns)}
        except (TypeError, ValueError):
            raise RootFileError(f"{path}:{line}: unparsable row {row}") from None
        root["stability"] = row.get("stability") or "unknown"
        roots.append(root)
    return roots


# ----------------------------------------------------------------------
# Binary heat map
# ----------------------------------------------------------------------

def write_heatmap(path: PathLike, matrix: np.ndarray) -> Path:
    """Write ``MKVH``, version u16, rows u64, cols u64, then row-major little-endian float64."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ShapeError(f"heat map must be 2-D, got shape {matrix.shape}")
    path = _prepare(path)
    rows, cols = matrix.shape
    with open(path, "wb") as f:
        f.write(_HEADER.pack(HEATMAP_MAGIC, HEATMAP_VERSION, rows, cols))
        f.write(np.ascontiguousarray(matrix, dtype="<f8").tobytes())
    logger.info(f"Wrote {rows}x{cols} heat map to {path}")
    return path


def read_heatmap(path: PathLike) -> np.ndarray:
    """Inverse of :func:`write_heatmap`."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ShapeError(f"{path}: truncated header")
    magic, version, rows, cols = _HEADER.unpack_from(data)
    if magic != HEATMAP_MAGIC or version != HEATMAP_VERSION:
        raise ShapeError(f"{path}: not an MKVH v{HEATMAP_VERSION} file")
    payload = data[_HEADER.size:]
    if len(payload) != 8 * rows * cols:
        raise ShapeError(f"{path}: expected {rows * cols} values, found {len(payload) // 8}")
    return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(float)


# ----------------------------------------------------------------------
# Rasters
# ----------------------------------------------------------------------

def render_raster(matrix: np.ndarray, cmap: str = "viridis") -> np.ndarray:
    """
    Map a matrix to 8-bit RGB through a matplotlib colormap.

    Values are scaled linearly between the matrix extremes; a constant
    matrix maps to the middle of the colormap.
    """
    matrix = np.asarray(matrix, dtype=float)
    lo, hi = float(np.nanmin(matrix)), float(np.nanmax(matrix))
    scaled = np.full(matrix.shape, 0.5) if hi - lo < 1e-300 else (matrix - lo) / (hi - lo)
    colormap = matplotlib.colormaps["gray" if cmap == "grayscale" else cmap]
    rgba = colormap(scaled, bytes=True)
    return np.ascontiguousarray(rgba[..., :3])


def write_ppm(path: PathLike, matrix: np.ndarray, cmap: str = "viridis") -> Path:
    """Binary PPM (P6); one pixel per matrix entry, first row at the top."""
    rgb = render_raster(matrix, cmap)
    path = _prepare(path)
    rows, cols = rgb.shape[:2]
    with open(path, "wb") as f:
        f.write(f"P6\n{cols} {rows}\n255\n".encode("ascii"))
        f.write(rgb.tobytes())
    logger.info(f"Wrote {cols}x{rows} raster to {path}")
    return path


def write_png(path: PathLike, matrix: np.ndarray, cmap: str = "viridis") -> Path:
    """PNG encode of the same raster as :func:`write_ppm`."""
    from matplotlib import image as mpimg

    path = _prepare(path)
    mpimg.imsave(path, render_raster(matrix, cmap), format="png")
    logger.info(f"Wrote PNG raster to {path}")
    return path


# ----------------------------------------------------------------------
# JSON
# ----------------------------------------------------------------------

def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_json(path: PathLike, data: Dict[str, Any]) -> Path:
    """Pretty-printed UTF-8 JSON with numpy values converted."""
    path = _prepare(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False, default=_to_builtin)
        f.write("\n")
    logger.info(f"Saved summary to {path}")
    return path
