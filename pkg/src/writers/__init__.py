"""Persistence of run outputs."""

from .formats import (
    HEATMAP_MAGIC,
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

__all__ = [
    "HEATMAP_MAGIC",
    "format_value",
    "read_csv",
    "read_heatmap",
    "read_roots_csv",
    "render_raster",
    "write_csv",
    "write_heatmap",
    "write_json",
    "write_png",
    "write_ppm",
]
