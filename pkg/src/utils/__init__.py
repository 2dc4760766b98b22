"""Utility modules."""

from .errors import (
    ConfigurationError,
    DivergenceError,
    EigensolverError,
    MkvError,
    ResolutionError,
    RootFileError,
    ShapeError,
)
from .logging_config import setup_logging
from .parallel import parallel_map

__all__ = [
    "ConfigurationError",
    "DivergenceError",
    "EigensolverError",
    "MkvError",
    "ResolutionError",
    "RootFileError",
    "ShapeError",
    "parallel_map",
    "setup_logging",
]
