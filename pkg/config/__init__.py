"""Configuration module for mkv-census."""

from .run_config import RunConfig, load_run_config
from .settings import Settings, get_settings

__all__ = ["RunConfig", "Settings", "get_settings", "load_run_config"]
