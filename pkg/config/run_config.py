"""
Run configuration: the parameters of one command, validated at load time.

A run configuration is a TOML file with optional ``[model]``,
``[simulation]``, ``[analysis]``, ``[convergence]``, ``[langevin]`` and
``[output]`` tables. Command-line flags override file values, which override
the defaults below.
"""

import hashlib
import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.integrators.spde import SimConfig
from src.models.potentials import PRESETS, Potentials, TrigSeries, get_potentials
from src.models.spec import ModelSpec
from src.utils.errors import ConfigurationError


logger = logging.getLogger(__name__)

Pairs = List[Tuple[int, float]]


def _even_modes(value: int) -> int:
    if value < 4 or value % 2:
        raise ValueError(f"must be an even integer >= 4, got {value}")
    return value


EvenModes = Annotated[int, AfterValidator(_even_modes)]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SeriesSection(_Section):
    """A trigonometric series ``sum a_h cos hx + b_h sin hx`` as ``[[h, amp], ...]`` pairs."""

    cos: Pairs = Field(default_factory=list)
    sin: Pairs = Field(default_factory=list)

    def to_series(self, key: str) -> TrigSeries:
        return TrigSeries.from_pairs(self.cos, self.sin, key=key)


class ModelSection(_Section):
    preset: str = "double_well"
    sigma: float = Field(0.2, gt=0)
    gamma: float = Field(1e-2, ge=0)
    s: float = Field(0.75, gt=0.5)
    V: Optional[SeriesSection] = None
    F: Optional[SeriesSection] = None

    @model_validator(mode="after")
    def _custom_needs_series(self) -> "ModelSection":
        if self.preset != "custom" and self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}; expected custom or one of {sorted(PRESETS)}")
        if self.preset == "custom" and (self.V is None or self.F is None):
            raise ValueError("preset 'custom' requires both V and F tables")
        return self

    def potentials(self) -> Potentials:
        if self.preset == "custom":
            return Potentials.from_series("custom", self.V.to_series("model.V"), self.F.to_series("model.F"))
        return get_potentials(self.preset)

    def spec(self, J: int) -> ModelSpec:
        return ModelSpec.build(self.potentials(), self.sigma, self.gamma, self.s, J)


class SimulationSection(_Section):
    J: EvenModes = 128
    dt: float = Field(1e-2, gt=0)
    t_max: float = Field(3e4, ge=0)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    snapshot_stride: int = Field(100, ge=1)
    initial_condition: Union[Literal["sin2", "uniform"], List[Tuple[int, float, float]]] = "sin2"

    def sim_config(self, trial: int = 0) -> SimConfig:
        return SimConfig(
            dt=self.dt,
            t_max=self.t_max,
            J=self.J,
            seed=self.seed,
            snapshot_stride=self.snapshot_stride,
            initial_condition=self.initial_condition,
            trial=trial,
        )


class AnalysisSection(_Section):
    burn_in: float = Field(0.1, ge=0, lt=1)
    bins: int = Field(64, ge=8)
    smoothing: float = Field(4.0, gt=0)
    valley_ratio: float = Field(0.75, gt=0, le=1)
    peak_threshold: float = Field(0.05, gt=0, lt=1)
    occupancy_threshold: float = Field(0.02, ge=0, lt=1)
    match_tolerance: float = Field(0.15, gt=0)
    N_q: int = Field(4096, ge=256)
    tol: float = Field(1e-10, gt=0)
    stability_J: EvenModes = 64
    spectrum_method: Literal["filter", "project"] = "filter"


class ConvergenceSection(_Section):
    trials: int = Field(256, ge=1)
    dt_ref: float = Field(1e-4, gt=0)
    dt_list: List[float] = Field(default_factory=lambda: [2e-2, 1e-2, 5e-3, 2e-3, 1e-3])
    J_ref: EvenModes = 512
    J_list: List[int] = Field(default_factory=lambda: [16, 32, 64])
    level: float = Field(0.95, gt=0, lt=1)
    bootstrap_samples: int = Field(2000, ge=100)


class LangevinSection(_Section):
    potential: Literal["double_well", "multi_well"] = "double_well"
    alpha: float = Field(0.5, ge=0)
    dt: float = Field(1e-2, gt=0)
    t_max: float = Field(1e5, ge=0)
    seed: int = Field(0, ge=0)
    bins: int = Field(60, ge=4)
    stride: int = Field(100, ge=1)


class OutputSection(_Section):
    directory: Optional[str] = None
    formats: List[Literal["csv", "bin", "ppm", "png", "json"]] = Field(
        default_factory=lambda: ["csv", "bin", "ppm", "json"]
    )
    colormap: Literal["viridis", "grayscale"] = "viridis"
    heatmap_M: int = Field(256, ge=4)


class RunConfig(_Section):
    """All parameters of a command; defaults reproduce the double-well heat-map run."""

    model: ModelSection = Field(default_factory=ModelSection)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    analysis: AnalysisSection = Field(default_factory=AnalysisSection)
    convergence: ConvergenceSection = Field(default_factory=ConvergenceSection)
    langevin: LangevinSection = Field(default_factory=LangevinSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def _grid_covers_modes(self) -> "RunConfig":
        if self.output.heatmap_M < self.simulation.J:
            raise ValueError(
                f"output.heatmap_M={self.output.heatmap_M} is smaller than simulation.J={self.simulation.J}"
            )
        return self

    def config_hash(self) -> str:
        """
        SHA-256 of the canonical JSON form; identical configs hash identically.

        The ``[output]`` table is left out, so the same run written to two
        directories carries the same hash.
        """
        payload = self.model_dump(mode="json", exclude={"output"})
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def spec(self) -> ModelSpec:
        return self.model.spec(self.simulation.J)


def _error_key(error: Mapping[str, Any]) -> str:
    return ".".join(str(part) for part in error["loc"] if not isinstance(part, int)) or "config"


def apply_overrides(data: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """Set dotted keys (``"model.sigma"``) in a nested dict; None values are skipped."""
    for dotted, value in overrides.items():
        if value is None:
            continue
        node = data
        *parents, leaf = dotted.split(".")
        for part in parents:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigurationError("cannot override inside a non-table value", dotted)
        node[leaf] = value
    return data


def load_run_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """
    Load and validate a run configuration.

    Args:
        path: TOML file, or None for defaults only
        overrides: Dotted-key values taking precedence over the file

    Returns:
        Validated RunConfig

    Raises:
        FileNotFoundError: If ``path`` does not exist
        ConfigurationError: On TOML syntax errors or invalid values, naming the key
    """
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        with open(path, "rb") as f:
            try:
                data = tomllib.load(f)
            except tomllib.TOMLDecodeError as e:
                raise ConfigurationError(f"{path}: {e}") from e
        logger.info(f"Loaded run configuration from {path}")

    apply_overrides(data, overrides or {})
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigurationError(first["msg"], _error_key(first)) from e
    logger.debug(f"Run configuration hash {config.config_hash()}")
    return config
