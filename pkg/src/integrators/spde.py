"""
Spectral Galerkin / exponential Euler-Maruyama integrator for the
McKean-Vlasov SPDE

    du = d/dx[(V' + F' * u) u + sigma du/dx] dt + sum_k lambda_k e_k dw_k

Diffusion is integrated exactly through the factor ``exp(-sigma k^2 dt)``,
the nonlinear drift explicitly, and the noise as the exact Ornstein-Uhlenbeck
increment of each mode.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from ..analysis.observables import I1, I2, ObservableSeries, mass, neg_fraction
from ..models.spec import ModelSpec
from ..spectral.field import (
    SQRT_2PI,
    SpectralField,
    derivative,
    grid_to_half,
    half_to_grid,
    l2_norm,
)
from ..utils.errors import ConfigurationError, DivergenceError, ShapeError
from .noise import Forcing, NoiseStream


logger = logging.getLogger(__name__)

InitialCondition = Union[str, Sequence[Sequence[float]]]

_TAYLOR_CUTOFF = 1e-8


# ----------------------------------------------------------------------
# Configuration and initial data
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SimConfig:
    """
    Time stepping parameters of one trajectory.

    Attributes:
        dt: Time step
        t_max: Horizon; ``ceil(t_max/dt)`` steps are taken (0 is allowed)
        J: Resolved mode count
        seed: 64-bit master seed of the noise stream
        snapshot_stride: Steps between stored snapshots
        initial_condition: ``"sin2"`` for ``(1/pi) sin^2 x``, ``"uniform"``
            for ``1/(2 pi)``, or ``[[k, re, im], ...]`` coefficients
        trial: Trial index, selects an independent noise stream
    """

    dt: float = 1e-2
    t_max: float = 3e4
    J: int = 128
    seed: int = 0
    snapshot_stride: int = 100
    initial_condition: InitialCondition = "sin2"
    trial: int = 0

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ConfigurationError(f"time step must be positive, got {self.dt}", "simulation.dt")
        if self.t_max < 0:
            raise ConfigurationError(f"horizon must be >= 0, got {self.t_max}", "simulation.t_max")
        if self.J < 4 or self.J % 2:
            raise ConfigurationError(f"mode count must be an even integer >= 4, got {self.J}", "simulation.J")
        if self.snapshot_stride < 1:
            raise ConfigurationError(
                f"snapshot stride must be >= 1, got {self.snapshot_stride}", "simulation.snapshot_stride"
            )

    @property
    def n_steps(self) -> int:
        # tolerance keeps t_max = N * dt from rounding up to N + 1
        return int(math.ceil(self.t_max / self.dt - 1e-9)) if self.t_max > 0 else 0


def initial_field(initial_condition: InitialCondition, J: int) -> SpectralField:
    """Build the initial state named or listed in a :class:`SimConfig`."""
    if isinstance(initial_condition, str):
        if initial_condition == "sin2":
            return SpectralField.from_function(lambda x: np.sin(x) ** 2 / np.pi, J)
        if initial_condition == "uniform":
            return SpectralField.from_modes(J, {0: 1.0 / SQRT_2PI})
        raise ConfigurationError(
            f"unknown initial condition {initial_condition!r}", "simulation.initial_condition"
        )
    modes = {}
    for item in initial_condition:
        if len(item) != 3:
            raise ConfigurationError(
                f"expected [k, re, im], got {item!r}", "simulation.initial_condition"
            )
        modes[int(item[0])] = complex(item[1], item[2])
    return SpectralField.from_modes(J, modes)


# ----------------------------------------------------------------------
# Spatial operator
# ----------------------------------------------------------------------

def _drift_half(spec: ModelSpec, half: np.ndarray) -> np.ndarray:
    M = 2 * spec.J
    u_grid = half_to_grid(half, M)
    conv_grid = half_to_grid(SQRT_2PI * spec.Fprime_coeffs.half * half, M)
    flux = grid_to_half(spec.Vprime_grid * u_grid + conv_grid * u_grid, spec.J)
    return 1j * spec.wavenumbers * flux


def mkv_drift(spec: ModelSpec, u: SpectralField) -> SpectralField:
    """
    Nonlinear part of the McKean-Vlasov operator, ``d/dx[(V' + F' * u) u]``.

    Products are formed on the 2J grid and projected back to J modes.
    The ``k = 0`` coefficient is exactly zero.
    """
    if u.J != spec.J:
        raise ShapeError(f"field has J={u.J}, model has J={spec.J}")
    return SpectralField(_drift_half(spec, u.half))


def full_operator(spec: ModelSpec, u: SpectralField) -> SpectralField:
    """Complete deterministic right-hand side: ``mkv_drift(u) + sigma * u''``."""
    return mkv_drift(spec, u) + spec.sigma * derivative(u, 2)


def residual_norm(spec: ModelSpec, u: SpectralField) -> float:
    """L2 norm of the full operator; zero at stationary densities."""
    return l2_norm(full_operator(spec, u))


# ----------------------------------------------------------------------
# Time stepping
# ----------------------------------------------------------------------

def diffusion_weights(sigma: float, k: np.ndarray, dt: float) -> tuple:
    """
    Per-mode factors of the exponential Euler-Maruyama update.

    Returns:
        ``(decay, weight, ou_std)`` where ``decay = exp(-a dt)``,
        ``weight = (1 - exp(-a dt)) / a`` (limit dt at a = 0) and
        ``ou_std = sqrt((1 - exp(-2 a dt)) / (2 a))`` (limit sqrt(dt)),
        with ``a = sigma k^2``.
    """
    a = sigma * np.asarray(k, dtype=float) ** 2
    adt = a * dt
    small = np.abs(adt) < _TAYLOR_CUTOFF
    safe_a = np.where(small, 1.0, a)

    decay = np.exp(-adt)
    weight = np.where(small, dt * (1.0 - adt / 2.0 + adt ** 2 / 6.0), -np.expm1(-adt) / safe_a)
    ou_var = np.where(small, dt * (1.0 - adt + 2.0 * adt ** 2 / 3.0), -np.expm1(-2.0 * adt) / (2.0 * safe_a))
    return decay, weight, np.sqrt(ou_var)


class ExponentialEulerStepper:
    """
    Precomputed update ``u_{n+1} = decay u_n + weight N(u_n) + increment``.

    Args:
        spec: Model (fixes J)
        dt: Time step
    """

    def __init__(self, spec: ModelSpec, dt: float) -> None:
        self.spec = spec
        self.dt = float(dt)
        self.decay, self.weight, ou_std = diffusion_weights(spec.sigma, spec.wavenumbers, dt)
        self.ou_scale = spec.noise.lambdas * ou_std
        self.ou_scale[-1] = 0.0

    def advance(self, half: np.ndarray, forcing: Forcing = None) -> np.ndarray:
        """One step on a raw half-spectrum."""
        new = self.decay * half + self.weight * _drift_half(self.spec, half)
        if forcing is not None:
            new = new + forcing.increment(self.ou_scale)
        new[-1] = 0.0
        return new


def step(
    spec: ModelSpec, u_n: SpectralField, dt: float, noise: Forcing = None, index: int = 0
) -> SpectralField:
    """
    Advance a state by one exponential Euler-Maruyama step.

    Args:
        spec: Model at the field's resolution
        u_n: Current state
        dt: Time step
        noise: Unit normals (:class:`NoiseDraw`), a precomputed increment, or
            None for the deterministic step
        index: Zero-based position of this step in its run

    Returns:
        Next state

    Raises:
        DivergenceError: If the new state is not finite; ``step`` is
            ``index + 1`` and ``partial`` is ``u_n``
    """
    if u_n.J != spec.J:
        raise ShapeError(f"field has J={u_n.J}, model has J={spec.J}")
    if index < 0:
        raise ConfigurationError(f"step index must be non-negative, got {index}", "index")
    new = ExponentialEulerStepper(spec, dt).advance(u_n.half, noise)
    if not np.all(np.isfinite(new)):
        raise DivergenceError(step=index + 1, partial=u_n)
    return SpectralField(new)


# ----------------------------------------------------------------------
# Trajectories
# ----------------------------------------------------------------------

@dataclass
class Trajectory:
    """
    Stored part of one SPDE run.

    Attributes:
        times: Times of the stored snapshots
        snapshots: Half-spectra, shape (stored, J/2 + 1)
        series: Observables at the stored times
        steps_taken: Number of completed steps
        final: State after the last completed step (stored or not)
    """

    times: np.ndarray
    snapshots: np.ndarray
    series: ObservableSeries
    steps_taken: int
    final: SpectralField
    config: Optional[SimConfig] = field(default=None, repr=False)

    def states(self) -> List[SpectralField]:
        return [SpectralField(row) for row in self.snapshots]

    def __len__(self) -> int:
        return int(self.times.size)


class _Recorder:
    def __init__(self) -> None:
        self.times: List[float] = []
        self.rows: List[np.ndarray] = []
        self.values: List[tuple] = []

    def record(self, t: float, half: np.ndarray) -> None:
        u = SpectralField(half)
        self.times.append(t)
        self.rows.append(u.half)
        self.values.append((I1(u), I2(u), mass(u), neg_fraction(u)))

    def build(self, steps_taken: int, final: np.ndarray, config: SimConfig) -> Trajectory:
        values = np.array(self.values, dtype=float).reshape(-1, 4)
        times = np.array(self.times, dtype=float)
        series = ObservableSeries(
            times=times, I1=values[:, 0], I2=values[:, 1], mass=values[:, 2], neg_fraction=values[:, 3]
        )
        snapshots = np.array(self.rows, dtype=np.complex128).reshape(len(self.rows), -1)
        return Trajectory(times, snapshots, series, steps_taken, SpectralField(final), config)


def simulate(spec: ModelSpec, config: SimConfig, u0: Optional[SpectralField] = None) -> Trajectory:
    """
    Run one SPDE trajectory.

    Snapshots (and observables) are stored at step 0 and every
    ``snapshot_stride`` steps after it. The run is deterministic for a fixed
    ``(seed, trial, config, spec)``.

    Args:
        spec: Model (resampled to ``config.J`` if needed)
        config: Time stepping parameters
        u0: Initial state overriding ``config.initial_condition``

    Returns:
        Trajectory

    Raises:
        DivergenceError: On a non-finite state; ``partial`` holds the
            trajectory recorded up to the last finite snapshot
    """
    spec = spec.at_resolution(config.J)
    stepper = ExponentialEulerStepper(spec, config.dt)
    stream = NoiseStream(config.seed, config.trial) if spec.gamma > 0 else None
    half = (u0 if u0 is not None else initial_field(config.initial_condition, config.J)).half.copy()
    if half.size != config.J // 2 + 1:
        raise ShapeError(f"initial state has J={2 * (half.size - 1)}, expected {config.J}")

    n_steps = config.n_steps
    stride = config.snapshot_stride
    report_every = max(1, n_steps // 10)
    recorder = _Recorder()
    recorder.record(0.0, half)

    logger.info(f"Simulating {spec!r}: {n_steps} steps of dt={config.dt}, seed={config.seed}")
    for n in range(n_steps):
        forcing = stream.draw(n, config.J) if stream is not None else None
        half = stepper.advance(half, forcing)
        if not np.all(np.isfinite(half)):
            logger.error(f"Non-finite state at step {n + 1} (t={(n + 1) * config.dt:.6g})")
            partial = recorder.build(n, recorder.rows[-1], config)
            raise DivergenceError(step=n + 1, partial=partial)
        if (n + 1) % stride == 0:
            recorder.record((n + 1) * config.dt, half)
        if (n + 1) % report_every == 0:
            logger.info(f"Progress: step {n + 1}/{n_steps}, I1={I1(SpectralField(half)):+.4f}")

    return recorder.build(n_steps, half, config)
