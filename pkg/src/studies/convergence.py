"""
Strong-convergence studies of the spectral stepper.

Every coarse run is driven by the same Brownian path as its fine reference:

* in time, coarse stochastic-convolution increments are assembled from the
  fine ones by exact semigroup composition,
  ``zeta_coarse = sum_j exp(-sigma k^2 (t_{n+1} - t_{j+1})) zeta_j``;
* in space, coarse runs read the prefix of the counter-based stream that
  covers their resolved band.

The MSE is the trial mean of ``|u_coarse(t_max) - u_ref(t_max)|^2`` with
L2 norms taken in Fourier space. Its log-log slope is twice the strong
(root-mean-square) order of the scheme.

A coarse step that blows up is recorded with an infinite MSE and left out of
the fit; a blow-up of the reference aborts the study.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..integrators.noise import NoiseStream, StochasticIncrement
from ..integrators.spde import ExponentialEulerStepper, SimConfig, diffusion_weights, initial_field
from ..models.spec import ModelSpec
from ..spectral.field import SpectralField, l2_distance_squared, l2_norm_squared
from ..utils.errors import ConfigurationError, DivergenceError
from ..utils.parallel import parallel_map


logger = logging.getLogger(__name__)

_NEST_TOL = 1e-9


@dataclass(frozen=True)
class ConvergencePoint:
    param: float
    mse: float
    lo: float
    hi: float


@dataclass
class ConvergenceReport:
    """
    MSE against a reference, per discretization parameter.

    Attributes:
        axis: ``"dt"`` or ``"J"``
        points: Sorted by parameter; ``lo <= mse <= hi``
        fitted_slope: Log-log least-squares slope over points above the floor
            (NaN when fewer than two points qualify)
        n_trials: Monte Carlo trials per point
        floor: Rounding-level MSE of the coupling
    """

    axis: str
    points: List[ConvergencePoint] = field(default_factory=list)
    fitted_slope: float = float("nan")
    n_trials: int = 0
    floor: float = 0.0

    @property
    def strong_order(self) -> float:
        """Root-mean-square convergence order, half the MSE slope."""
        return self.fitted_slope / 2.0

    @property
    def diverged(self) -> List[float]:
        """Parameters whose runs became non-finite."""
        return [p.param for p in self.points if not np.isfinite(p.mse)]

    def rows(self) -> List[Tuple[float, float, float, float]]:
        return [(p.param, p.mse, p.lo, p.hi) for p in self.points]


def bootstrap_ci(
    samples: Sequence[float], level: float = 0.95, B: int = 2000, seed: int = 0
) -> Tuple[float, float]:
    """
    Percentile bootstrap interval for the mean.

    Args:
        samples: Non-empty sample
        level: Coverage level
        B: Number of resamples
        seed: Seed of the resampling generator

    Returns:
        ``(low, high)``, always containing the sample mean
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ConfigurationError("bootstrap needs at least one sample", "samples")
    if not 0.0 < level < 1.0:
        raise ConfigurationError(f"confidence level must be in (0, 1), got {level}", "level")
    rng = np.random.default_rng(seed)
    means = x[rng.integers(0, x.size, size=(B, x.size))].mean(axis=1)
    alpha = 1.0 - level
    lo, hi = np.quantile(means, [alpha / 2.0, 1.0 - alpha / 2.0])
    mean = float(x.mean())
    return min(float(lo), mean), max(float(hi), mean)


def fit_slope(params: Sequence[float], mse: Sequence[float], floor: float) -> float:
    """
    Least-squares slope of ``log10 mse`` against ``log10 param``.

    Only finite points above ``10 * floor`` enter the fit.
    """
    params = np.asarray(params, dtype=float)
    mse = np.asarray(mse, dtype=float)
    keep = np.isfinite(mse) & (mse > 10.0 * floor)
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log10(params[keep]), np.log10(mse[keep]), 1)[0])


# ----------------------------------------------------------------------
# Time-step study
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class _DtJob:
    spec: ModelSpec
    config: SimConfig
    ratios: Tuple[int, ...]
    trial: int


def _nesting_ratios(dt_list: Sequence[float], dt_ref: float, n_ref: int) -> Tuple[int, ...]:
    ratios = []
    for dt in dt_list:
        r = dt / dt_ref
        ratio = int(round(r))
        if ratio < 1 or abs(r - ratio) > _NEST_TOL * max(1.0, r):
            raise ConfigurationError(
                f"time step {dt} is not an integer multiple of the reference step {dt_ref}", "simulation.dt"
            )
        if n_ref % ratio:
            raise ConfigurationError(
                f"horizon is not a whole number of steps of {dt}", "simulation.t_max"
            )
        ratios.append(ratio)
    return tuple(ratios)


def _dt_trial(job: _DtJob) -> Tuple[np.ndarray, float]:
    """
    Squared errors of every coarse step against the fine reference for one trial.

    A coarse state that becomes non-finite stops advancing and scores ``inf``.
    """
    spec, config = job.spec, job.config
    fine = ExponentialEulerStepper(spec, config.dt)
    coarse = [ExponentialEulerStepper(spec, config.dt * r) for r in job.ratios]
    fine_decay, _, _ = diffusion_weights(spec.sigma, spec.wavenumbers, config.dt)
    stream = NoiseStream(config.seed, job.trial) if spec.gamma > 0 else None

    u0 = initial_field(config.initial_condition, config.J).half
    ref = u0.copy()
    states = [u0.copy() for _ in job.ratios]
    accumulated = [np.zeros_like(u0) for _ in job.ratios]
    diverged = [False] * len(job.ratios)

    for j in range(config.n_steps):
        if stream is not None:
            draw = stream.draw(j, config.J)
            zeta = draw.increment(fine.ou_scale)
        else:
            zeta = np.zeros_like(u0)
        ref = fine.advance(ref, StochasticIncrement(zeta))
        for i, r in enumerate(job.ratios):
            accumulated[i] = fine_decay * accumulated[i] + zeta
            if (j + 1) % r == 0:
                if not diverged[i]:
                    with np.errstate(over="ignore", invalid="ignore"):
                        states[i] = coarse[i].advance(states[i], StochasticIncrement(accumulated[i]))
                    diverged[i] = not np.isfinite(states[i]).all()
                accumulated[i] = np.zeros_like(u0)
        if not np.isfinite(ref).all():
            raise DivergenceError(step=j + 1)

    reference = SpectralField(ref)
    with np.errstate(over="ignore", invalid="ignore"):
        errors = np.array([
            np.inf if bad else l2_distance_squared(SpectralField(s), reference)
            for s, bad in zip(states, diverged)
        ])
    errors[~np.isfinite(errors)] = np.inf
    return errors, l2_norm_squared(reference)


def _summarize(
    axis: str,
    params: Sequence[float],
    errors: np.ndarray,
    ref_norms: np.ndarray,
    n_ref_steps: int,
    level: float,
    B: int,
    ci_seed: int,
) -> ConvergenceReport:
    n_trials = errors.shape[0]
    mse = np.sum(errors, axis=0) / n_trials
    floor = float(np.finfo(float).eps ** 2 * max(1, n_ref_steps) * np.mean(ref_norms))
    points = []
    for i, param in enumerate(params):
        if not np.isfinite(errors[:, i]).all():
            n_bad = int(np.sum(~np.isfinite(errors[:, i])))
            logger.warning(f"{axis}={param:g} diverged in {n_bad}/{n_trials} trials; excluded from the fit")
            points.append(ConvergencePoint(float(param), float("inf"), float("inf"), float("inf")))
            continue
        lo, hi = bootstrap_ci(errors[:, i], level=level, B=B, seed=ci_seed)
        points.append(ConvergencePoint(float(param), float(mse[i]), min(lo, float(mse[i])), max(hi, float(mse[i]))))
    points.sort(key=lambda p: p.param)
    slope = fit_slope([p.param for p in points], [p.mse for p in points], floor)
    report = ConvergenceReport(axis, points, slope, n_trials, floor)

    logger.info(f"Convergence in {axis} over {n_trials} trials:")
    for p in points:
        logger.info(f"  {axis}={p.param:<10.4g} MSE={p.mse:.4e}  CI=[{p.lo:.4e}, {p.hi:.4e}]")
    logger.info(f"  fitted slope: {slope:.3f} (strong order {report.strong_order:.3f})")
    return report


def _run_trials(func, jobs: list, workers: int) -> Tuple[np.ndarray, np.ndarray]:
    batch = max(1, len(jobs) // 10)
    errors, norms = [], []
    for start in range(0, len(jobs), batch):
        for e, n in parallel_map(func, jobs[start:start + batch], workers=workers):
            errors.append(e)
            norms.append(n)
        logger.info(f"Trials completed: {len(errors)}/{len(jobs)}")
    return np.vstack(errors), np.asarray(norms)


def mse_study_dt(
    spec: ModelSpec,
    base_config: SimConfig,
    dt_list: Sequence[float],
    dt_ref: float,
    n_trials: int,
    workers: int = 1,
    level: float = 0.95,
    B: int = 2000,
    ci_seed: int = 0,
) -> ConvergenceReport:
    """
    Strong convergence in the time step at fixed J.

    Args:
        spec: Model (resampled to ``base_config.J``)
        base_config: Supplies J, t_max, seed and the initial condition
        dt_list: Coarse steps, each an integer multiple of ``dt_ref``
        dt_ref: Reference step
        n_trials: Independent Brownian paths

    Raises:
        ConfigurationError: On non-nested steps or a horizon that is not a
            whole number of coarse steps
    """
    if n_trials < 1:
        raise ConfigurationError(f"need at least one trial, got {n_trials}", "trials")
    config = replace(base_config, dt=dt_ref)
    ratios = _nesting_ratios(dt_list, dt_ref, config.n_steps)
    spec = spec.at_resolution(config.J)

    logger.info(
        f"dt study: {spec!r}, dt_ref={dt_ref}, dt_list={list(dt_list)}, "
        f"t_max={config.t_max}, {n_trials} trials"
    )
    jobs = [_DtJob(spec, config, ratios, trial) for trial in range(n_trials)]
    errors, norms = _run_trials(_dt_trial, jobs, workers)
    return _summarize("dt", dt_list, errors, norms, config.n_steps, level, B, ci_seed)


# ----------------------------------------------------------------------
# Resolution study
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class _JJob:
    spec: ModelSpec
    config: SimConfig
    J_list: Tuple[int, ...]
    trial: int


def _final_state(spec: ModelSpec, config: SimConfig, J: int, trial: int) -> SpectralField:
    spec = spec.at_resolution(J)
    stepper = ExponentialEulerStepper(spec, config.dt)
    stream = NoiseStream(config.seed, trial) if spec.gamma > 0 else None
    half = initial_field(config.initial_condition, J).half.copy()
    for n in range(config.n_steps):
        half = stepper.advance(half, stream.draw(n, J) if stream is not None else None)
        if not np.isfinite(half).all():
            raise DivergenceError(step=n + 1)
    return SpectralField(half)


def _J_trial(job: _JJob) -> Tuple[np.ndarray, float]:
    reference = _final_state(job.spec, job.config, job.config.J, job.trial)
    errors = np.array([
        l2_distance_squared(_final_state(job.spec, job.config, J, job.trial), reference)
        for J in job.J_list
    ])
    return errors, l2_norm_squared(reference)


def mse_study_J(
    spec: ModelSpec,
    base_config: SimConfig,
    J_list: Sequence[int],
    J_ref: int,
    n_trials: int,
    workers: int = 1,
    level: float = 0.95,
    B: int = 2000,
    ci_seed: int = 0,
) -> ConvergenceReport:
    """
    Strong convergence in the mode count at fixed time step.

    Coarse fields are zero-padded to ``J_ref`` for the error norm.

    Raises:
        ConfigurationError: If some J exceeds ``J_ref`` or is odd
    """
    if n_trials < 1:
        raise ConfigurationError(f"need at least one trial, got {n_trials}", "trials")
    for J in J_list:
        if J > J_ref:
            raise ConfigurationError(f"J={J} exceeds the reference resolution {J_ref}", "simulation.J")
        if J < 4 or J % 2:
            raise ConfigurationError(f"mode count must be an even integer >= 4, got {J}", "simulation.J")
    config = replace(base_config, J=J_ref)

    logger.info(
        f"J study: {spec!r}, J_ref={J_ref}, J_list={list(J_list)}, dt={config.dt}, "
        f"t_max={config.t_max}, {n_trials} trials"
    )
    jobs = [_JJob(spec, config, tuple(int(J) for J in J_list), trial) for trial in range(n_trials)]
    errors, norms = _run_trials(_J_trial, jobs, workers)
    return _summarize("J", J_list, errors, norms, config.n_steps, level, B, ci_seed)


def reference_tail(spec: ModelSpec, J: int, J_ref: Optional[int] = None) -> float:
    """
    Stationary variance of the modes a J-mode run leaves out,
    ``sum_{J/2 <= |k| < J_ref/2} lambda_k^2 / (2 sigma k^2)``, summed over both signs of k.
    """
    upper = (J_ref // 2) if J_ref else 1 << 20
    k = np.arange(J // 2, upper, dtype=float)
    return float(2.0 * np.sum((spec.gamma / k ** spec.s) ** 2 / (2.0 * spec.sigma * k ** 2)))
