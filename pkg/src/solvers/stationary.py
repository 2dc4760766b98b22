"""
Stationary densities of the McKean-Vlasov PDE through the self-consistency map.

Every stationary density has the form

    rho(x) = exp(-[V(x) + (F * rho)(x)] / sigma) / Z

When F is a finite trigonometric series with harmonics h = 1..H, the
convolution ``F * rho`` only depends on the moments
``S_h = int rho sin(hx)``, ``C_h = int rho cos(hx)``, so the problem
reduces to the finite fixed point ``m = T(m)`` on
``m = (S_1, C_1, ..., S_H, C_H)``. For the presets (F = -cos x) this is the
two-parameter problem in ``(m1, m2) = (S_1, C_1)``.
"""

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..models.potentials import DOUBLE_WELL, Potentials
from ..spectral.field import SpectralField, grid, to_fourier
from ..utils.errors import ConfigurationError
from ..utils.parallel import parallel_map


logger = logging.getLogger(__name__)

MIN_QUADRATURE_POINTS = 256


@dataclass(frozen=True, eq=False)
class FixedPointResult:
    """
    A candidate stationary density.

    Attributes:
        moments: ``(S_1, C_1, ..., S_H, C_H)``; ``(m1, m2)`` for single-harmonic F
        sigma: Diffusion coefficient it was computed for
        Z_sigma: Normalization constant of the unshifted exponential
        rho_grid: Density on ``N_q`` uniform quadrature points
        residual: ``|T(m) - m|``
        stability: ``"stable"``, ``"unstable"`` or ``"unknown"``
    """

    moments: np.ndarray
    sigma: float
    Z_sigma: float
    rho_grid: np.ndarray = field(repr=False)
    residual: float
    stability: str = "unknown"

    @property
    def m1(self) -> float:
        return float(self.moments[0])

    @property
    def m2(self) -> float:
        return float(self.moments[1])

    @property
    def N_q(self) -> int:
        return int(self.rho_grid.size)

    def with_stability(self, label: str) -> "FixedPointResult":
        return replace(self, stability=label)

    def __repr__(self) -> str:
        return (
            f"FixedPointResult(m1={self.m1:+.10f}, m2={self.m2:+.10f}, sigma={self.sigma}, "
            f"residual={self.residual:.2e}, stability={self.stability})"
        )


class SelfConsistencyProblem:
    """
    The map ``T(m)`` for one potential pair and diffusion value.

    Args:
        potentials: V and F
        sigma: Diffusion coefficient
        N_q: Uniform quadrature points (trapezoid rule)
    """

    def __init__(self, potentials: Potentials, sigma: float, N_q: int = 4096) -> None:
        if not sigma > 0:
            raise ConfigurationError(f"diffusion must be positive, got {sigma}", "model.sigma")
        self.potentials = potentials
        self.sigma = float(sigma)
        self.N_q = int(N_q)
        self.harmonics = potentials.interaction_harmonics()
        if not self.harmonics:
            raise ConfigurationError("interaction potential F has no harmonics", "model.F")

        self.x = grid(self.N_q)
        self.V = np.asarray(potentials.V(self.x), dtype=float)
        coefficients = potentials.interaction_coefficients(self.harmonics)

        tests, kernel = [], []
        for h in self.harmonics:
            a, b = coefficients[h]
            sin_h, cos_h = np.sin(h * self.x), np.cos(h * self.x)
            tests.extend([sin_h, cos_h])
            kernel.extend([a * sin_h - b * cos_h, a * cos_h + b * sin_h])
        self.tests = np.vstack(tests)
        self.kernel = np.vstack(kernel)

    @property
    def dim(self) -> int:
        return 2 * len(self.harmonics)

    def _weights(self, m: np.ndarray) -> Tuple[np.ndarray, float, float]:
        exponent = -(self.V + m @ self.kernel) / self.sigma
        shift = float(exponent.max())
        weights = np.exp(exponent - shift)
        return weights, shift, float(2.0 * np.pi / self.N_q * weights.sum())

    def rho(self, m: Sequence[float]) -> np.ndarray:
        """Normalized density on the quadrature grid for moments m."""
        weights, _, z = self._weights(np.asarray(m, dtype=float))
        return weights / z

    def __call__(self, m: Sequence[float]) -> np.ndarray:
        """``T(m)``: moments of the density generated by m."""
        return (2.0 * np.pi / self.N_q) * (self.tests @ self.rho(m))

    def result(self, m: Sequence[float]) -> FixedPointResult:
        """Package the density of m with its normalization and residual."""
        m = np.asarray(m, dtype=float)
        weights, shift, z = self._weights(m)
        rho = weights / z
        with np.errstate(over="ignore"):
            Z_sigma = float(z * np.exp(shift))
        residual = float(np.linalg.norm((2.0 * np.pi / self.N_q) * (self.tests @ rho) - m))
        moments = m.copy()
        moments.setflags(write=False)
        rho.setflags(write=False)
        return FixedPointResult(moments, self.sigma, Z_sigma, rho, residual)

    def jacobian(self, m: np.ndarray, h: float = 1e-6) -> np.ndarray:
        """Central finite-difference Jacobian of ``T(m) - m``."""
        columns = []
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = h
            columns.append((self(m + e) - self(m - e)) / (2.0 * h))
        return np.column_stack(columns) - np.eye(self.dim)

    def solve_from(
        self, start: Sequence[float], tol: float, damping: float = 0.5, max_iter: int = 200,
        newton_iter: int = 50,
    ) -> Optional[np.ndarray]:
        """
        Damped fixed-point iteration followed by a Newton polish.

        Returns:
            Root moments, or None when the start does not converge
        """
        m = np.asarray(start, dtype=float)
        best, best_residual = m, np.inf
        for _ in range(max_iter):
            image = self(m)
            residual = np.linalg.norm(image - m)
            if residual < best_residual:
                best, best_residual = m, residual
            if residual <= tol:
                break
            m = (1.0 - damping) * m + damping * image

        # repelling roots are approached and then left; Newton restarts from the closest pass
        m = best
        polish = 0
        for _ in range(newton_iter):
            g = self(m) - m
            if np.linalg.norm(g) <= tol:
                # two extra steps push the root to rounding level
                polish += 1
                if polish > 2:
                    return m
            try:
                delta = np.linalg.solve(self.jacobian(m), -g)
            except np.linalg.LinAlgError:
                logger.debug(f"Singular Jacobian at {m}")
                return None
            m = m + delta
            if not np.all(np.isfinite(m)):
                return None
        return m if np.linalg.norm(self(m) - m) <= tol else None


def rho_from_moments(
    moments: Sequence[float], sigma: float, N_q: int = 4096, potentials: Potentials = DOUBLE_WELL
) -> FixedPointResult:
    """Density generated by arbitrary moments (not necessarily a fixed point)."""
    if N_q < MIN_QUADRATURE_POINTS:
        raise ConfigurationError(f"need at least {MIN_QUADRATURE_POINTS} quadrature points, got {N_q}", "N_q")
    return SelfConsistencyProblem(potentials, sigma, N_q).result(moments)


def rho_from_m(
    m1: float, m2: float, sigma: float, N_q: int = 4096, potentials: Potentials = DOUBLE_WELL
) -> FixedPointResult:
    """
    ``rho(x) = exp(-[cos 2x - m1 sin x - m2 cos x] / sigma) / Z`` for the
    double-well preset (or the analogous density for other potentials with a
    single interaction harmonic).
    """
    return rho_from_moments([m1, m2], sigma, N_q, potentials)


def self_map(
    m1: float, m2: float, sigma: float, N_q: int = 4096, potentials: Potentials = DOUBLE_WELL
) -> Tuple[float, float]:
    """``(int rho sin x, int rho cos x)`` for ``rho = rho_from_m(m1, m2, sigma)``."""
    if N_q < MIN_QUADRATURE_POINTS:
        raise ConfigurationError(f"need at least {MIN_QUADRATURE_POINTS} quadrature points, got {N_q}", "N_q")
    image = SelfConsistencyProblem(potentials, sigma, N_q)([m1, m2])
    return float(image[0]), float(image[1])


def default_starts(dim: int, per_axis: int = 9, half_width: float = 2.0) -> np.ndarray:
    """Uniform multi-start grid over ``[-2, 2]^dim``, thinned for dim > 2."""
    if dim > 2:
        per_axis = max(3, int(round(81 ** (1.0 / dim))) | 1)
    axis = np.linspace(-half_width, half_width, per_axis)
    return np.array(list(itertools.product(axis, repeat=dim)))


@dataclass(frozen=True)
class _StartJob:
    potentials: Potentials
    sigma: float
    N_q: int
    start: Tuple[float, ...]
    tol: float
    damping: float
    max_iter: int


def _run_start(job: _StartJob) -> Optional[np.ndarray]:
    problem = SelfConsistencyProblem(job.potentials, job.sigma, job.N_q)
    return problem.solve_from(job.start, job.tol, job.damping, job.max_iter)


def find_fixed_points(
    sigma: float,
    starts: Optional[np.ndarray] = None,
    tol: float = 1e-10,
    N_q: int = 4096,
    potentials: Potentials = DOUBLE_WELL,
    damping: float = 0.5,
    max_iter: int = 200,
    workers: int = 1,
) -> List[FixedPointResult]:
    """
    Enumerate stationary densities from a grid of starting moments.

    Each start runs a damped iteration and a Newton polish; converged roots
    closer than ``10 * tol`` are merged. The output is sorted by moments so
    it does not depend on the worker count.

    Args:
        sigma: Diffusion coefficient
        starts: Starting moments, shape (n, dim); default 9x9 over [-2, 2]^2
        tol: Residual tolerance ``|T(m) - m|``
        N_q: Quadrature points
        potentials: V and F
        damping: Relaxation factor of the fixed-point iteration
        max_iter: Damped iterations before Newton
        workers: Parallel workers over starts

    Returns:
        Distinct roots with stability ``"unknown"``
    """
    if not tol > 0:
        raise ConfigurationError(f"tolerance must be positive, got {tol}", "tol")
    if N_q < MIN_QUADRATURE_POINTS:
        raise ConfigurationError(f"need at least {MIN_QUADRATURE_POINTS} quadrature points, got {N_q}", "N_q")
    problem = SelfConsistencyProblem(potentials, sigma, N_q)
    starts = default_starts(problem.dim) if starts is None else np.atleast_2d(np.asarray(starts, dtype=float))
    if starts.shape[1] != problem.dim:
        raise ConfigurationError(f"starts must have {problem.dim} columns, got {starts.shape[1]}", "starts")

    jobs = [_StartJob(potentials, sigma, N_q, tuple(s), tol, damping, max_iter) for s in starts]
    outcomes = parallel_map(_run_start, jobs, workers=workers)

    roots: List[np.ndarray] = []
    dropped = 0
    for m in outcomes:
        if m is None:
            dropped += 1
            continue
        if all(np.linalg.norm(m - r) > 10.0 * tol for r in roots):
            roots.append(m)
    roots.sort(key=lambda r: tuple(np.round(r, 12)))

    logger.info(
        f"sigma={sigma}: {len(roots)} distinct root(s) from {len(starts)} starts "
        f"({dropped} non-convergent)"
    )
    return [problem.result(r) for r in roots]


def rho_field(result: FixedPointResult, potentials: Potentials, J: int) -> SpectralField:
    """Spectral representation (J modes) of a root's density, sampled analytically."""
    problem = SelfConsistencyProblem(potentials, result.sigma, max(2 * J, MIN_QUADRATURE_POINTS))
    return to_fourier(problem.rho(result.moments), J=J)
