"""Problem definition: potentials, diffusion and noise covariance at a given resolution."""

import logging
from dataclasses import dataclass

import numpy as np

from ..spectral.field import SQRT_2PI, SpectralField, grid, to_fourier
from ..utils.errors import ConfigurationError, ShapeError
from .potentials import Potentials, get_potentials


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NoiseSpec:
    """
    Diagonal noise covariance in the Fourier basis.

    Attributes:
        lambdas: Amplitudes ``lambda_k`` for ``k = 0 .. J/2``; ``lambda_0 = 0``
            and ``lambda_k = gamma / k**s``. Negative modes share the value of
            their positive partner.
    """

    lambdas: np.ndarray

    @classmethod
    def build(cls, gamma: float, s: float, J: int) -> "NoiseSpec":
        k = np.arange(J // 2 + 1, dtype=float)
        lambdas = np.zeros_like(k)
        lambdas[1:] = gamma / k[1:] ** s
        lambdas.setflags(write=False)
        return cls(lambdas)

    def amplitude(self, k: int) -> float:
        """``lambda_k`` for any integer k inside the band."""
        return float(self.lambdas[abs(k)])


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """
    Immutable model at resolution J.

    Attributes:
        potentials: V, F and their derivatives
        sigma: Diffusion coefficient
        gamma: Noise amplitude
        s: Noise decay exponent
        J: Resolved mode count
        Vprime_grid: V' sampled on the 2J de-aliasing grid
        Fprime_coeffs: Fourier coefficients of F' (J modes)
        noise: Per-mode noise amplitudes
    """

    potentials: Potentials
    sigma: float
    gamma: float
    s: float
    J: int
    Vprime_grid: np.ndarray
    Fprime_coeffs: SpectralField
    noise: NoiseSpec

    @classmethod
    def build(cls, potentials: Potentials, sigma: float, gamma: float, s: float, J: int) -> "ModelSpec":
        """
        Validate parameters and sample the potentials at resolution J.

        Raises:
            ConfigurationError: On sigma <= 0, gamma < 0, s <= 1/2 or odd J
        """
        if not sigma > 0:
            raise ConfigurationError(f"diffusion must be positive, got {sigma}", "model.sigma")
        if gamma < 0:
            raise ConfigurationError(f"noise amplitude must be >= 0, got {gamma}", "model.gamma")
        if not s > 0.5:
            raise ConfigurationError(
                f"noise decay exponent must exceed 1/2 for a well-posed SPDE, got {s}", "model.s"
            )
        if J < 4 or J % 2:
            raise ConfigurationError(f"mode count must be an even integer >= 4, got {J}", "simulation.J")
        if s >= 1:
            logger.warning(f"s={s} >= 1: the strong Feller property is not guaranteed for this noise")

        vgrid = np.asarray(potentials.Vprime(grid(2 * J)), dtype=float)
        vgrid.setflags(write=False)
        fprime = to_fourier(np.asarray(potentials.Fprime(grid(2 * J)), dtype=float), J=J)
        return cls(
            potentials=potentials,
            sigma=float(sigma),
            gamma=float(gamma),
            s=float(s),
            J=int(J),
            Vprime_grid=vgrid,
            Fprime_coeffs=fprime,
            noise=NoiseSpec.build(gamma, s, J),
        )

    def at_resolution(self, J: int) -> "ModelSpec":
        """Same model resampled at another mode count."""
        if J == self.J:
            return self
        return ModelSpec.build(self.potentials, self.sigma, self.gamma, self.s, J)

    def with_params(self, **changes: float) -> "ModelSpec":
        """Same potentials with some of sigma, gamma, s, J replaced."""
        params = dict(sigma=self.sigma, gamma=self.gamma, s=self.s, J=self.J)
        params.update(changes)
        return ModelSpec.build(self.potentials, **params)

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.arange(self.J // 2 + 1)

    def __repr__(self) -> str:
        return (
            f"ModelSpec({self.potentials.name}, sigma={self.sigma}, gamma={self.gamma}, "
            f"s={self.s}, J={self.J})"
        )


def preset(name: str, sigma: float, gamma: float, s: float, J: int) -> ModelSpec:
    """
    Build one of the named models (``double_well`` or ``four_well``).

    Both use ``F(x) = -cos x``; V is ``cos 2x`` or ``cos 4x``.
    """
    return ModelSpec.build(get_potentials(name), sigma, gamma, s, J)


def convolve_Fprime(spec: ModelSpec, u: SpectralField) -> SpectralField:
    """
    Periodic convolution ``(F' * u)(x) = int F'(x - y) u(y) dy``.

    Under the normalized basis the convolution theorem reads
    ``(F' * u)_k = sqrt(2*pi) * F'_k * u_k``.
    """
    if u.J != spec.J:
        raise ShapeError(f"field has J={u.J}, model has J={spec.J}")
    return SpectralField(SQRT_2PI * spec.Fprime_coeffs.half * u.half)
