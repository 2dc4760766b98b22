"""
Truncated Fourier representation of real periodic fields on [0, 2*pi).

A field is ``u(x) = sum_k u_k e_k(x)`` with the normalized basis
``e_k(x) = exp(i k x) / sqrt(2*pi)``, ``k = -J/2+1 .. J/2``.

Conversion factors between coefficients and uniform-grid samples live here
and nowhere else:

* samples -> coefficients: ``u_k = sqrt(2*pi) / M * FFT(samples)[k]``
  (trapezoid rule for ``<u, e_k>``, spectrally accurate for periodic data)
* coefficients -> samples: ``u(x_j) = M / sqrt(2*pi) * IFFT(u_hat)[j]``

Only the nonnegative half-spectrum ``k = 0 .. J/2`` is stored; negative
modes follow from ``u_{-k} = conj(u_k)``, so real-valuedness holds exactly.
The Nyquist coefficient ``k = J/2`` has no partner inside the band and is
pinned to zero.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

import numpy as np
from scipy import fft as sp_fft

from ..utils.errors import ResolutionError, ShapeError


logger = logging.getLogger(__name__)

SQRT_2PI = np.sqrt(2.0 * np.pi)

Scalar = Union[int, float, complex]


def grid(M: int) -> np.ndarray:
    """Uniform grid ``x_j = 2*pi*j/M``, ``j = 0 .. M-1``."""
    return 2.0 * np.pi * np.arange(M) / M


def trapezoid(samples: np.ndarray) -> float:
    """Trapezoid rule for the integral over one period of uniform samples."""
    samples = np.asarray(samples)
    return float(2.0 * np.pi / samples.shape[-1] * np.sum(samples, axis=-1))


def _check_even(J: int, name: str = "J") -> None:
    if J < 2 or J % 2:
        raise ShapeError(f"{name} must be an even integer >= 2, got {J}")


@dataclass(frozen=True, eq=False)
class SpectralField:
    """
    Real periodic field stored as its nonnegative half-spectrum.

    Attributes:
        half: Complex coefficients ``u_k`` for ``k = 0 .. J/2`` (length J/2 + 1)
    """

    half: np.ndarray

    def __post_init__(self) -> None:
        half = np.array(self.half, dtype=np.complex128, copy=True)
        if half.ndim != 1 or half.size < 2:
            raise ShapeError(f"half-spectrum must be 1-D with >= 2 entries, got shape {half.shape}")
        half[0] = half[0].real
        half[-1] = 0.0
        half.setflags(write=False)
        object.__setattr__(self, "half", half)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zeros(cls, J: int) -> "SpectralField":
        """Zero field with J resolved modes."""
        _check_even(J)
        return cls(np.zeros(J // 2 + 1, dtype=np.complex128))

    @classmethod
    def from_modes(cls, J: int, modes: Mapping[int, Scalar]) -> "SpectralField":
        """
        Build a field from a few coefficients.

        Args:
            J: Resolved mode count
            modes: ``{k: u_k}`` for ``k >= 0``; negative keys are conjugated
                onto their positive partner

        Returns:
            SpectralField
        """
        _check_even(J)
        half = np.zeros(J // 2 + 1, dtype=np.complex128)
        for k, value in modes.items():
            if abs(k) >= J // 2:
                raise ResolutionError(f"mode {k} not resolved with J={J}")
            if k >= 0:
                half[k] = value
            else:
                half[-k] = np.conj(value)
        return cls(half)

    @classmethod
    def from_function(
        cls, func: Callable[[np.ndarray], np.ndarray], J: int, M: Optional[int] = None
    ) -> "SpectralField":
        """Sample ``func`` on an M-point grid (default 2J) and project to J modes."""
        _check_even(J)
        M = 2 * J if M is None else M
        return to_fourier(np.asarray(func(grid(M)), dtype=float), J=J)

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------

    @property
    def J(self) -> int:
        """Resolved mode count."""
        return 2 * (self.half.size - 1)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Wavenumbers ``k = 0 .. J/2`` matching :attr:`half`."""
        return np.arange(self.half.size)

    @property
    def coeffs(self) -> np.ndarray:
        """Full coefficient vector ordered ``k = -J/2+1 .. J/2``."""
        negative = np.conj(self.half[1:-1][::-1])
        return np.concatenate([negative, self.half])

    def coefficient(self, k: int) -> complex:
        """Coefficient ``u_k`` for any integer k (zero outside the band)."""
        if abs(k) >= self.half.size:
            return 0j
        return complex(self.half[k]) if k >= 0 else complex(np.conj(self.half[-k]))

    def check_symmetry(self, tol: float = 1e-12) -> bool:
        """Verify the real-field invariants of the stored spectrum."""
        scale = max(1.0, float(np.max(np.abs(self.half))))
        return abs(self.half[0].imag) <= tol * scale and self.half[-1] == 0

    # ------------------------------------------------------------------
    # Linear algebra
    # ------------------------------------------------------------------

    def _same_J(self, other: "SpectralField") -> None:
        if other.J != self.J:
            raise ShapeError(f"mode counts differ: {self.J} vs {other.J}")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._same_J(other)
        return SpectralField(self.half + other.half)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._same_J(other)
        return SpectralField(self.half - other.half)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.half * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(-self.half)

    def allclose(self, other: "SpectralField", atol: float = 1e-12) -> bool:
        """Coefficient-wise comparison; fields of different J are padded."""
        J = max(self.J, other.J)
        a, b = resize(self, J).half, resize(other, J).half
        return bool(np.allclose(a, b, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        return f"SpectralField(J={self.J}, norm={l2_norm(self):.6g})"


# ----------------------------------------------------------------------
# Half-spectrum <-> grid kernels (also used directly by the integrator)
# ----------------------------------------------------------------------

def half_to_grid(half: np.ndarray, M: int) -> np.ndarray:
    """Evaluate a half-spectrum on an M-point grid (M >= 2*(len(half)-1))."""
    padded = np.zeros(M // 2 + 1, dtype=np.complex128)
    n = min(half.size, padded.size)
    padded[:n] = half[:n]
    return sp_fft.irfft(padded, n=M) * (M / SQRT_2PI)


def grid_to_half(samples: np.ndarray, J: int) -> np.ndarray:
    """Half-spectrum of J modes from real samples (Nyquist and beyond dropped)."""
    M = samples.shape[-1]
    full = sp_fft.rfft(samples) * (SQRT_2PI / M)
    half = np.zeros(J // 2 + 1, dtype=np.complex128)
    n = min(J // 2, full.size)
    half[:n] = full[:n]
    half[0] = half[0].real
    return half


# ----------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------

def to_real(field: SpectralField, M: int) -> np.ndarray:
    """
    Evaluate a field on the uniform grid ``x_j = 2*pi*j/M``.

    Args:
        field: Field to evaluate
        M: Number of grid points, at least J

    Returns:
        Real array of M samples

    Raises:
        ResolutionError: If M < J
    """
    if M < field.J:
        raise ResolutionError(f"grid size M={M} is smaller than J={field.J}")
    if not field.check_symmetry():
        raise ShapeError("field violates conjugate symmetry")
    return half_to_grid(field.half, M)


def to_fourier(samples: np.ndarray, J: Optional[int] = None) -> SpectralField:
    """
    Transform real samples on a uniform grid to normalized Fourier coefficients.

    Args:
        samples: Real samples, even length >= 2
        J: Resolved mode count of the result (default: the sample count)

    Returns:
        SpectralField

    Raises:
        ShapeError: If the sample count is odd or < 2
    """
    samples = np.asarray(samples, dtype=float)
    M = samples.shape[-1]
    if samples.ndim != 1 or M < 2 or M % 2:
        raise ShapeError(f"sample count must be even and >= 2, got {M}")
    J = M if J is None else J
    _check_even(J)
    return SpectralField(grid_to_half(samples, J))


def derivative(field: SpectralField, order: int = 1) -> SpectralField:
    """Spectral derivative: multiplies ``u_k`` by ``(ik)**order``."""
    return SpectralField(field.half * (1j * field.wavenumbers) ** order)


def project(field: SpectralField, J_target: int) -> SpectralField:
    """
    Zero every mode outside the ``J_target`` band, keeping the resolution J.

    Args:
        field: Field to project
        J_target: Even band size, at most J

    Returns:
        Projected field with the same J
    """
    _check_even(J_target, "J_target")
    if J_target > field.J:
        raise ResolutionError(f"J_target={J_target} exceeds J={field.J}")
    half = field.half.copy()
    half[J_target // 2:] = 0.0
    return SpectralField(half)


def resize(field: SpectralField, J_new: int) -> SpectralField:
    """Truncate or zero-pad a field to ``J_new`` resolved modes."""
    _check_even(J_new, "J_new")
    half = np.zeros(J_new // 2 + 1, dtype=np.complex128)
    n = min(J_new // 2, field.J // 2)
    half[:n] = field.half[:n]
    return SpectralField(half)


def dealiased_product(a: SpectralField, b: SpectralField) -> SpectralField:
    """
    Pointwise product evaluated on the 2J grid and projected back to J modes.

    For inputs with ``|k| < J/2`` the 2J grid represents every product mode
    exactly, so the result equals the truncated coefficient convolution.
    """
    if a.J != b.J:
        raise ShapeError(f"mode counts differ: {a.J} vs {b.J}")
    M = 2 * a.J
    return SpectralField(grid_to_half(half_to_grid(a.half, M) * half_to_grid(b.half, M), a.J))


def l2_norm_squared(field: SpectralField) -> float:
    """Squared L2 norm via Parseval: ``sum_k |u_k|^2``."""
    half = field.half
    return float(abs(half[0]) ** 2 + 2.0 * np.sum(np.abs(half[1:]) ** 2))


def l2_norm(field: SpectralField) -> float:
    """L2 norm via Parseval."""
    return float(np.sqrt(l2_norm_squared(field)))


def l2_distance_squared(a: SpectralField, b: SpectralField) -> float:
    """Squared L2 distance, zero-padding the coarser field."""
    J = max(a.J, b.J)
    return l2_norm_squared(resize(a, J) - resize(b, J))
