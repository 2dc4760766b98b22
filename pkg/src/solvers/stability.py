"""
Linear stability of stationary densities.

The McKean-Vlasov operator linearized about a stationary density rho acts on
mean-zero perturbations eta as

    L eta = sigma eta'' + d/dx[(V' + F' * rho) eta + rho (F' * eta)]

and is discretized by Fourier collocation on J equispaced points.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..models.spec import ModelSpec
from ..spectral.field import grid
from ..utils.errors import ConfigurationError, EigensolverError, ShapeError
from .stationary import FixedPointResult, SelfConsistencyProblem


logger = logging.getLogger(__name__)

STABILITY_TOL = 1e-8
ZERO_TOL = 1e-8
MEAN_TOL = 1e-6


def _check_collocation(J: int) -> None:
    if J < 4 or J % 2:
        raise ShapeError(f"collocation size must be an even integer >= 4, got {J}")


def differentiation_matrix(J: int) -> np.ndarray:
    """Periodic spectral first-derivative matrix on J equispaced points."""
    _check_collocation(J)
    h = 2.0 * np.pi / J
    m = np.arange(1, J)
    column = np.zeros(J)
    column[1:] = 0.5 * (-1.0) ** m / np.tan(m * h / 2.0)
    return linalg.toeplitz(column, -column)


def second_differentiation_matrix(J: int) -> np.ndarray:
    """Periodic spectral second-derivative matrix; the Nyquist mode maps to ``-(J/2)^2``."""
    _check_collocation(J)
    h = 2.0 * np.pi / J
    m = np.arange(1, J)
    column = np.empty(J)
    column[0] = -np.pi ** 2 / (3.0 * h ** 2) - 1.0 / 6.0
    column[1:] = -0.5 * (-1.0) ** m / np.sin(m * h / 2.0) ** 2
    return linalg.toeplitz(column)


def convolution_matrix(Fprime, J: int) -> np.ndarray:
    """Trapezoid quadrature of ``eta -> F' * eta``: ``K_ij = F'(x_i - x_j) 2 pi / J``."""
    x = grid(J)
    return np.asarray(Fprime(x[:, None] - x[None, :]), dtype=float) * (2.0 * np.pi / J)


def collocated_density(root: FixedPointResult, spec: ModelSpec, J: int) -> np.ndarray:
    """The root's density evaluated analytically on the J collocation points."""
    if abs(root.sigma - spec.sigma) > 1e-12:
        raise ConfigurationError(
            f"root was computed for sigma={root.sigma}, model has sigma={spec.sigma}", "model.sigma"
        )
    return SelfConsistencyProblem(spec.potentials, spec.sigma, J).rho(root.moments)


def build_linearized(rho: FixedPointResult, spec: ModelSpec, J: int) -> np.ndarray:
    """
    Collocation matrix of the linearized operator around ``rho``.

    ``L = sigma D2 + D (diag(V' + K rho) + diag(rho) K)``

    Args:
        rho: Stationary density (moments are re-evaluated on the grid)
        spec: Model supplying sigma and the potentials
        J: Even number of collocation points

    Returns:
        Real J x J matrix

    Raises:
        ShapeError: If J is odd
    """
    _check_collocation(J)
    x = grid(J)
    density = collocated_density(rho, spec, J)
    D = differentiation_matrix(J)
    K = convolution_matrix(spec.potentials.Fprime, J)
    advection = np.asarray(spec.potentials.Vprime(x), dtype=float) + K @ density
    return spec.sigma * second_differentiation_matrix(J) + D @ (np.diag(advection) + density[:, None] * K)


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """
    Filtered spectrum of a linearized operator.

    Attributes:
        eigenvalues: Sorted by descending real part, mean-violating zero modes removed
        leading: Eigenvalue with the largest real part
        label: ``"unstable"`` iff ``Re(leading) > 1e-8``
    """

    eigenvalues: np.ndarray
    leading: complex
    label: str

    @classmethod
    def from_eigenvalues(cls, eigenvalues: np.ndarray) -> "SpectrumResult":
        order = np.lexsort((-eigenvalues.imag, -eigenvalues.real))
        ordered = eigenvalues[order]
        leading = complex(ordered[0])
        label = "unstable" if leading.real > STABILITY_TOL else "stable"
        return cls(ordered, leading, label)


def _eig(L: np.ndarray, vectors: bool) -> Tuple[np.ndarray, np.ndarray]:
    try:
        if vectors:
            return linalg.eig(L)
        return linalg.eigvals(L), None
    except (linalg.LinAlgError, ValueError) as e:
        raise EigensolverError(f"eigendecomposition failed: {e}", float(np.linalg.cond(L))) from e


def spectrum(L: np.ndarray, method: str = "filter") -> SpectrumResult:
    """
    Dense nonsymmetric spectrum of L restricted to mean-zero perturbations.

    Args:
        L: Square real matrix
        method: ``"filter"`` drops zero eigenvalues whose eigenvectors carry
            mass; ``"project"`` restricts L to the mean-zero subspace first

    Raises:
        ShapeError: If L is not square
        EigensolverError: If the eigensolver fails or returns non-finite values
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {L.shape}")
    n = L.shape[0]

    if method == "project":
        Q = linalg.null_space(np.ones((1, n)))
        eigenvalues, _ = _eig(Q.T @ L @ Q, vectors=False)
    elif method == "filter":
        eigenvalues, vectors = _eig(L, vectors=True)
        norms = np.linalg.norm(vectors, axis=0)
        mean_component = np.abs(vectors.sum(axis=0)) / (np.sqrt(n) * norms)
        massive_zero = (np.abs(eigenvalues) <= ZERO_TOL) & (mean_component > MEAN_TOL)
        logger.debug(f"Filtered {int(massive_zero.sum())} zero mode(s)")
        eigenvalues = eigenvalues[~massive_zero]
    else:
        raise ConfigurationError(f"unknown spectrum method {method!r}", "method")

    if not eigenvalues.size or not np.all(np.isfinite(eigenvalues)):
        raise EigensolverError("eigensolver returned no finite eigenvalues", float(np.linalg.cond(L)))
    return SpectrumResult.from_eigenvalues(np.asarray(eigenvalues, dtype=np.complex128))


def classify(
    roots: Sequence[FixedPointResult], spec: ModelSpec, J: int = 64, method: str = "filter"
) -> Tuple[List[FixedPointResult], List[SpectrumResult]]:
    """
    Attach stability labels to stationary densities.

    Returns:
        ``(labelled_roots, spectra)`` in the order of ``roots``
    """
    labelled, spectra = [], []
    for root in roots:
        result = spectrum(build_linearized(root, spec, J), method=method)
        logger.info(
            f"Root ({root.m1:+.6f}, {root.m2:+.6f}): leading eigenvalue "
            f"{result.leading.real:+.3e}{result.leading.imag:+.3e}j -> {result.label}"
        )
        labelled.append(root.with_stability(result.label))
        spectra.append(result)
    return labelled, spectra
