"""
Dense complex matrix kernels.

Every operator in the toolkit is a 2-D complex numpy array. The helpers here
validate those arrays and provide the pseudo-inverse, Hermitian spectra,
range inclusion and generalized-pencil extremes the frame modules build on.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
import scipy.linalg as sla

from logic import defaults
from logic.errors import (
    DimensionMismatchError,
    NonFiniteError,
    NonSquareError,
    NotHermitianError,
    NotPSDError,
)

logger = logging.getLogger(__name__)

LinearMap = np.ndarray


class Unconstrained:
    """Sentinel for a bound that no finite value constrains (e.g. the lower bound when K = 0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "unconstrained"

    def __str__(self) -> str:
        return "unconstrained"

    def __reduce__(self):
        return (Unconstrained, ())


UNCONSTRAINED = Unconstrained()

Bound = Union[float, Unconstrained]


def is_unconstrained(value) -> bool:
    return value is UNCONSTRAINED


def bound_to_json(value: Bound):
    """Reports carry the sentinel as the string "unconstrained"."""
    return "unconstrained" if is_unconstrained(value) else float(value)


@dataclass(frozen=True)
class Tolerance:
    """Comparison tolerances threaded through every verification call."""
    rel: float = defaults.DEFAULT_REL_TOL
    abs: float = defaults.DEFAULT_ABS_TOL
    rank_rtol: Optional[float] = None  # overrides the default rank cut-off of general matrices

    def __post_init__(self):
        for name in ("rel", "abs"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"tolerance {name} must be a positive finite number, got {value!r}")
        if self.rank_rtol is not None and not (np.isfinite(self.rank_rtol) and self.rank_rtol > 0):
            raise ValueError(f"rank_rtol must be positive, got {self.rank_rtol!r}")

    def scaled(self, scale: float) -> float:
        """Relative tolerance for a quantity of the given magnitude, floored at 1."""
        return self.rel * max(1.0, float(scale))


class PencilExtremes(NamedTuple):
    min_ratio: Bound
    max_ratio: Bound


def as_linear_map(data, name: str = "operator") -> LinearMap:
    """Validate and freeze a dense complex matrix."""
    try:
        arr = np.array(data, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatchError(f"{name}: not a rectangular numeric array ({exc})") from exc
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name}: expected a 2-D array, got {arr.ndim}-D")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatchError(f"{name}: dimensions must be positive, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name}: entries must be finite")
    arr.setflags(write=False)
    return arr


def adjoint(matrix: LinearMap) -> LinearMap:
    return np.conj(np.asarray(matrix)).T


def spectral_norm(matrix: LinearMap) -> float:
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    return float(sla.norm(matrix, 2))


def _rank_rtol(shape: Tuple[int, int], tol: Tolerance) -> float:
    if tol.rank_rtol is not None:
        return tol.rank_rtol
    return max(shape) * np.finfo(float).eps


def pseudo_inverse(matrix: LinearMap, tol: Tolerance = Tolerance()) -> LinearMap:
    """Moore-Penrose inverse with singular values below the rank threshold treated as zero."""
    matrix = np.asarray(matrix, dtype=complex)
    return sla.pinv(matrix, atol=0.0, rtol=_rank_rtol(matrix.shape, tol))


def numerical_rank(matrix: LinearMap, tol: Tolerance = Tolerance()) -> int:
    matrix = np.asarray(matrix, dtype=complex)
    sigma = sla.svdvals(matrix)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > _rank_rtol(matrix.shape, tol) * sigma[0]))


def range_basis(matrix: LinearMap, tol: Tolerance = Tolerance()) -> LinearMap:
    """Orthonormal basis of ran(matrix), as columns."""
    matrix = np.asarray(matrix, dtype=complex)
    if not np.any(matrix):
        return np.zeros((matrix.shape[0], 0), dtype=complex)
    return sla.orth(matrix, rcond=_rank_rtol(matrix.shape, tol))


def null_basis(matrix: LinearMap, tol: Tolerance = Tolerance()) -> LinearMap:
    """Orthonormal basis of N(matrix), as columns."""
    matrix = np.asarray(matrix, dtype=complex)
    if not np.any(matrix):
        return np.eye(matrix.shape[1], dtype=complex)
    return sla.null_space(matrix, rcond=_rank_rtol(matrix.shape, tol))


def hermitian_eigs(matrix: LinearMap, tol: Tolerance = Tolerance()) -> Tuple[np.ndarray, LinearMap]:
    """
    Spectral decomposition of a Hermitian matrix.

    Returns:
        (eigenvalues ascending, unitary whose columns are the eigenvectors)
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {matrix.shape}")
    asymmetry = spectral_norm(matrix - adjoint(matrix))
    limit = tol.scaled(spectral_norm(matrix))
    if asymmetry > limit:
        raise NotHermitianError(asymmetry, limit)
    eigenvalues, vectors = sla.eigh((matrix + adjoint(matrix)) / 2)
    return eigenvalues, vectors


def is_bounded_below(matrix: LinearMap, tol: Tolerance = Tolerance()) -> bool:
    """sigma_min(matrix) > tol.rel * max(1, ||matrix||): the map is injective with closed range."""
    sigma = sla.svdvals(np.asarray(matrix, dtype=complex))
    return bool(sigma[-1] > tol.scaled(sigma[0]))


def range_residual(first: LinearMap, second: LinearMap, tol: Tolerance = Tolerance()) -> float:
    """Norm of the part of ran(first) lying outside ran(second): ||(I - P) first||."""
    first = np.asarray(first, dtype=complex)
    second = np.asarray(second, dtype=complex)
    if first.shape[0] != second.shape[0]:
        raise DimensionMismatchError(
            f"range comparison needs a common codomain, got {first.shape[0]} and {second.shape[0]} rows"
        )
    projected = second @ (pseudo_inverse(second, tol) @ first)
    return spectral_norm(first - projected)


def range_included(first: LinearMap, second: LinearMap, tol: Tolerance = Tolerance()) -> bool:
    """True if ran(first) is contained in ran(second) up to tol.rel * max(1, ||first||)."""
    return range_residual(first, second, tol) <= tol.scaled(spectral_norm(first))


class WhitenedRatio(NamedTuple):
    value: float     # ||Sigma^-1 U_r* top||^2
    outside: float   # ||(I - U_r U_r*) top||


def whitened_ratio(top: LinearMap, bottom: LinearMap, tol: Tolerance = Tolerance()) -> WhitenedRatio:
    """
    inf{mu : top top* <= mu bottom bottom*} computed from the factors.

    With bottom = U_r Sigma V_r* its reduced SVD, the ratio is the squared norm
    of Sigma^-1 U_r* top whenever ran(top) lies in ran(bottom); `outside` is
    the part of top that does not, and the caller decides against it. The
    conditioning is that of bottom, not of bottom bottom*.
    """
    top = np.asarray(top, dtype=complex)
    bottom = np.asarray(bottom, dtype=complex)
    if top.shape[0] != bottom.shape[0]:
        raise DimensionMismatchError(
            f"factors need a common codomain, got {top.shape[0]} and {bottom.shape[0]} rows"
        )
    u, sigma, _ = sla.svd(bottom, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return WhitenedRatio(0.0, spectral_norm(top))
    keep = sigma > _rank_rtol(bottom.shape, tol) * sigma[0]
    basis = u[:, keep]
    coefficients = adjoint(basis) @ top
    outside = spectral_norm(top - basis @ coefficients)
    value = spectral_norm(coefficients / sigma[keep][:, None]) ** 2
    return WhitenedRatio(float(value), outside)


def _psd_range(matrix: LinearMap, tol: Tolerance, name: str) -> Tuple[np.ndarray, LinearMap]:
    """Positive eigenvalues and eigenvectors spanning the range of a PSD matrix."""
    eigenvalues, vectors = hermitian_eigs(matrix, tol)
    top = max(float(eigenvalues[-1]), 0.0)
    limit = tol.rel * top
    if eigenvalues[0] < -max(limit, tol.abs):
        raise NotPSDError(float(eigenvalues[0]), max(limit, tol.abs))
    keep = eigenvalues > max(defaults.GRAM_RANK_RTOL * top, tol.abs)
    logger.debug("%s: keeping %d of %d eigen-directions", name, int(keep.sum()), eigenvalues.size)
    return eigenvalues[keep], vectors[:, keep]


def _basis_leak(values: np.ndarray, norm: float, size: int) -> float:
    """How far a computed eigenbasis of a PSD matrix can stray from its exact range, relative."""
    return defaults.EIGENBASIS_LEAK_FACTOR * size * np.finfo(float).eps * norm / float(values[0])


def _largest_reduced_ratio(numerator: LinearMap, values: np.ndarray, basis: LinearMap) -> float:
    """Largest mu with basis* numerator basis <= mu diag(values)."""
    reduced = adjoint(basis) @ numerator @ basis
    reduced = (reduced + adjoint(reduced)) / 2
    mus = sla.eigh(reduced, np.diag(values).astype(complex), eigvals_only=True)
    return max(float(mus[-1]), 0.0)


def pencil_extremes(numerator: LinearMap, denominator: LinearMap,
                    tol: Tolerance = Tolerance()) -> PencilExtremes:
    """
    Extremes of the ratio <P_num f, f> / <P_den f, f> of two PSD matrices.

    min_ratio is sup{lambda : lambda P_den <= P_num}; it is 0 when ran(P_den) is
    not contained in ran(P_num). max_ratio is inf{mu : P_num <= mu P_den}; it is
    UNCONSTRAINED when ran(P_num) is not contained in ran(P_den). Both are
    UNCONSTRAINED when P_den = 0.

    Args:
        numerator: Hermitian PSD matrix P_num
        denominator: Hermitian PSD matrix P_den of the same size
        tol: comparison tolerances

    Returns:
        PencilExtremes(min_ratio, max_ratio)
    """
    numerator = np.asarray(numerator, dtype=complex)
    denominator = np.asarray(denominator, dtype=complex)
    if numerator.shape != denominator.shape:
        raise DimensionMismatchError(f"pencil operands differ in shape: {numerator.shape} vs {denominator.shape}")

    den_values, den_basis = _psd_range(denominator, tol, "denominator")
    num_values, num_basis = _psd_range(numerator, tol, "numerator")

    if den_values.size == 0:
        return PencilExtremes(UNCONSTRAINED, UNCONSTRAINED)

    num_norm = spectral_norm(numerator)
    den_norm = spectral_norm(denominator)
    size = numerator.shape[0]

    # inf{mu : P_num <= mu P_den}
    outside_den = numerator - den_basis @ (adjoint(den_basis) @ numerator)
    den_slack = max(tol.rel, _basis_leak(den_values, den_norm, size)) * max(1.0, num_norm)
    if spectral_norm(outside_den) > den_slack:
        max_ratio: Bound = UNCONSTRAINED
    elif num_values.size == 0:
        max_ratio = 0.0
    else:
        max_ratio = _largest_reduced_ratio(numerator, den_values, den_basis)

    # sup{lambda : lambda P_den <= P_num} = 1 / inf{nu : P_den <= nu P_num}
    outside_num = denominator - num_basis @ (adjoint(num_basis) @ denominator)
    if num_values.size == 0:
        min_ratio: Bound = 0.0
    elif spectral_norm(outside_num) > max(tol.rel, _basis_leak(num_values, num_norm, size)) * max(1.0, den_norm):
        min_ratio = 0.0
    else:
        nu = _largest_reduced_ratio(denominator, num_values, num_basis)
        min_ratio = 1.0 / nu if nu > 0 else UNCONSTRAINED

    return PencilExtremes(min_ratio, max_ratio)


def bound_dominates(empirical: Bound, formula: Bound, tol: Tolerance = Tolerance()) -> bool:
    """True if a predicted lower bound does not exceed the computed optimal one."""
    if is_unconstrained(empirical):
        return True
    if is_unconstrained(formula):
        return False
    return float(formula) <= float(empirical) + tol.scaled(abs(float(formula)))


def random_unit_vectors(rng: np.random.Generator, dim: int, count: int) -> np.ndarray:
    """count complex Gaussian vectors normalized to the unit sphere of C^dim, as rows."""
    samples = (rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))) / np.sqrt(2)
    return samples / np.linalg.norm(samples, axis=1, keepdims=True)
