"""
Douglas factorization: for L1 : E -> H and L2 : G -> H, ran(L1) is contained
in ran(L2) exactly when L1 L1* <= lambda^2 L2 L2* for some lambda, exactly
when L1 = L2 U for a bounded U. The reduced solution U = L2^+ L1 has the
least norm, ||U||^2 = inf{lambda : L1 L1* <= lambda L2 L2*}, N(U) = N(L1)
and ran(U) inside the closure of ran(L2*).
"""

import logging

import numpy as np

from logic.errors import DimensionMismatchError, RangeNotIncludedError
from logic.frames.models import DouglasEquivalence, DouglasSolution
from logic.linalg_core import (
    UNCONSTRAINED,
    LinearMap,
    Tolerance,
    adjoint,
    as_linear_map,
    is_unconstrained,
    numerical_rank,
    null_basis,
    pseudo_inverse,
    range_residual,
    spectral_norm,
    whitened_ratio,
)

logger = logging.getLogger(__name__)


def _operands(l1, l2):
    l1 = as_linear_map(l1, "L1")
    l2 = as_linear_map(l2, "L2")
    if l1.shape[0] != l2.shape[0]:
        raise DimensionMismatchError(f"L1 and L2 need a common codomain, got {l1.shape} and {l2.shape}")
    return l1, l2


def pencil_norm_sq(l1: LinearMap, l2: LinearMap, tol: Tolerance = Tolerance()) -> float:
    """inf{lambda : L1 L1* <= lambda L2 L2*}; raises when ran(L1) is not contained in ran(L2)."""
    l1, l2 = _operands(l1, l2)
    ratio = whitened_ratio(l1, l2, tol)
    limit = tol.scaled(spectral_norm(l1))
    if ratio.outside > limit:
        raise RangeNotIncludedError(ratio.outside, limit)
    return ratio.value


def douglas_solve(l1: LinearMap, l2: LinearMap, tol: Tolerance = Tolerance()) -> DouglasSolution:
    """
    Reduced solution of L1 = L2 U.

    Raises:
        RangeNotIncludedError: when ran(L1) is not contained in ran(L2)
    """
    l1, l2 = _operands(l1, l2)
    l1_norm = spectral_norm(l1)
    limit = tol.scaled(l1_norm)
    outside = range_residual(l1, l2, tol)
    if outside > limit:
        raise RangeNotIncludedError(outside, limit)

    u = pseudo_inverse(l2, tol) @ l1
    u_norm = spectral_norm(u)
    residual = spectral_norm(l1 - l2 @ u)

    # N(L1) within N(U) holds by construction; equal ranks give equality
    null_l1 = null_basis(l1, tol)
    null_match = (
        numerical_rank(l1, tol) == numerical_rank(u, tol)
        and spectral_norm(u @ null_l1) <= tol.scaled(u_norm)
    )
    adjoint_residual = range_residual(u, adjoint(l2), tol)
    range_ok = adjoint_residual <= tol.scaled(u_norm)

    solution = DouglasSolution(
        solution=u,
        norm_sq=u_norm ** 2,
        pencil_norm_sq=whitened_ratio(l1, l2, tol).value,
        residual=residual,
        null_match=bool(null_match),
        range_ok=bool(range_ok),
        range_residual=adjoint_residual,
    )
    logger.debug("douglas: ||U||^2=%.6g pencil=%.6g residual=%.2e",
                 solution.norm_sq, solution.pencil_norm_sq, residual)
    return solution


def equivalence_check(l1: LinearMap, l2: LinearMap, tol: Tolerance = Tolerance()) -> DouglasEquivalence:
    """Test range inclusion, majorization and factorization independently of each other."""
    l1, l2 = _operands(l1, l2)
    l1_norm = spectral_norm(l1)
    limit = tol.scaled(l1_norm)

    inclusion_residual = range_residual(l1, l2, tol)

    # Majorization constant from the SVD of L2, not from the pseudo-inverse used for inclusion
    majorization = whitened_ratio(l1, l2, tol)
    constant = UNCONSTRAINED if majorization.outside > limit else majorization.value

    # Least-squares factor, solved without the pseudo-inverse used for inclusion
    u, *_ = np.linalg.lstsq(l2, l1, rcond=None)
    factor_residual = spectral_norm(l1 - l2 @ u)

    return DouglasEquivalence(
        range_included=inclusion_residual <= limit,
        majorized=not is_unconstrained(constant),
        factorizable=factor_residual <= limit,
        residuals={
            "range_inclusion": inclusion_residual,
            "majorization_outside": majorization.outside,
            "factorization": factor_residual,
        },
        majorization_constant=constant,
    )


def alternative_solution(l1: LinearMap, l2: LinearMap, w: LinearMap, tol: Tolerance = Tolerance()) -> LinearMap:
    """Another solution U + (I - L2^+ L2) W of L1 = L2 U, never smaller in norm than the reduced one."""
    l1, l2 = _operands(l1, l2)
    w = as_linear_map(w, "W")
    if w.shape != (l2.shape[1], l1.shape[1]):
        raise DimensionMismatchError(f"W must be {(l2.shape[1], l1.shape[1])}, got {w.shape}")
    pinv = pseudo_inverse(l2, tol)
    return pinv @ l1 + (np.eye(l2.shape[1]) - pinv @ l2) @ w
