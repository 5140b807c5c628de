"""
K-g-duals of a c-K-g-frame.

Gamma is a K-dual of Lambda when sum_i mu_i Lambda_i* Gamma_i = K. In the
flattened picture the duals are the solutions X of M* X = K, unflattened
block-wise; the canonical one is the Douglas reduced solution X = (M*)^+ K,
whose norm squared is 1 / A_opt, the smallest synthesis norm of any dual.
"""

import logging
from typing import Tuple

import numpy as np

from logic.block_space import require_same_space
from logic.errors import (
    DimensionMismatchError,
    HypothesisFailedError,
    NotADualError,
    NotKGFrameError,
    RangeNotIncludedError,
    UnconstrainedError,
    ZeroOperatorError,
)
from logic.frames.core import (
    analysis_matrix,
    cross_operator,
    frame_bounds,
    frame_operator,
    optimal_upper_bound,
    synthesis_matrix,
)
from logic.frames.douglas import douglas_solve
from logic.frames.models import (
    DualCertificate,
    FrameCertificate,
    OperatorFamily,
    RestrictedDualResult,
    TheoremCertificate,
)
from logic.linalg_core import (
    UNCONSTRAINED,
    LinearMap,
    Tolerance,
    adjoint,
    as_linear_map,
    bound_dominates,
    is_unconstrained,
    pseudo_inverse,
    range_basis,
    range_included,
    spectral_norm,
)

logger = logging.getLogger(__name__)


def _check_pair(first: OperatorFamily, second: OperatorFamily) -> None:
    require_same_space(first.space, second.space, "families")
    if first.domain_dim != second.domain_dim:
        raise DimensionMismatchError(f"families act on C^{first.domain_dim} and C^{second.domain_dim}")


def _square(k, n: int) -> LinearMap:
    k = as_linear_map(k, "K")
    if k.shape != (n, n):
        raise DimensionMismatchError(f"K must be {n}x{n}, got {k.shape}")
    return k


def _floor(lower) -> float:
    if is_unconstrained(lower) or lower <= 0:
        return 0.0
    return 1.0 / float(lower)


def verify_dual(family: OperatorFamily, dual: OperatorFamily, k: LinearMap,
                tol: Tolerance = Tolerance()) -> DualCertificate:
    """Check sum mu_i Lambda_i* Gamma_i = K and compare ||T_Gamma||^2 against 1 / A_opt."""
    _check_pair(family, dual)
    k = _square(k, family.domain_dim)
    residual = spectral_norm(k - cross_operator(family, dual))
    synthesis_norm_sq = spectral_norm(synthesis_matrix(dual)) ** 2
    lower = frame_bounds(family, k, tol).lower_bound
    floor = _floor(lower)
    is_valid = (
        residual <= tol.scaled(spectral_norm(k))
        and synthesis_norm_sq >= floor - tol.scaled(floor)
    )
    return DualCertificate(
        duality_residual=residual,
        gamma_bessel_bound=optimal_upper_bound(dual),
        synthesis_norm_sq=synthesis_norm_sq,
        floor=floor,
        optimal_lower_bound=lower,
        is_valid=bool(is_valid),
    )


def dual_from_phi(family: OperatorFamily, phi: LinearMap) -> OperatorFamily:
    """Gamma with T_Gamma = Phi, for Phi : L2 -> C^n given as an n x (sum d_i) matrix."""
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (family.domain_dim, family.space.total_dim):
        raise DimensionMismatchError(
            f"Phi must be {(family.domain_dim, family.space.total_dim)}, got {phi.shape}"
        )
    return OperatorFamily.from_flat(family.space, adjoint(phi))


def phi_from_dual(dual: OperatorFamily) -> LinearMap:
    """The synthesis operator of a dual; Gamma is a K-dual of Lambda iff K* = Phi T_Lambda*."""
    return synthesis_matrix(dual)


def canonical_dual(family: OperatorFamily, k: LinearMap,
                   tol: Tolerance = Tolerance()) -> Tuple[OperatorFamily, DualCertificate]:
    """
    The K-dual of least synthesis norm.

    Raises:
        NotKGFrameError: when ran(K) is not contained in ran(S)
    """
    k = _square(k, family.domain_dim)
    try:
        solution = douglas_solve(k, synthesis_matrix(family), tol)
    except RangeNotIncludedError as exc:
        raise NotKGFrameError(f"family is not a c-K-g-frame: {exc}") from exc
    dual = OperatorFamily.from_flat(family.space, solution.solution)
    certificate = verify_dual(family, dual, k, tol)
    logger.debug("canonical dual: ||T||^2=%.6g floor=%.6g", certificate.synthesis_norm_sq, certificate.floor)
    return dual, certificate


def dual_norm_floor(family: OperatorFamily, k: LinearMap, tol: Tolerance = Tolerance()) -> float:
    """Smallest ||T_Gamma||^2 over all K-duals, which is 1 / A_opt."""
    k = _square(k, family.domain_dim)
    lower = frame_bounds(family, k, tol).lower_bound
    if is_unconstrained(lower):
        raise UnconstrainedError("K = 0: the zero family is a dual and the floor is 0", value=0.0)
    if lower <= tol.abs:
        raise NotKGFrameError("family is not a c-K-g-frame, no dual exists")
    return 1.0 / float(lower)


def perturbed_dual(family: OperatorFamily, dual: OperatorFamily, w: LinearMap,
                   tol: Tolerance = Tolerance()) -> OperatorFamily:
    """Shift a dual by (I - M M^+) W, which the synthesis of Lambda annihilates."""
    _check_pair(family, dual)
    m = analysis_matrix(family)
    w = np.asarray(w, dtype=complex)
    if w.shape != m.shape:
        raise DimensionMismatchError(f"W must be {m.shape}, got {w.shape}")
    flat = analysis_matrix(dual) + (w - m @ (pseudo_inverse(m, tol) @ w))
    return OperatorFamily.from_flat(family.space, flat)


def subspace_dual_bound(family: OperatorFamily, dual: OperatorFamily, k: LinearMap,
                        tol: Tolerance = Tolerance()) -> TheoremCertificate:
    """
    Lower bound 1 / (B_Gamma ||K||^2) for a family that has a dual on ran(K).

    Hypotheses (checked, in order):
        a: S maps ran(K) into itself
        b: Q* (sum mu_i Lambda_i* Gamma_i) Q = I on ran(K), Q an orthonormal basis

    Raises:
        HypothesisFailedError: naming the failed item
    """
    _check_pair(family, dual)
    k = _square(k, family.domain_dim)
    q = range_basis(k, tol)
    s = frame_operator(family)

    if q.shape[1] and not range_included(s @ q, q, tol):
        raise HypothesisFailedError("a", "the frame operator does not leave ran(K) invariant")
    reproduction = adjoint(q) @ cross_operator(family, dual) @ q
    reproduction_residual = spectral_norm(reproduction - np.eye(q.shape[1]))
    if q.shape[1] and reproduction_residual > tol.scaled(1.0):
        raise HypothesisFailedError("b", f"dual does not reproduce ran(K): residual {reproduction_residual:.3e}")

    gamma_bound = optimal_upper_bound(dual)
    k_norm = spectral_norm(k)
    if k_norm <= tol.abs:
        formula = UNCONSTRAINED
    elif gamma_bound <= 0:
        raise HypothesisFailedError("b", "the dual family is zero")
    else:
        formula = 1.0 / (gamma_bound * k_norm ** 2)

    certificate = frame_bounds(family, k, tol)
    return TheoremCertificate(
        family=family,
        certificate=certificate,
        formula_lower_bound=formula,
        holds=bound_dominates(certificate.lower_bound, formula, tol),
        residuals={"reproduction": reproduction_residual},
    )


def restricted_dual_frame(family: OperatorFamily, dual: OperatorFamily, k: LinearMap,
                          tol: Tolerance = Tolerance()) -> RestrictedDualResult:
    """
    Compress a K-dual onto ran(K): Theta_i = Gamma_i K^+ restricted to ran(K).

    With Q an orthonormal basis of ran(K), Theta_i = Gamma_i K^+ Q acts on C^r
    and is an ordinary g-frame there whose upper bound is at most
    B_Gamma ||K^+||^2.

    Raises:
        ZeroOperatorError: when K = 0
        NotADualError: when Gamma is not a K-dual of Lambda
    """
    _check_pair(family, dual)
    k = _square(k, family.domain_dim)
    if spectral_norm(k) <= tol.abs:
        raise ZeroOperatorError("K = 0 has a trivial range")
    dual_check = verify_dual(family, dual, k, tol)
    if dual_check.duality_residual > tol.scaled(spectral_norm(k)):
        raise NotADualError(f"Gamma is not a K-dual: residual {dual_check.duality_residual:.3e}")

    q = range_basis(k, tol)
    k_pinv = pseudo_inverse(k, tol)
    theta = dual.compose(k_pinv @ q)
    rank = q.shape[1]

    reconstruction = spectral_norm(cross_operator(family, theta) - q)
    adjoint_residual = spectral_norm(cross_operator(theta, family) @ q - np.eye(rank))
    certificate: FrameCertificate = frame_bounds(theta, np.eye(rank), tol)
    formula_upper = dual_check.gamma_bessel_bound * spectral_norm(k_pinv) ** 2
    family_upper = optimal_upper_bound(family)
    proof_lower = 1.0 / family_upper if family_upper > 0 else 0.0

    holds = (
        reconstruction <= tol.scaled(1.0)
        and adjoint_residual <= tol.scaled(1.0)
        and certificate.is_ckg_frame
        and certificate.upper_bound <= formula_upper + tol.scaled(formula_upper)
    )
    return RestrictedDualResult(
        family=theta,
        basis=q,
        certificate=certificate,
        formula_upper_bound=formula_upper,
        proof_lower_bound=proof_lower,
        reconstruction_residual=reconstruction,
        adjoint_residual=adjoint_residual,
        holds=bool(holds),
    )
