"""
Atomic systems and constructions of new c-K-g-frames from old ones.

Lambda is an atomic system for K when every K f is synthesized from
coefficients phi_f with ||phi_f|| <= C ||f||. Atomicity is decided here
constructively (least-squares coefficients reproduce K f) and compared with
the spectral frame test; the two must agree.
"""

import logging

import numpy as np

from logic.block_space import BlockVector, require_same_space
from logic.errors import (
    DimensionMismatchError,
    HypothesisFailedError,
    NotAtomicError,
    NotHermitianError,
    NotKGFrameError,
)
from logic.frames.core import (
    analysis,
    cross_operator,
    family_combine,
    frame_bounds,
    frame_operator,
    optimal_upper_bound,
    synthesis_matrix,
)
from logic.frames.duals import canonical_dual
from logic.frames.models import AlgebraCertificate, AtomicCertificate, OperatorFamily, TheoremCertificate
from logic.linalg_core import (
    UNCONSTRAINED,
    Bound,
    LinearMap,
    Tolerance,
    adjoint,
    as_linear_map,
    bound_dominates,
    hermitian_eigs,
    is_bounded_below,
    is_unconstrained,
    range_included,
    spectral_norm,
    whitened_ratio,
)

logger = logging.getLogger(__name__)


def _square(matrix, n: int, name: str) -> LinearMap:
    matrix = as_linear_map(matrix, name)
    if matrix.shape != (n, n):
        raise DimensionMismatchError(f"{name} must be {n}x{n}, got {matrix.shape}")
    return matrix


def _frame_operator_residual(combined: OperatorFamily, predicted: LinearMap) -> float:
    return spectral_norm(frame_operator(combined) - predicted)


def atomic_check(family: OperatorFamily, k: LinearMap, tol: Tolerance = Tolerance()) -> AtomicCertificate:
    k = _square(k, family.domain_dim, "K")
    certificate = frame_bounds(family, k, tol)
    try:
        _, dual_cert = canonical_dual(family, k, tol)
    except NotKGFrameError:
        logger.debug("atomic check: K f is not reproducible from coefficients")
        return AtomicCertificate(
            is_atomic=False,
            minimal_C=None,
            is_ckg_frame=certificate.is_ckg_frame,
            equivalence_agrees=not certificate.is_ckg_frame,
            reconstruction_residual=spectral_norm(k),
        )

    residual = dual_cert.duality_residual
    is_atomic = residual <= tol.scaled(spectral_norm(k))
    minimal_c = float(np.sqrt(dual_cert.synthesis_norm_sq))
    lower = certificate.lower_bound
    product = None if is_unconstrained(lower) else minimal_c ** 2 * float(lower)
    return AtomicCertificate(
        is_atomic=bool(is_atomic),
        minimal_C=minimal_c,
        is_ckg_frame=certificate.is_ckg_frame,
        equivalence_agrees=bool(is_atomic) == certificate.is_ckg_frame,
        reconstruction_residual=residual,
        bound_product=product,
    )


def coefficient_map(family: OperatorFamily, k: LinearMap, f, tol: Tolerance = Tolerance()) -> BlockVector:
    """Least-norm coefficients phi_f with T_Lambda phi_f = K f."""
    k = _square(k, family.domain_dim, "K")
    try:
        dual, _ = canonical_dual(family, k, tol)
    except NotKGFrameError as exc:
        raise NotAtomicError(f"family is not an atomic system for K: {exc}") from exc
    return analysis(dual, f)


def _require_frame(family: OperatorFamily, k: LinearMap, tol: Tolerance, label: str):
    certificate = frame_bounds(family, k, tol)
    if not certificate.is_ckg_frame:
        raise NotAtomicError(f"family is not a c-K-g-frame for {label}")
    return certificate


def _inverse_sum(*ratios: Bound) -> Bound:
    """sum of 1 / lambda_j, where lambda_j = 0 (a zero operator) contributes no constraint."""
    total = 0.0
    for ratio in ratios:
        if ratio <= 0:
            return UNCONSTRAINED
        total += 1.0 / ratio
    return total


def _sum_formula(a1: Bound, a2: Bound, alpha: float, beta: float) -> Bound:
    """A1 A2 / (2 (|alpha|^2 A2 + |beta|^2 A1)), with the K_j = 0 limits taken."""
    if is_unconstrained(a1) and is_unconstrained(a2):
        return UNCONSTRAINED
    if is_unconstrained(a1):
        return a2 / (2 * abs(beta) ** 2)
    if is_unconstrained(a2):
        return a1 / (2 * abs(alpha) ** 2)
    return a1 * a2 / (2 * (abs(alpha) ** 2 * a2 + abs(beta) ** 2 * a1))


def operator_algebra_bounds(family: OperatorFamily, k1: LinearMap, k2: LinearMap,
                            alpha: complex, beta: complex, tol: Tolerance = Tolerance()) -> AlgebraCertificate:
    """
    Bounds for alpha K1 + beta K2 and for K1 K2 from the bounds for K1 and K2.

    Args:
        family: a c-K1-g-frame that is also a c-K2-g-frame
        k1, k2: operators on C^n
        alpha, beta: nonzero scalars

    Returns:
        AlgebraCertificate with predicted and optimal bounds of both operators
    """
    n = family.domain_dim
    k1 = _square(k1, n, "K1")
    k2 = _square(k2, n, "K2")
    if alpha == 0 or beta == 0:
        raise HypothesisFailedError("scalars", "alpha and beta must be nonzero")
    first = _require_frame(family, k1, tol, "K1")
    second = _require_frame(family, k2, tol, "K2")
    a1, a2 = first.lower_bound, second.lower_bound
    upper_formula = (first.upper_bound + second.upper_bound) / 2

    sum_operator = alpha * k1 + beta * k2
    sum_cert = frame_bounds(family, sum_operator, tol)
    sum_formula = _sum_formula(a1, a2, alpha, beta)
    sum_result = TheoremCertificate(
        family=family,
        certificate=sum_cert,
        formula_lower_bound=sum_formula,
        formula_upper_bound=upper_formula,
        holds=bound_dominates(sum_cert.lower_bound, sum_formula, tol)
        and sum_cert.upper_bound <= upper_formula + tol.scaled(upper_formula),
    )

    k2_norm = spectral_norm(k2)
    product_cert = frame_bounds(family, k1 @ k2, tol)
    if is_unconstrained(a1) or k2_norm <= tol.abs:
        product_formula: Bound = UNCONSTRAINED
    else:
        product_formula = a1 / k2_norm ** 2
    product_result = TheoremCertificate(
        family=family,
        certificate=product_cert,
        formula_lower_bound=product_formula,
        formula_upper_bound=first.upper_bound,
        holds=bound_dominates(product_cert.lower_bound, product_formula, tol),
    )
    return AlgebraCertificate(sum_result=sum_result, product_result=product_result)


def _check_orthogonal(first: OperatorFamily, second: OperatorFamily, tol: Tolerance) -> float:
    require_same_space(first.space, second.space, "families")
    if first.domain_dim != second.domain_dim:
        raise DimensionMismatchError(f"families act on C^{first.domain_dim} and C^{second.domain_dim}")
    cross = spectral_norm(cross_operator(first, second))
    scale = np.sqrt(optimal_upper_bound(first) * optimal_upper_bound(second))
    if cross > tol.scaled(scale):
        raise HypothesisFailedError("orthogonality", f"sum mu_i Lambda_i* Gamma_i has norm {cross:.3e}")
    return cross


def orthogonal_combine(family: OperatorFamily, other: OperatorFamily, u: LinearMap, v: LinearMap,
                       k: LinearMap, tol: Tolerance = Tolerance()) -> TheoremCertificate:
    """
    {Lambda_i U + Gamma_i V} for an orthogonal pair, with U bounded below and commuting with K*.

    The predicted lower bound is C A_Lambda with C = sigma_min(U)^2 and the
    predicted upper bound is B_Lambda ||U||^2 + B_Gamma ||V||^2.
    """
    n = family.domain_dim
    u = _square(u, n, "U")
    v = _square(v, n, "V")
    k = _square(k, n, "K")
    cross = _check_orthogonal(family, other, tol)

    sigma = np.linalg.svd(u, compute_uv=False)
    if not is_bounded_below(u, tol):
        raise HypothesisFailedError("bounded-below", "U is not bounded below")
    commutator = spectral_norm(u @ adjoint(k) - adjoint(k) @ u)
    if commutator > tol.scaled(sigma[0] * spectral_norm(k)):
        raise HypothesisFailedError("commuting", f"U K* - K* U has norm {commutator:.3e}")
    base = _require_frame(family, k, tol, "K")

    c = float(sigma[-1]) ** 2
    lower_formula = UNCONSTRAINED if is_unconstrained(base.lower_bound) else c * base.lower_bound
    upper_formula = base.upper_bound * sigma[0] ** 2 + optimal_upper_bound(other) * spectral_norm(v) ** 2

    combined = family_combine(family, other, u, v)
    certificate = frame_bounds(combined, k, tol)
    predicted = adjoint(u) @ frame_operator(family) @ u + adjoint(v) @ frame_operator(other) @ v
    cross_term = _frame_operator_residual(combined, predicted)

    holds = (
        bound_dominates(certificate.lower_bound, lower_formula, tol)
        and certificate.upper_bound <= upper_formula + tol.scaled(upper_formula)
        and cross_term <= tol.scaled(spectral_norm(predicted))
    )
    return TheoremCertificate(
        family=combined,
        certificate=certificate,
        formula_lower_bound=lower_formula,
        formula_upper_bound=float(upper_formula),
        holds=bool(holds),
        residuals={"orthogonality": cross, "cross_term": cross_term, "commutator": commutator},
    )


def range_combine(family: OperatorFamily, other: OperatorFamily, u1: LinearMap, u2: LinearMap,
                  k: LinearMap, tol: Tolerance = Tolerance()) -> TheoremCertificate:
    """
    {Lambda_i U1 + Gamma_i U2} for an orthogonal pair whose synthesis ranges survive U_j*.

    The predicted lower bound is 1/lambda_1 + 1/lambda_2 where lambda_j is the
    smallest constant with KK* <= lambda_j U_j* S_j U_j.
    """
    n = family.domain_dim
    u1 = _square(u1, n, "U1")
    u2 = _square(u2, n, "U2")
    k = _square(k, n, "K")
    cross = _check_orthogonal(family, other, tol)

    ratios = []
    for label, fam, u in (("1", family, u1), ("2", other, u2)):
        synthesis = synthesis_matrix(fam)
        if not range_included(synthesis, adjoint(u) @ synthesis, tol):
            raise HypothesisFailedError(f"range-{label}", f"ran(T) is not contained in ran(U{label}* T)")
        # (U* T)(U* T)* = U* S U
        ratio = whitened_ratio(k, adjoint(u) @ synthesis, tol)
        if ratio.outside > tol.scaled(spectral_norm(k)):
            raise HypothesisFailedError(f"atomic-{label}", f"family {label} is not atomic for K after U{label}")
        ratios.append(ratio.value)

    lower_formula = _inverse_sum(*ratios)
    upper_formula = optimal_upper_bound(family) * spectral_norm(u1) ** 2 + optimal_upper_bound(other) * spectral_norm(u2) ** 2

    combined = family_combine(family, other, u1, u2)
    certificate = frame_bounds(combined, k, tol)
    predicted = adjoint(u1) @ frame_operator(family) @ u1 + adjoint(u2) @ frame_operator(other) @ u2
    cross_term = _frame_operator_residual(combined, predicted)

    holds = (
        bound_dominates(certificate.lower_bound, lower_formula, tol)
        and certificate.upper_bound <= upper_formula + tol.scaled(upper_formula)
        and cross_term <= tol.scaled(spectral_norm(predicted))
    )
    return TheoremCertificate(
        family=combined,
        certificate=certificate,
        formula_lower_bound=lower_formula,
        formula_upper_bound=float(upper_formula),
        holds=bool(holds),
        residuals={"orthogonality": cross, "cross_term": cross_term},
    )


def positive_perturb(family: OperatorFamily, u: LinearMap, power: int, k: LinearMap,
                     tol: Tolerance = Tolerance()) -> TheoremCertificate:
    """
    {Lambda_i (I + U^power)} for U positive and commuting with S.

    The new frame operator (I + U^power)* S (I + U^power) dominates S, so the
    original lower bound still holds.
    """
    n = family.domain_dim
    u = _square(u, n, "U")
    k = _square(k, n, "K")
    if int(power) != power or power < 1:
        raise HypothesisFailedError("power", f"power must be a positive integer, got {power!r}")
    try:
        eigenvalues, _ = hermitian_eigs(u, tol)
    except NotHermitianError as exc:
        raise HypothesisFailedError("positive", str(exc)) from exc
    if eigenvalues[0] < -tol.scaled(spectral_norm(u)):
        raise HypothesisFailedError("positive", f"U has eigenvalue {eigenvalues[0]:.3e}")
    s = frame_operator(family)
    commutator = spectral_norm(u @ s - s @ u)
    if commutator > tol.scaled(spectral_norm(u) * spectral_norm(s)):
        raise HypothesisFailedError("commuting", f"U S - S U has norm {commutator:.3e}")
    base = _require_frame(family, k, tol, "K")

    factor = np.eye(n) + np.linalg.matrix_power(u, int(power))
    perturbed = family.compose(factor)
    predicted = adjoint(factor) @ s @ factor
    operator_residual = _frame_operator_residual(perturbed, predicted)
    gap = hermitian_eigs(predicted - s, tol)[0]
    domination = max(0.0, -float(gap[0]))

    certificate = frame_bounds(perturbed, k, tol)
    holds = (
        bound_dominates(certificate.lower_bound, base.lower_bound, tol)
        and operator_residual <= tol.scaled(spectral_norm(predicted))
        and domination <= tol.scaled(spectral_norm(s))
    )
    return TheoremCertificate(
        family=perturbed,
        certificate=certificate,
        formula_lower_bound=base.lower_bound,
        holds=bool(holds),
        residuals={"frame_operator": operator_residual, "domination": domination, "commutator": commutator},
    )
