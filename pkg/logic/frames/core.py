"""
Analysis, synthesis and frame operators of an operator family, and the
optimal c-K-g-frame bounds derived from them.

Everything is computed in the flattened picture: M = stack(sqrt(mu_i) Lambda_i)
is the analysis matrix, its adjoint is the synthesis matrix and S = M* M.
"""

import logging
from typing import Optional

import numpy as np

from logic.block_space import BlockVector, flatten, require_same_space
from logic.errors import DimensionMismatchError
from logic.frames.models import FrameCertificate, OperatorFamily
from logic.linalg_core import (
    UNCONSTRAINED,
    Bound,
    LinearMap,
    Tolerance,
    adjoint,
    as_linear_map,
    hermitian_eigs,
    is_unconstrained,
    spectral_norm,
    whitened_ratio,
)

logger = logging.getLogger(__name__)


def analysis_matrix(family: OperatorFamily) -> LinearMap:
    """M with T_Lambda* f = unflatten(M f)."""
    scale = np.sqrt(family.space.weights)
    return np.vstack([s * block for s, block in zip(scale, family.blocks)])


def synthesis_matrix(family: OperatorFamily) -> LinearMap:
    return adjoint(analysis_matrix(family))


def analysis(family: OperatorFamily, f) -> BlockVector:
    """T_Lambda* f = (Lambda_i f)_i."""
    f = np.asarray(f, dtype=complex).reshape(-1)
    if f.size != family.domain_dim:
        raise DimensionMismatchError(f"vector has length {f.size}, family acts on C^{family.domain_dim}")
    return BlockVector(family.space, tuple(block @ f for block in family.blocks))


def synthesis(family: OperatorFamily, field: BlockVector) -> np.ndarray:
    """T_Lambda F = sum_i mu_i Lambda_i* F_i."""
    require_same_space(family.space, field.space, "family and field")
    return synthesis_matrix(family) @ flatten(field)


def frame_operator(family: OperatorFamily) -> LinearMap:
    """S = sum_i mu_i Lambda_i* Lambda_i, symmetrized against rounding."""
    m = analysis_matrix(family)
    s = adjoint(m) @ m
    return (s + adjoint(s)) / 2


def cross_operator(first: OperatorFamily, second: OperatorFamily) -> LinearMap:
    """sum_i mu_i Lambda_i* Gamma_i, an operator from the domain of Gamma to the domain of Lambda."""
    require_same_space(first.space, second.space, "families")
    return synthesis_matrix(first) @ analysis_matrix(second)


def energy(family: OperatorFamily, f) -> float:
    """sum_i mu_i ||Lambda_i f||^2 = ||T_Lambda* f||^2."""
    return float(np.linalg.norm(analysis_matrix(family) @ np.asarray(f, dtype=complex)) ** 2)


def energies(family: OperatorFamily, vectors: np.ndarray) -> np.ndarray:
    """Row-wise energies of a (count, n) array of vectors."""
    images = np.asarray(vectors, dtype=complex) @ analysis_matrix(family).T
    return np.sum(np.abs(images) ** 2, axis=1)


def optimal_upper_bound(family: OperatorFamily) -> float:
    eigenvalues, _ = hermitian_eigs(frame_operator(family))
    return max(float(eigenvalues[-1]), 0.0)


def family_sum(first: OperatorFamily, second: OperatorFamily) -> OperatorFamily:
    """The family on the disjoint union of both node sets."""
    if first.domain_dim != second.domain_dim:
        raise DimensionMismatchError(f"families act on C^{first.domain_dim} and C^{second.domain_dim}")
    return OperatorFamily(first.space.disjoint_union(second.space), first.domain_dim, first.blocks + second.blocks)


def family_combine(first: OperatorFamily, second: Optional[OperatorFamily],
                   u: LinearMap, v: Optional[LinearMap] = None) -> OperatorFamily:
    """{Lambda_i U + Gamma_i V} on the shared node set; a missing Gamma or V contributes nothing."""
    combined = first.compose(u)
    if second is None or v is None:
        return combined
    require_same_space(first.space, second.space, "families")
    other = second.compose(v)
    if other.domain_dim != combined.domain_dim:
        raise DimensionMismatchError("U and V must share a domain")
    return OperatorFamily(first.space, combined.domain_dim, tuple(a + b for a, b in zip(combined.blocks, other.blocks)))


def frame_bounds(family: OperatorFamily, k: LinearMap, tol: Tolerance = Tolerance()) -> FrameCertificate:
    """
    Optimal c-K-g-frame bounds of a family.

    A is the largest constant with A KK* <= S (UNCONSTRAINED when K = 0) and B
    is the largest eigenvalue of S. The family is a c-K-g-frame exactly when
    ran(K) lies in ran(S), which is when A > 0.

    Args:
        family: the operator family Lambda
        k: the bounded operator K on C^n
        tol: comparison tolerances

    Returns:
        FrameCertificate with sandwich residuals
    """
    k = as_linear_map(k, "K")
    n = family.domain_dim
    if k.shape != (n, n):
        raise DimensionMismatchError(f"K must be {n}x{n}, got {k.shape}")

    s = frame_operator(family)
    eigenvalues, _ = hermitian_eigs(s, tol)
    upper = max(float(eigenvalues[-1]), 0.0)
    kk = k @ adjoint(k)
    k_norm = spectral_norm(k)
    synthesis = synthesis_matrix(family)

    # A = 1 / ||T^+ K||^2 once ran(K) lies in ran(T) = ran(S)
    whitened = whitened_ratio(k, synthesis, tol)
    if k_norm ** 2 <= tol.abs:
        lower: Bound = UNCONSTRAINED
    elif whitened.outside > tol.scaled(k_norm) or whitened.value <= 0.0:
        lower = 0.0
    else:
        lower = 1.0 / whitened.value

    residuals = {
        "range_inclusion": whitened.outside,
        "sandwich_upper": max(0.0, -float(hermitian_eigs(upper * np.eye(n) - s, tol)[0][0])),
    }
    if is_unconstrained(lower):
        is_frame = True
        residuals["sandwich_lower"] = 0.0
    else:
        is_frame = lower > tol.abs
        gap = hermitian_eigs(s - lower * kk, tol)[0]
        residuals["sandwich_lower"] = max(0.0, -float(gap[0]))
        residuals["tight_operator"] = spectral_norm(s - lower * kk)

    is_tight = (
        is_frame
        and not is_unconstrained(lower)
        and k_norm > tol.abs
        and abs(upper - lower) <= tol.scaled(upper)
    )
    is_parseval = is_tight and abs(lower - 1.0) <= tol.rel and abs(upper - 1.0) <= tol.rel
    logger.debug("frame bounds: A=%s B=%.6g frame=%s tight=%s", lower, upper, is_frame, is_tight)
    return FrameCertificate(
        lower_bound=lower,
        upper_bound=upper,
        is_bessel=bool(np.isfinite(upper)),
        is_ckg_frame=bool(is_frame),
        is_tight=bool(is_tight),
        is_parseval=bool(is_parseval),
        residuals=residuals,
    )
