"""
Seeded random instances with controllable structure.

Each profile targets the hypotheses of one family of checks. The builders
below are shared with the property suites, which draw their trials from a
per-trial numpy Generator instead of going through instance files.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from logic import defaults
from logic.block_space import MeasurePoints
from logic.errors import UnknownProfileError
from logic.frames import canonical_dual, frame_operator, synthesis_matrix
from logic.frames.models import OperatorFamily
from logic.linalg_core import LinearMap, adjoint, hermitian_eigs, range_basis, spectral_norm
from logic.verification.models import CheckRequest, Instance

logger = logging.getLogger(__name__)

PROFILE_DESCRIPTIONS = {
    "bessel": "Random family and random K; usually a c-K-g-frame, never guaranteed.",
    "ckg": "K built inside ran(T_Lambda), so the frame property holds by construction.",
    "orthogonal-pair": "Two families on disjoint node supports, so sum mu_i Lambda_i* Gamma_i = 0.",
    "parseval-pair": "Two orthogonal families each normalized to S = I, with ||K|| <= 1.",
    "subspace": "Block-diagonal S commuting with the projection K, plus the canonical dual.",
    "not-a-frame": "Every Lambda_i annihilates a planted vector that ran(K) contains.",
}


def get_profile_description(profile: str) -> str:
    return PROFILE_DESCRIPTIONS.get(profile, "No description available.")


def get_all_profile_names() -> List[str]:
    return list(PROFILE_DESCRIPTIONS.keys())


# --- Building blocks ---

def complex_gaussian(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a Gaussian matrix."""
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_space(rng: np.random.Generator, points: int, max_block: int,
                 min_total: int = 0) -> MeasurePoints:
    """Uniform weights and block dimensions, topped up until sum d_i >= min_total where possible."""
    low, high = defaults.WEIGHT_RANGE
    weights = rng.uniform(low, high, points)
    dims = [int(d) for d in rng.integers(1, max_block + 1, points)]
    index = 0
    while sum(dims) < min_total and any(d < max_block for d in dims):
        if dims[index % points] < max_block:
            dims[index % points] += 1
        index += 1
    return MeasurePoints(weights, tuple(dims))


def random_family(rng: np.random.Generator, space: MeasurePoints, n: int,
                  rank: Optional[int] = None) -> OperatorFamily:
    """Gaussian blocks; with rank < n every block factors through the same rank-r map."""
    blocks = [complex_gaussian(rng, (d, n)) for d in space.block_dims]
    if rank is not None and rank < n:
        factor = complex_gaussian(rng, (n, rank)) @ complex_gaussian(rng, (rank, n))
        blocks = [block @ factor for block in blocks]
    return OperatorFamily(space, n, tuple(blocks))


def normalized(family: OperatorFamily) -> OperatorFamily:
    """The family Lambda_i S^{-1/2}, whose frame operator is the identity."""
    eigenvalues, vectors = hermitian_eigs(frame_operator(family))
    if eigenvalues[0] <= defaults.GRAM_RANK_RTOL * eigenvalues[-1]:
        raise ValueError("cannot normalize a family whose frame operator is singular")
    root_inverse = (vectors / np.sqrt(eigenvalues)) @ adjoint(vectors)
    return family.compose(root_inverse)


def operator_in_range(rng: np.random.Generator, family: OperatorFamily) -> LinearMap:
    """K = T_Lambda R for a random R, scaled to unit norm, so ran(K) lies in ran(S)."""
    synthesis = synthesis_matrix(family)
    k = synthesis @ complex_gaussian(rng, (synthesis.shape[1], family.domain_dim))
    norm = spectral_norm(k)
    return k / norm if norm > 0 else k


def low_rank_operator(rng: np.random.Generator, n: int, rank: int) -> LinearMap:
    return complex_gaussian(rng, (n, rank)) @ complex_gaussian(rng, (rank, n))


def annihilating_family(rng: np.random.Generator, space: MeasurePoints, n: int) -> Tuple[OperatorFamily, np.ndarray]:
    """A family whose every block kills a random unit vector v; returns (family, v)."""
    v = complex_gaussian(rng, (n,))
    v /= np.linalg.norm(v)
    projector = np.eye(n) - np.outer(v, np.conj(v))
    family = random_family(rng, space, n).compose(projector)
    return family, v


def orthogonal_pair(rng: np.random.Generator, points: int, n: int, max_block: int,
                    min_total: int = 0) -> Tuple[OperatorFamily, OperatorFamily]:
    """Two families on one node set, Lambda supported on the first half of the nodes and Gamma on the rest."""
    half = max(points // 2, 1)
    first = random_space(rng, half, max_block, min_total)
    second = random_space(rng, max(points - half, 1), max_block, min_total)
    space = first.disjoint_union(second)
    lam = random_family(rng, first, n)
    gam = random_family(rng, second, n)
    zeros_first = tuple(np.zeros((d, n), dtype=complex) for d in first.block_dims)
    zeros_second = tuple(np.zeros((d, n), dtype=complex) for d in second.block_dims)
    return (
        OperatorFamily(space, n, lam.blocks + zeros_second),
        OperatorFamily(space, n, zeros_first + gam.blocks),
    )


def intersection_projector(first: OperatorFamily, second: OperatorFamily) -> LinearMap:
    """Orthogonal projector onto ran(S_Lambda) intersected with ran(S_Gamma)."""
    n = first.domain_dim
    # ran(S) = ran(T)
    p1 = range_basis(synthesis_matrix(first))
    p2 = range_basis(synthesis_matrix(second))
    if p1.shape[1] == 0 or p2.shape[1] == 0:
        return np.zeros((n, n), dtype=complex)
    # Squared cosines of the principal angles; angle 0 marks a shared direction
    overlap = adjoint(p2) @ p1
    cosines = adjoint(overlap) @ overlap
    values, vectors = hermitian_eigs(cosines)
    shared = vectors[:, values > 1.0 - defaults.INTERSECTION_SLACK]
    if shared.shape[1] == 0:
        return np.zeros((n, n), dtype=complex)
    basis = p1 @ shared
    q, _ = np.linalg.qr(basis)
    return q @ adjoint(q)


def subspace_family(rng: np.random.Generator, points: int, n: int, max_block: int,
                    rank: int) -> Tuple[OperatorFamily, LinearMap, LinearMap]:
    """
    A family whose frame operator commutes with a rank-r projection K.

    Even nodes only see the first r columns of a random unitary W and odd
    nodes only see the rest, so S is block-diagonal in the basis W.

    Returns:
        (family, K, W)
    """
    if points < 2:
        raise ValueError("a subspace family needs at least two nodes")
    w = random_unitary(rng, n)
    w1, w2 = w[:, :rank], w[:, rank:]
    space = random_space(rng, points, max_block)
    dims = list(space.block_dims)
    for parity, needed in ((0, rank), (1, n - rank)):
        nodes = list(range(parity, points, 2))
        while sum(dims[i] for i in nodes) < needed:
            open_nodes = [i for i in nodes if dims[i] < max_block]
            if not open_nodes:
                raise ValueError(f"not enough rows for a rank-{rank} subspace family; raise points or maxblock")
            dims[open_nodes[0]] += 1
    space = MeasurePoints(space.weights, tuple(dims))
    blocks = []
    for index, dim in enumerate(space.block_dims):
        part = w1 if index % 2 == 0 else w2
        blocks.append(complex_gaussian(rng, (dim, part.shape[1])) @ adjoint(part))
    k = w1 @ adjoint(w1)
    return OperatorFamily(space, n, tuple(blocks)), k, w


# --- Profiles ---

def _validate_dims(n: int, points: int, max_block: int) -> None:
    if not 1 <= n <= defaults.MAX_DOMAIN_DIM:
        raise ValueError(f"n must be in [1, {defaults.MAX_DOMAIN_DIM}], got {n}")
    if not 1 <= points <= defaults.MAX_POINTS:
        raise ValueError(f"points must be in [1, {defaults.MAX_POINTS}], got {points}")
    if not 1 <= max_block <= defaults.MAX_BLOCK_DIM:
        raise ValueError(f"maxblock must be in [1, {defaults.MAX_BLOCK_DIM}], got {max_block}")


def _check(name: str, kind: str, **params) -> CheckRequest:
    return CheckRequest(name=name, kind=kind, params=dict(params))


def _bessel(rng, n, points, max_block):
    space = random_space(rng, points, max_block)
    family = random_family(rng, space, n)
    k = complex_gaussian(rng, (n, n))
    families = {"Lambda": family}
    operators = {"K": k}
    checks = [
        _check("bounds", "frame_bounds", family="Lambda", operator="K", expect="any"),
        _check("atomic", "atomic", family="Lambda", operator="K", expect="any"),
    ]
    return space, families, operators, checks


def _ckg(rng, n, points, max_block):
    space = random_space(rng, points, max_block)
    rank = int(rng.integers(1, n + 1))
    family = random_family(rng, space, n, rank=rank)
    k = operator_in_range(rng, family)
    families = {"Lambda": family}
    operators = {"K": k}
    checks = [
        _check("bounds", "frame_bounds", family="Lambda", operator="K"),
        _check("douglas", "douglas", left="K", right_family="Lambda"),
        _check("dual", "canonical_dual", family="Lambda", operator="K"),
        _check("floor", "dual_norm_floor", family="Lambda", operator="K"),
        _check("atomic", "atomic", family="Lambda", operator="K"),
    ]
    return space, families, operators, checks


def _orthogonal_pair(rng, n, points, max_block):
    lam, gam = orthogonal_pair(rng, max(points, 2), n, max_block)
    projector = intersection_projector(lam, gam)
    k = projector @ complex_gaussian(rng, (n, n))
    k_norm = spectral_norm(k)
    if k_norm > 0:
        k = k / k_norm
    c = 0.5 * float(rng.uniform(-1.0, 1.0))
    u = np.eye(n) + c * adjoint(k)
    v = complex_gaussian(rng, (n, n))
    c1, c2 = rng.uniform(0.1, 1.0, 2)
    u1 = np.eye(n) + c1 * frame_operator(lam)
    u2 = np.eye(n) + c2 * frame_operator(gam)
    families = {"Lambda": lam, "Gamma": gam}
    operators = {"K": k, "U": u, "V": v, "U1": u1, "U2": u2}
    checks = [
        _check("bounds-lambda", "frame_bounds", family="Lambda", operator="K"),
        _check("bounds-gamma", "frame_bounds", family="Gamma", operator="K"),
        _check("orthogonal", "orthogonal_combine", family="Lambda", other="Gamma", u="U", v="V", operator="K"),
        _check("range", "range_combine", family="Lambda", other="Gamma", u1="U1", u2="U2", operator="K"),
    ]
    return lam.space, families, operators, checks


def _parseval_pair(rng, n, points, max_block):
    if max(points // 2, 1) * max_block < n:
        raise ValueError(f"parseval-pair needs at least {n} rows per family; raise --points or --maxblock")
    lam, gam = orthogonal_pair(rng, max(points, 2), n, max_block, min_total=n)
    lam, gam = normalized(lam), normalized(gam)
    k = complex_gaussian(rng, (n, n))
    k = k * (float(rng.uniform(0.5, 1.0)) / spectral_norm(k))
    identity = np.eye(n, dtype=complex)
    families = {"Lambda": lam, "Gamma": gam}
    operators = {"K": k, "I": identity}
    checks = [
        _check("bounds-lambda", "frame_bounds", family="Lambda", operator="K"),
        _check("bounds-gamma", "frame_bounds", family="Gamma", operator="K"),
        _check("sum", "orthogonal_combine", family="Lambda", other="Gamma", u="I", v="I", operator="K"),
    ]
    return lam.space, families, operators, checks


def _subspace(rng, n, points, max_block):
    if n < 2:
        raise ValueError("subspace profile needs n >= 2")
    rank = int(rng.integers(1, n))
    family, k, _ = subspace_family(rng, max(points, 2), n, max_block, rank)
    dual, _ = canonical_dual(family, k)
    families = {"Lambda": family, "Gamma": dual}
    operators = {"K": k}
    checks = [
        _check("bounds", "frame_bounds", family="Lambda", operator="K"),
        _check("dual", "verify_dual", family="Lambda", dual="Gamma", operator="K"),
        _check("subspace", "subspace_dual", family="Lambda", dual="Gamma", operator="K"),
        _check("restricted", "restricted_dual", family="Lambda", dual="Gamma", operator="K"),
    ]
    return family.space, families, operators, checks


def _not_a_frame(rng, n, points, max_block):
    space = random_space(rng, points, max_block)
    family, _ = annihilating_family(rng, space, n)
    k = complex_gaussian(rng, (n, n))
    families = {"Lambda": family}
    operators = {"K": k}
    checks = [
        _check("bounds", "frame_bounds", family="Lambda", operator="K", expect="negative"),
        _check("atomic", "atomic", family="Lambda", operator="K", expect="negative"),
        _check("equivalence", "equivalence", left="K", right_family="Lambda", expect="negative"),
    ]
    return space, families, operators, checks


PROFILE_BUILDERS = {
    "bessel": _bessel,
    "ckg": _ckg,
    "orthogonal-pair": _orthogonal_pair,
    "parseval-pair": _parseval_pair,
    "subspace": _subspace,
    "not-a-frame": _not_a_frame,
}


def generate_instance(seed: int, profile: str,
                      n: int = defaults.DEFAULT_DOMAIN_DIM,
                      points: int = defaults.DEFAULT_POINTS,
                      max_block: int = defaults.DEFAULT_MAX_BLOCK) -> Instance:
    """
    Build a random instance of the named profile.

    The same (seed, profile, n, points, max_block) always yields the same
    instance.

    Raises:
        UnknownProfileError: for a name outside PROFILE_BUILDERS
        ValueError: for dimensions outside the generator caps
    """
    if profile not in PROFILE_BUILDERS:
        raise UnknownProfileError(f"unknown profile {profile!r}; choose from {', '.join(get_all_profile_names())}")
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    _validate_dims(n, points, max_block)
    rng = np.random.default_rng(seed)
    space, families, operators, checks = PROFILE_BUILDERS[profile](rng, n, points, max_block)
    logger.info("generated %s instance: n=%d nodes=%d seed=%d", profile, n, space.count, seed)
    return Instance(space=space, families=families, operators=operators, checks=checks)

