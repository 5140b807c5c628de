from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from logic.block_space import MeasurePoints
from logic.errors import DimensionMismatchError, NonFiniteError
from logic.linalg_core import Bound, LinearMap, adjoint


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    """A measurable family of operators Lambda_i : C^n -> C^{d_i}, one per quadrature node."""
    space: MeasurePoints
    domain_dim: int                   # n = dim H
    blocks: Tuple[np.ndarray, ...]    # block i has shape (d_i, n)

    def __post_init__(self):
        n = int(self.domain_dim)
        if n < 1:
            raise DimensionMismatchError(f"domain dimension must be at least 1, got {n}")
        if len(self.blocks) != self.space.count:
            raise DimensionMismatchError(f"expected {self.space.count} operator blocks, got {len(self.blocks)}")
        frozen = []
        for index, (block, dim) in enumerate(zip(self.blocks, self.space.block_dims)):
            arr = np.array(block, dtype=complex)
            if arr.ndim == 1 and dim == 1:
                arr = arr.reshape(1, -1)
            if arr.shape != (dim, n):
                raise DimensionMismatchError(f"block {index} has shape {arr.shape}, expected {(dim, n)}")
            if not np.all(np.isfinite(arr)):
                raise NonFiniteError(f"block {index} has non-finite entries")
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "domain_dim", n)
        object.__setattr__(self, "blocks", tuple(frozen))

    @classmethod
    def zeros(cls, space: MeasurePoints, domain_dim: int) -> "OperatorFamily":
        return cls(space, domain_dim, tuple(np.zeros((d, domain_dim), dtype=complex) for d in space.block_dims))

    @classmethod
    def from_flat(cls, space: MeasurePoints, flat: LinearMap) -> "OperatorFamily":
        """Inverse of the analysis matrix: split the stacked (sqrt(mu_i) Lambda_i) rows."""
        flat = np.asarray(flat, dtype=complex)
        if flat.ndim != 2 or flat.shape[0] != space.total_dim:
            raise DimensionMismatchError(f"stacked family needs {space.total_dim} rows, got shape {flat.shape}")
        offsets = space.offsets
        blocks = tuple(
            flat[offsets[i]:offsets[i + 1]] / np.sqrt(space.weights[i]) for i in range(space.count)
        )
        return cls(space, flat.shape[1], blocks)

    def compose(self, operator: LinearMap) -> "OperatorFamily":
        """The family {Lambda_i U} for U : C^k -> C^n."""
        operator = np.asarray(operator, dtype=complex)
        if operator.ndim != 2 or operator.shape[0] != self.domain_dim:
            raise DimensionMismatchError(
                f"right factor must have {self.domain_dim} rows, got shape {operator.shape}"
            )
        return OperatorFamily(self.space, operator.shape[1], tuple(block @ operator for block in self.blocks))

    def permuted(self, order) -> "OperatorFamily":
        order = list(order)
        return OperatorFamily(self.space.permuted(order), self.domain_dim, tuple(self.blocks[i] for i in order))

    def adjoint_blocks(self) -> Tuple[np.ndarray, ...]:
        return tuple(adjoint(block) for block in self.blocks)


@dataclass
class FrameCertificate:
    """Optimal frame bounds of a family with respect to K, with the residuals that back them."""
    lower_bound: Bound                # A_opt = sup{A : A KK* <= S}
    upper_bound: float                # B_opt = lambda_max(S)
    is_bessel: bool                   # finite B; always true on a finite node set
    is_ckg_frame: bool
    is_tight: bool
    is_parseval: bool
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def bessel_bound(self) -> float:
        return self.upper_bound


@dataclass
class DouglasSolution:
    """The reduced solution U of L1 = L2 U and the factorization facts attached to it."""
    solution: LinearMap               # U = L2^+ L1
    norm_sq: float                    # ||U||^2
    pencil_norm_sq: float             # inf{lambda : L1 L1* <= lambda L2 L2*}
    residual: float                   # ||L1 - L2 U||
    null_match: bool                  # N(L1) = N(U)
    range_ok: bool                    # ran(U) within closure of ran(L2*)
    range_residual: float = 0.0       # ||(I - P_ran(L2*)) U||


@dataclass
class DouglasEquivalence:
    """Independent verdicts for range inclusion, majorization and factorization."""
    range_included: bool
    majorized: bool
    factorizable: bool
    residuals: Dict[str, float] = field(default_factory=dict)
    majorization_constant: Bound = 0.0

    @property
    def agree(self) -> bool:
        return self.range_included == self.majorized == self.factorizable


@dataclass
class DualCertificate:
    duality_residual: float           # ||K - sum mu_i Lambda_i* Gamma_i||
    gamma_bessel_bound: float
    synthesis_norm_sq: float          # ||T_Gamma||^2
    floor: float                      # 1 / A_opt (0 when K = 0)
    optimal_lower_bound: Bound        # A_opt of Lambda for K
    is_valid: bool


@dataclass
class AtomicCertificate:
    is_atomic: bool                   # coefficients with a finite bound reproduce K f
    minimal_C: Optional[float]        # smallest admissible bound; None when not atomic
    is_ckg_frame: bool                # verdict of the spectral frame test
    equivalence_agrees: bool
    reconstruction_residual: float
    bound_product: Optional[float] = None  # minimal_C^2 * A_opt, expected 1


@dataclass
class TheoremCertificate:
    """A family produced (or examined) by a construction, with the bounds the construction predicts."""
    family: OperatorFamily
    certificate: FrameCertificate
    formula_lower_bound: Bound
    formula_upper_bound: Optional[float] = None
    holds: bool = False
    residuals: Dict[str, float] = field(default_factory=dict)


@dataclass
class AlgebraCertificate:
    sum_result: TheoremCertificate    # alpha K1 + beta K2
    product_result: TheoremCertificate  # K1 K2

    @property
    def holds(self) -> bool:
        return self.sum_result.holds and self.product_result.holds


@dataclass
class RestrictedDualResult:
    """A dual family compressed onto ran(K), in coordinates of an orthonormal basis Q."""
    family: OperatorFamily            # Theta_i = Gamma_i K^+ Q, acting on C^r
    basis: LinearMap                  # Q, n x r
    certificate: FrameCertificate     # ordinary frame bounds of Theta on C^r
    formula_upper_bound: float        # B_Gamma ||K^+||^2
    proof_lower_bound: float          # 1 / B_Lambda, reported only
    reconstruction_residual: float    # ||sum mu Lambda_i* Theta_i - Q||
    adjoint_residual: float           # ||sum mu Theta_i* Lambda_i Q - I_r||
    holds: bool = False
