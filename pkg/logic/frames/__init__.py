"""
Continuous K-g-frames on discretized measure spaces.

Families of operators indexed by quadrature nodes, their optimal frame
bounds, Douglas factorizations, K-duals and atomic systems. Public names
are re-exported here.
"""

# Models
from logic.frames.models import (
    OperatorFamily,
    FrameCertificate,
    DouglasSolution,
    DouglasEquivalence,
    DualCertificate,
    AtomicCertificate,
    TheoremCertificate,
    AlgebraCertificate,
    RestrictedDualResult,
)

# Frame operators and bounds
from logic.frames.core import (
    analysis_matrix,
    synthesis_matrix,
    analysis,
    synthesis,
    frame_operator,
    cross_operator,
    energy,
    energies,
    optimal_upper_bound,
    family_sum,
    family_combine,
    frame_bounds,
)

# Douglas factorization
from logic.frames.douglas import (
    douglas_solve,
    equivalence_check,
    pencil_norm_sq,
    alternative_solution,
)

# Duals
from logic.frames.duals import (
    verify_dual,
    canonical_dual,
    dual_norm_floor,
    dual_from_phi,
    phi_from_dual,
    perturbed_dual,
    subspace_dual_bound,
    restricted_dual_frame,
)

# Atomic systems and constructions
from logic.frames.atomic import (
    atomic_check,
    coefficient_map,
    operator_algebra_bounds,
    orthogonal_combine,
    range_combine,
    positive_perturb,
)

__all__ = [
    # Models
    "OperatorFamily",
    "FrameCertificate",
    "DouglasSolution",
    "DouglasEquivalence",
    "DualCertificate",
    "AtomicCertificate",
    "TheoremCertificate",
    "AlgebraCertificate",
    "RestrictedDualResult",
    # Frame operators and bounds
    "analysis_matrix",
    "synthesis_matrix",
    "analysis",
    "synthesis",
    "frame_operator",
    "cross_operator",
    "energy",
    "energies",
    "optimal_upper_bound",
    "family_sum",
    "family_combine",
    "frame_bounds",
    # Douglas factorization
    "douglas_solve",
    "equivalence_check",
    "pencil_norm_sq",
    "alternative_solution",
    # Duals
    "verify_dual",
    "canonical_dual",
    "dual_norm_floor",
    "dual_from_phi",
    "phi_from_dual",
    "perturbed_dual",
    "subspace_dual_bound",
    "restricted_dual_frame",
    # Atomic systems
    "atomic_check",
    "coefficient_map",
    "operator_algebra_bounds",
    "orthogonal_combine",
    "range_combine",
    "positive_perturb",
]
