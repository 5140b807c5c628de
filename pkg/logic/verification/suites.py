import logging
from abc import ABC, abstractmethod
from typing import Dict, List, Type

import numpy as np

from logic import defaults, frames
from logic.block_space import flatten
from logic.errors import HypothesisFailedError, RangeNotIncludedError, UnknownSuiteError
from logic.generator import (
    annihilating_family,
    complex_gaussian,
    intersection_projector,
    low_rank_operator,
    normalized,
    operator_in_range,
    orthogonal_pair,
    random_family,
    random_space,
    random_unitary,
    subspace_family,
)
from logic.linalg_core import (
    Tolerance,
    adjoint,
    hermitian_eigs,
    is_unconstrained,
    pencil_extremes,
    pseudo_inverse,
    random_unit_vectors,
    spectral_norm,
)

logger = logging.getLogger(__name__)


# Suite descriptions for report headers
SUITE_DESCRIPTIONS: Dict[str, str] = {
    "douglas": (
        "Constructive factorizations L1 = L2 R: the reduced solution reproduces L1, its norm equals "
        "the pencil infimum, N(U) = N(L1) and ran(U) lies in ran(L2*). Generic L1 against a "
        "rank-deficient L2 must be rejected by all three equivalent tests."
    ),
    "frame-bounds": (
        "Optimal bounds A, B satisfy the sandwich inequality on random unit vectors, never exceed a "
        "Monte-Carlo oracle, and cannot be improved by a relative epsilon."
    ),
    "dual-characterization": (
        "The canonical dual reproduces K, its synthesis operator Phi satisfies K* = Phi T*, any such "
        "Phi yields a dual, and relabelling the nodes changes nothing."
    ),
    "dual-floor": (
        "No K-dual has synthesis norm squared below 1/A; the canonical dual attains the floor and "
        "null-space perturbations stay above it."
    ),
    "subspace-dual": (
        "Families whose frame operator leaves ran(K) invariant and whose dual reproduces ran(K) "
        "satisfy the lower bound 1/(B_Gamma ||K||^2). Rotated families violate the invariance and "
        "must be flagged."
    ),
    "atomic-equivalence": (
        "Constructive atomicity and the spectral frame test agree on mixed instances; on positives "
        "the least-norm coefficients reproduce K f with the minimal constant."
    ),
    "operator-algebra": (
        "Predicted bounds for alpha K1 + beta K2 and K1 K2 never exceed the optimal ones; the "
        "equality cases K1 = K2 = I and unitary K2 are exact."
    ),
    "orthogonal-combine": (
        "For an orthogonal pair, {Lambda U + Gamma V} keeps the lower bound sigma_min(U)^2 A and the "
        "quadratic forms add without cross terms."
    ),
    "parseval-sum": (
        "The sum of two orthogonal Parseval families is squeezed between 2||K*f||^2 and 2||f||^2."
    ),
    "range-combine": (
        "For an orthogonal pair, {Lambda U1 + Gamma U2} keeps the lower bound 1/lambda_1 + 1/lambda_2."
    ),
    "positive-perturb": (
        "Composing with I + U^n, U positive and commuting with S, dominates the frame operator and "
        "keeps the original lower bound."
    ),
    "restricted-dual": (
        "A K-dual compressed onto ran(K) is an ordinary frame there, reproducing the basis of ran(K) "
        "with upper bound at most B_Gamma ||K^+||^2."
    ),
}


def get_suite_description(suite_name: str) -> str:
    return SUITE_DESCRIPTIONS.get(suite_name, "No description available.")


def get_all_suite_names() -> List[str]:
    """Suite names in their fixed run order; the position seeds each suite's trials."""
    return list(SUITE_DESCRIPTIONS.keys())


class TrialRecorder:
    """Collects metrics and failed assertions for one trial."""

    def __init__(self):
        self.metrics: Dict[str, object] = {}
        self.failures: List[str] = []

    def metric(self, name: str, value) -> None:
        if is_unconstrained(value):
            self.metrics[name] = "unconstrained"
        elif isinstance(value, (bool, np.bool_)):
            self.metrics[name] = bool(value)
        elif value is None:
            self.metrics[name] = None
        else:
            self.metrics[name] = float(value)

    def require(self, condition, label: str) -> None:
        if not bool(condition):
            self.failures.append(label)

    @property
    def passed(self) -> bool:
        return not self.failures


def _dims(rng: np.random.Generator, n_range=(2, 7), points_range=(2, 9)):
    n = int(rng.integers(*n_range))
    points = int(rng.integers(*points_range))
    return n, points


class PropertySuite(ABC):
    """
    Abstract base class for randomized property suites.

    Each trial builds a fresh instance from its own generator and records
    metrics plus any failed assertions; trials never share state.
    """

    name: str = ""
    default_trials: int = 100

    @abstractmethod
    def run_trial(self, index: int, rng: np.random.Generator, tol: Tolerance, rec: TrialRecorder) -> None:
        """
        Run one trial.

        Args:
            index: trial number within the suite run
            rng: generator seeded from (seed, suite position, index)
            tol: comparison tolerances
            rec: recorder for metrics and failed assertions
        """
        ...


class DouglasSuite(PropertySuite):
    name = "douglas"
    default_trials = 200

    def run_trial(self, index, rng, tol, rec):
        p = int(rng.integers(2, 7))
        q = int(rng.integers(1, 7))
        e = int(rng.integers(1, 5))
        rank = int(rng.integers(1, min(p, q) + 1))
        l2 = complex_gaussian(rng, (p, rank)) @ complex_gaussian(rng, (rank, q))
        l1 = l2 @ complex_gaussian(rng, (q, e))

        solution = frames.douglas_solve(l1, l2, tol)
        gap = abs(solution.norm_sq - solution.pencil_norm_sq)
        rec.metric("residual", solution.residual)
        rec.metric("norm_gap_rel", gap / max(1.0, solution.norm_sq))
        rec.metric("adjoint_range_residual", solution.range_residual)
        rec.require(solution.residual <= tol.scaled(spectral_norm(l1)), "factorization residual")
        rec.require(gap <= defaults.NORM_MATCH_REL * max(1.0, solution.norm_sq), "norm matches pencil infimum")
        rec.require(solution.null_match, "N(U) = N(L1)")
        rec.require(solution.range_ok, "ran(U) within ran(L2*)")

        gram = pencil_extremes(l1 @ adjoint(l1), l2 @ adjoint(l2), tol).max_ratio
        rec.metric("gram_pencil_norm_sq", gram)
        rec.require(
            not is_unconstrained(gram)
            and abs(gram - solution.norm_sq) <= defaults.PENCIL_MATCH_REL * max(1.0, solution.norm_sq),
            "Gram pencil agrees with ||U||^2",
        )

        equivalence = frames.equivalence_check(l1, l2, tol)
        rec.require(equivalence.agree and equivalence.range_included, "equivalence on a constructive pair")

        u_norm = spectral_norm(solution.solution)
        for _ in range(defaults.PERTURBATIONS_PER_INSTANCE):
            other = frames.alternative_solution(l1, l2, complex_gaussian(rng, (q, e)), tol)
            rec.require(spectral_norm(l1 - l2 @ other) <= tol.scaled(spectral_norm(l1) * max(1.0, spectral_norm(other))),
                        "alternative solution solves L1 = L2 U")
            rec.require(spectral_norm(other) >= u_norm - tol.scaled(u_norm), "reduced solution has least norm")

        # Generic L1 against a rank-deficient L2
        deficient = int(rng.integers(1, min(p - 1, q) + 1))
        l2_neg = complex_gaussian(rng, (p, deficient)) @ complex_gaussian(rng, (deficient, q))
        l1_neg = complex_gaussian(rng, (p, e))
        try:
            frames.douglas_solve(l1_neg, l2_neg, tol)
            rec.require(False, "negative instance accepted")
        except RangeNotIncludedError as exc:
            rec.metric("negative_residual", exc.residual)
        negative = frames.equivalence_check(l1_neg, l2_neg, tol)
        rec.require(
            not (negative.range_included or negative.majorized or negative.factorizable),
            "negative instance rejected by every test",
        )


class FrameBoundsSuite(PropertySuite):
    name = "frame-bounds"
    default_trials = 200

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng)
        space = random_space(rng, points, defaults.DEFAULT_MAX_BLOCK, min_total=n if index % 2 == 0 else 0)
        if index % 2 == 0:
            family = random_family(rng, space, n)
            k = complex_gaussian(rng, (n, n))
        else:
            family = random_family(rng, space, n, rank=int(rng.integers(1, n + 1)))
            k = operator_in_range(rng, family)

        certificate = frames.frame_bounds(family, k, tol)
        lower, upper = certificate.lower_bound, certificate.upper_bound
        rec.metric("lower", lower)
        rec.metric("upper", upper)
        rec.require(certificate.is_ckg_frame, "instance is a c-K-g-frame")
        if is_unconstrained(lower):
            return

        vectors = random_unit_vectors(rng, n, defaults.SANDWICH_SAMPLES)
        energy = frames.energies(family, vectors)
        image = np.sum(np.abs(vectors @ np.conj(k)) ** 2, axis=1)
        slack = tol.scaled(upper)
        rec.require(np.all(lower * image <= energy + slack), "lower sandwich on random vectors")
        rec.require(np.all(energy <= upper + slack), "upper sandwich on random vectors")

        samples = random_unit_vectors(rng, n, defaults.ORACLE_SAMPLES)
        sample_energy = frames.energies(family, samples)
        sample_image = np.sum(np.abs(samples @ np.conj(k)) ** 2, axis=1)
        visible = sample_image > tol.abs
        oracle = float(np.min(sample_energy[visible] / sample_image[visible]))
        rec.metric("oracle", oracle)
        rec.require(lower <= oracle * (1 + defaults.ORACLE_REL_SLACK), "optimal bound below the Monte-Carlo oracle")

        s = frames.frame_operator(family)
        kk = k @ adjoint(k)
        if lower * spectral_norm(k) ** 2 >= defaults.OPTIMALITY_EPSILON * upper:
            raised = lower * (1 + defaults.OPTIMALITY_EPSILON)
            smallest = float(hermitian_eigs(s - raised * kk)[0][0])
            rec.metric("raised_min_eigenvalue", smallest)
            rec.require(smallest < 0, "bound cannot be raised by a relative epsilon")

        gram = pencil_extremes(s, kk, tol).min_ratio
        rec.metric("gram_pencil_lower", gram)
        rec.require(
            not is_unconstrained(gram) and abs(gram - lower) <= defaults.PENCIL_MATCH_REL * lower,
            "Gram pencil agrees with the factor bound",
        )


class DualCharacterizationSuite(PropertySuite):
    name = "dual-characterization"
    default_trials = 200

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng)
        space = random_space(rng, points, defaults.DEFAULT_MAX_BLOCK)
        family = random_family(rng, space, n, rank=int(rng.integers(1, n + 1)))
        k = operator_in_range(rng, family)

        dual, certificate = frames.canonical_dual(family, k, tol)
        rec.metric("duality_residual", certificate.duality_residual)
        rec.require(certificate.duality_residual <= tol.scaled(spectral_norm(k)), "canonical dual reproduces K")
        lower = certificate.optimal_lower_bound
        if not is_unconstrained(lower):
            product = certificate.synthesis_norm_sq * lower
            rec.metric("norm_times_lower", product)
            rec.require(abs(product - 1.0) <= defaults.DUAL_NORM_REL_SLACK, "||T_Theta||^2 A = 1")

        analysis = frames.analysis_matrix(family)
        phi = frames.phi_from_dual(dual)
        rec.require(spectral_norm(adjoint(k) - phi @ analysis) <= tol.scaled(spectral_norm(k)), "K* = Phi T*")

        # Any Phi with Phi T* = K* gives a dual
        projector = analysis @ pseudo_inverse(analysis, tol)
        shifted = phi + complex_gaussian(rng, phi.shape) @ (np.eye(analysis.shape[0]) - projector)
        other = frames.dual_from_phi(family, shifted)
        other_cert = frames.verify_dual(family, other, k, tol)
        rec.require(other_cert.is_valid, "Phi with Phi T* = K* yields a dual")

        order = rng.permutation(space.count)
        moved = frames.cross_operator(family.permuted(order), dual.permuted(order))
        drift = spectral_norm(moved - frames.cross_operator(family, dual))
        rec.metric("permutation_drift", drift)
        rec.require(drift <= 1e-12 * max(1.0, spectral_norm(k)) * space.count, "node relabelling invariance")


class DualFloorSuite(PropertySuite):
    name = "dual-floor"
    default_trials = 200

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng)
        space = random_space(rng, points, defaults.DEFAULT_MAX_BLOCK)
        family = random_family(rng, space, n, rank=int(rng.integers(1, n + 1)))
        k = operator_in_range(rng, family)

        floor = frames.dual_norm_floor(family, k, tol)
        dual, certificate = frames.canonical_dual(family, k, tol)
        rec.metric("floor", floor)
        rec.metric("canonical_norm_sq", certificate.synthesis_norm_sq)
        rec.require(
            abs(certificate.synthesis_norm_sq - floor) <= defaults.DUAL_NORM_REL_SLACK * floor,
            "canonical dual attains the floor",
        )

        shape = frames.analysis_matrix(family).shape
        smallest = np.inf
        for _ in range(defaults.PERTURBATIONS_PER_INSTANCE):
            other = frames.perturbed_dual(family, dual, complex_gaussian(rng, shape), tol)
            other_cert = frames.verify_dual(family, other, k, tol)
            smallest = min(smallest, other_cert.synthesis_norm_sq)
            rec.require(other_cert.duality_residual <= tol.scaled(1.0), "perturbed family is a dual")
            rec.require(other_cert.synthesis_norm_sq >= floor - tol.scaled(floor), "perturbed dual above the floor")
        rec.metric("smallest_perturbed_norm_sq", smallest)


class SubspaceDualSuite(PropertySuite):
    name = "subspace-dual"
    default_trials = 100

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng)
        rank = int(rng.integers(1, n))
        family, k, _ = subspace_family(rng, max(points, n), n, defaults.DEFAULT_MAX_BLOCK, rank)
        dual, _ = frames.canonical_dual(family, k, tol)

        result = frames.subspace_dual_bound(family, dual, k, tol)
        rec.metric("formula_lower", result.formula_lower_bound)
        rec.metric("empirical_lower", result.certificate.lower_bound)
        rec.require(result.holds, "1/(B_Gamma ||K||^2) below the optimal bound")

        if index % 5 == 0:
            rotated = family.compose(random_unitary(rng, n))
            rotated_dual, _ = frames.canonical_dual(rotated, k, tol)
            try:
                frames.subspace_dual_bound(rotated, rotated_dual, k, tol)
                rec.require(False, "rotated family accepted")
            except HypothesisFailedError as exc:
                rec.require(exc.item == "a", "rotation breaks invariance of ran(K)")
            rec.metric("violation_checked", True)


class AtomicEquivalenceSuite(PropertySuite):
    name = "atomic-equivalence"
    default_trials = 500

    PROFILES = ("bessel", "ckg", "not-a-frame", "subspace")

    def _instance(self, profile, rng, n, points):
        if profile == "subspace":
            family, k, _ = subspace_family(rng, max(points, n), n, defaults.DEFAULT_MAX_BLOCK, int(rng.integers(1, n)))
            return family, k
        space = random_space(rng, points, defaults.DEFAULT_MAX_BLOCK)
        if profile == "bessel":
            return random_family(rng, space, n), complex_gaussian(rng, (n, n))
        if profile == "ckg":
            family = random_family(rng, space, n, rank=int(rng.integers(1, n + 1)))
            return family, operator_in_range(rng, family)
        family, _ = annihilating_family(rng, space, n)
        return family, complex_gaussian(rng, (n, n))

    def run_trial(self, index, rng, tol, rec):
        profile = self.PROFILES[index % len(self.PROFILES)]
        n, points = _dims(rng)
        family, k = self._instance(profile, rng, n, points)

        certificate = frames.atomic_check(family, k, tol)
        rec.metric("is_atomic", certificate.is_atomic)
        rec.metric("is_ckg_frame", certificate.is_ckg_frame)
        rec.require(certificate.equivalence_agrees, f"atomic and frame verdicts agree ({profile})")
        if profile == "not-a-frame":
            rec.require(not certificate.is_atomic, "planted violation detected")
        if profile in ("ckg", "subspace"):
            rec.require(certificate.is_atomic, "constructed frame detected")
        if not certificate.is_atomic:
            return

        rec.metric("minimal_C", certificate.minimal_C)
        if certificate.bound_product is not None:
            rec.metric("C_squared_times_lower", certificate.bound_product)
            rec.require(abs(certificate.bound_product - 1.0) <= defaults.DUAL_NORM_REL_SLACK, "C^2 A = 1")
        k_norm = spectral_norm(k)
        worst = 0.0
        for f in random_unit_vectors(rng, n, 3):
            coefficients = frames.coefficient_map(family, k, f, tol)
            residual = float(np.linalg.norm(frames.synthesis(family, coefficients) - k @ f))
            worst = max(worst, residual)
            rec.require(residual <= tol.scaled(k_norm), "coefficients reproduce K f")
            norm = float(np.linalg.norm(flatten(coefficients)))
            rec.require(norm <= certificate.minimal_C * (1 + tol.rel) + tol.abs, "||phi_f|| <= C ||f||")
        rec.metric("reconstruction_residual", worst)


class OperatorAlgebraSuite(PropertySuite):
    name = "operator-algebra"
    default_trials = 100

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng)
        space = random_space(rng, points, defaults.DEFAULT_MAX_BLOCK, min_total=n)
        family = random_family(rng, space, n, rank=None if index % 2 == 0 else int(rng.integers(1, n + 1)))
        k1 = operator_in_range(rng, family)
        k2 = operator_in_range(rng, family)
        alpha, beta = rng.uniform(0.5, 2.0, 2) * rng.choice([-1.0, 1.0], 2)

        result = frames.operator_algebra_bounds(family, k1, k2, alpha, beta, tol)
        rec.metric("sum_formula", result.sum_result.formula_lower_bound)
        rec.metric("sum_empirical", result.sum_result.certificate.lower_bound)
        rec.metric("product_formula", result.product_result.formula_lower_bound)
        rec.metric("product_empirical", result.product_result.certificate.lower_bound)
        rec.require(result.sum_result.holds, "alpha K1 + beta K2 bound dominated")
        rec.require(result.product_result.holds, "K1 K2 bound dominated")

        s_eigs = hermitian_eigs(frames.frame_operator(family))[0]
        if s_eigs[0] > defaults.GRAM_RANK_RTOL * s_eigs[-1]:
            identity = np.eye(n)
            exact = frames.operator_algebra_bounds(family, identity, identity, 1.0, 1.0, tol).sum_result
            lower = float(s_eigs[0])
            rec.require(abs(exact.formula_lower_bound - lower / 4) <= tol.scaled(lower), "K1 = K2 = I gives A/4")
            rec.require(
                abs(exact.certificate.lower_bound - exact.formula_lower_bound) <= tol.scaled(lower),
                "A/4 is attained",
            )

        unitary = random_unitary(rng, n)
        if frames.frame_bounds(family, unitary, tol).is_ckg_frame:
            exact = frames.operator_algebra_bounds(family, k1, unitary, 1.0, 1.0, tol).product_result
            a1 = frames.frame_bounds(family, k1, tol).lower_bound
            rec.require(
                abs(exact.certificate.lower_bound - a1) <= tol.scaled(a1)
                and abs(exact.formula_lower_bound - a1) <= tol.scaled(a1),
                "unitary K2 keeps A1 exactly",
            )


def _orthogonal_instance(rng, n, points):
    lam, gam = orthogonal_pair(rng, points, n, defaults.DEFAULT_MAX_BLOCK)
    k = intersection_projector(lam, gam) @ complex_gaussian(rng, (n, n))
    k_norm = spectral_norm(k)
    return lam, gam, (k / k_norm if k_norm > 0 else k)


def _cross_term_residual(combined, first, second, u, v, vectors) -> float:
    direct = frames.energies(combined, vectors)
    split = frames.energies(first, vectors @ u.T) + frames.energies(second, vectors @ v.T)
    return float(np.max(np.abs(direct - split)))


class OrthogonalCombineSuite(PropertySuite):
    name = "orthogonal-combine"
    default_trials = 100

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng, points_range=(4, 11))
        lam, gam, k = _orthogonal_instance(rng, n, points)
        u = np.eye(n) + 0.5 * float(rng.uniform(-1.0, 1.0)) * adjoint(k)
        v = complex_gaussian(rng, (n, n))

        result = frames.orthogonal_combine(lam, gam, u, v, k, tol)
        rec.metric("formula_lower", result.formula_lower_bound)
        rec.metric("empirical_lower", result.certificate.lower_bound)
        rec.require(result.holds, "sigma_min(U)^2 A dominated and upper bound respected")

        vectors = random_unit_vectors(rng, n, defaults.QUADRATIC_FORM_SAMPLES)
        residual = _cross_term_residual(result.family, lam, gam, u, v, vectors)
        rec.metric("cross_term_residual", residual)
        rec.require(residual <= 1e-10 * max(1.0, result.certificate.upper_bound), "no cross terms")

        # {Lambda U} alone is still atomic for K
        alone = frames.orthogonal_combine(lam, frames.OperatorFamily.zeros(lam.space, n), u, np.zeros((n, n)), k, tol)
        rec.require(alone.holds, "{Lambda U} keeps the bound")


class ParsevalSumSuite(PropertySuite):
    name = "parseval-sum"
    default_trials = 50

    def run_trial(self, index, rng, tol, rec):
        n = int(rng.integers(2, 6))
        points = 2 * int(rng.integers(2, 5))
        lam, gam = orthogonal_pair(rng, points, n, defaults.DEFAULT_MAX_BLOCK, min_total=n)
        lam, gam = normalized(lam), normalized(gam)
        k = complex_gaussian(rng, (n, n))
        k = k * (float(rng.uniform(0.5, 1.0)) / spectral_norm(k))
        identity = np.eye(n)

        combined = frames.family_combine(lam, gam, identity, identity)
        vectors = random_unit_vectors(rng, n, defaults.SANDWICH_SAMPLES)
        energy = frames.energies(combined, vectors)
        image = np.sum(np.abs(vectors @ np.conj(k)) ** 2, axis=1)
        rec.metric("min_gap_lower", float(np.min(energy - 2 * image)))
        rec.metric("max_energy", float(np.max(energy)))
        rec.require(np.all(2 * image <= energy + tol.scaled(2.0)), "2||K*f||^2 below the energy")
        rec.require(np.all(energy <= 2.0 + tol.scaled(2.0)), "energy below 2||f||^2")

        operator_gap = spectral_norm(frames.frame_operator(combined) - 2 * identity)
        rec.metric("operator_gap", operator_gap)
        rec.require(operator_gap <= tol.scaled(2.0), "combined frame operator is 2I")
        rec.require(frames.orthogonal_combine(lam, gam, identity, identity, k, tol).holds, "combination bound holds")


class RangeCombineSuite(PropertySuite):
    name = "range-combine"
    default_trials = 100

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng, points_range=(4, 11))
        lam, gam, k = _orthogonal_instance(rng, n, points)
        if index % 2 == 0:
            u1 = u2 = np.eye(n)
        else:
            c1, c2 = rng.uniform(0.1, 1.0, 2)
            u1 = np.eye(n) + c1 * frames.frame_operator(lam)
            u2 = np.eye(n) + c2 * frames.frame_operator(gam)

        result = frames.range_combine(lam, gam, u1, u2, k, tol)
        rec.metric("formula_lower", result.formula_lower_bound)
        rec.metric("empirical_lower", result.certificate.lower_bound)
        rec.require(result.holds, "1/lambda_1 + 1/lambda_2 dominated")
        rec.require(result.residuals["cross_term"] <= tol.scaled(result.certificate.upper_bound), "no cross terms")

        if index % 2 == 0:
            plain = frames.orthogonal_combine(lam, gam, u1, u2, k, tol)
            a, b = plain.certificate.lower_bound, result.certificate.lower_bound
            same = (is_unconstrained(a) and is_unconstrained(b)) or (
                not is_unconstrained(a) and not is_unconstrained(b) and abs(a - b) <= tol.scaled(a)
            )
            rec.require(same, "U1 = U2 = I matches the plain sum")


class PositivePerturbSuite(PropertySuite):
    name = "positive-perturb"
    default_trials = 100

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng)
        space = random_space(rng, points, defaults.DEFAULT_MAX_BLOCK)
        family = random_family(rng, space, n, rank=int(rng.integers(1, n + 1)))
        k = operator_in_range(rng, family)
        s = frames.frame_operator(family)
        power = 1 + index % 3

        if index % 4 == 0:
            u = np.zeros((n, n), dtype=complex)
        else:
            coefficients = rng.uniform(0.0, 1.0, 3)
            u = coefficients[0] * np.eye(n) + coefficients[1] * s + coefficients[2] * s @ s
            u = u / max(1.0, spectral_norm(u))
            u = (u + adjoint(u)) / 2

        result = frames.positive_perturb(family, u, power, k, tol)
        rec.metric("original_lower", result.formula_lower_bound)
        rec.metric("perturbed_lower", result.certificate.lower_bound)
        rec.metric("frame_operator_residual", result.residuals["frame_operator"])
        rec.require(result.holds, "perturbed frame operator dominates S")


class RestrictedDualSuite(PropertySuite):
    name = "restricted-dual"
    default_trials = 100

    def run_trial(self, index, rng, tol, rec):
        n, points = _dims(rng)
        space = random_space(rng, points, defaults.DEFAULT_MAX_BLOCK, min_total=n)
        family = random_family(rng, space, n)
        k = low_rank_operator(rng, n, 1 + index % n)
        dual, _ = frames.canonical_dual(family, k, tol)

        result = frames.restricted_dual_frame(family, dual, k, tol)
        rec.metric("rank", result.basis.shape[1])
        rec.metric("lower", result.certificate.lower_bound)
        rec.metric("upper", result.certificate.upper_bound)
        rec.metric("formula_upper", result.formula_upper_bound)
        rec.metric("proof_lower", result.proof_lower_bound)
        rec.metric("reconstruction_residual", result.reconstruction_residual)
        rec.require(result.holds, "compressed dual is a frame on ran(K)")


SUITE_CLASSES: Dict[str, Type[PropertySuite]] = {
    cls.name: cls
    for cls in (
        DouglasSuite,
        FrameBoundsSuite,
        DualCharacterizationSuite,
        DualFloorSuite,
        SubspaceDualSuite,
        AtomicEquivalenceSuite,
        OperatorAlgebraSuite,
        OrthogonalCombineSuite,
        ParsevalSumSuite,
        RangeCombineSuite,
        PositivePerturbSuite,
        RestrictedDualSuite,
    )
}


def get_suite(name: str) -> PropertySuite:
    if name not in SUITE_CLASSES:
        raise UnknownSuiteError(f"unknown suite {name!r}; choose from all, {', '.join(get_all_suite_names())}")
    return SUITE_CLASSES[name]()
