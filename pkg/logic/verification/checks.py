"""
Runs the checks listed in an instance file.

Each check kind names the families and operators it uses in its params; the
handlers resolve those names, call the frame library and turn the result
into a CheckOutcome. A check passes when its certificate is internally
consistent and its verdict matches the request's "expect" param:
"positive" (the default), "negative" or "any".
"""

import logging
import time
from typing import Any, Callable, Dict, List, Optional

from logic import defaults, frames
from logic.errors import FrameError, SchemaError
from logic.frames.models import FrameCertificate, OperatorFamily, TheoremCertificate
from logic.linalg_core import LinearMap, Tolerance, bound_to_json, is_unconstrained, spectral_norm
from logic.verification.models import CheckOutcome, CheckRequest, Instance

logger = logging.getLogger(__name__)

EXPECTATIONS = ("positive", "negative", "any")


# --- Name resolution ---

def _family(instance: Instance, request: CheckRequest, key: str = "family") -> OperatorFamily:
    name = request.params.get(key)
    if name not in instance.families:
        raise SchemaError(f"checks.{request.name}.params.{key}", f"unknown family {name!r}")
    return instance.families[name]


def _operator(instance: Instance, request: CheckRequest, key: str = "operator") -> LinearMap:
    name = request.params.get(key)
    if name not in instance.operators:
        raise SchemaError(f"checks.{request.name}.params.{key}", f"unknown operator {name!r}")
    return instance.operators[name]


def _scalar(request: CheckRequest, key: str) -> complex:
    value = request.params.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float, list)):
        raise SchemaError(f"checks.{request.name}.params.{key}", "expected a number or [re, im]")
    if isinstance(value, list):
        if len(value) != 2:
            raise SchemaError(f"checks.{request.name}.params.{key}", "expected [re, im]")
        return complex(value[0], value[1])
    return complex(value)


def _right_operand(instance: Instance, request: CheckRequest) -> LinearMap:
    """L2 is either a named operator or the synthesis matrix of a named family."""
    if "right_family" in request.params:
        return frames.synthesis_matrix(_family(instance, request, "right_family"))
    return _operator(instance, request, "right")


# --- Outcome helpers ---

def _frame_bounds_entry(certificate: FrameCertificate) -> Dict[str, Any]:
    return {
        "lower": bound_to_json(certificate.lower_bound),
        "upper": certificate.upper_bound,
        "bessel_bound": certificate.bessel_bound,
        "is_bessel": certificate.is_bessel,
        "is_ckg_frame": certificate.is_ckg_frame,
        "is_tight": certificate.is_tight,
        "is_parseval": certificate.is_parseval,
    }


def _theorem_outcome(result: TheoremCertificate, prefix: str = "") -> Dict[str, Any]:
    formula = result.formula_lower_bound
    return {
        "bounds": {f"{prefix}{k}": v for k, v in _frame_bounds_entry(result.certificate).items()},
        "residuals": {f"{prefix}{k}": v for k, v in {**result.certificate.residuals, **result.residuals}.items()},
        "comparisons": {
            f"{prefix}formula_lower": bound_to_json(formula),
            f"{prefix}empirical_lower": bound_to_json(result.certificate.lower_bound),
            f"{prefix}formula_upper": result.formula_upper_bound,
            f"{prefix}empirical_upper": result.certificate.upper_bound,
            f"{prefix}holds": result.holds,
        },
        "positive": result.holds,
        "consistent": True,
    }


def _sandwich_consistent(certificate: FrameCertificate, scale: float, tol: Tolerance) -> bool:
    return (
        certificate.residuals.get("sandwich_lower", 0.0) <= tol.scaled(scale)
        and certificate.residuals.get("sandwich_upper", 0.0) <= tol.scaled(scale)
    )


# --- Handlers: each returns a dict with bounds/residuals/comparisons, "positive" and "consistent" ---

def _check_frame_bounds(instance, request, tol):
    family = _family(instance, request)
    certificate = frames.frame_bounds(family, _operator(instance, request), tol)
    return {
        "bounds": _frame_bounds_entry(certificate),
        "residuals": certificate.residuals,
        "positive": certificate.is_ckg_frame,
        "consistent": _sandwich_consistent(certificate, certificate.upper_bound, tol),
    }


def _check_douglas(instance, request, tol):
    left = _operator(instance, request, "left")
    solution = frames.douglas_solve(left, _right_operand(instance, request), tol)
    norm_gap = abs(solution.norm_sq - solution.pencil_norm_sq)
    consistent = (
        solution.residual <= tol.scaled(spectral_norm(left))
        and norm_gap <= defaults.NORM_MATCH_REL * max(1.0, solution.norm_sq)
        and solution.null_match
        and solution.range_ok
    )
    return {
        "bounds": {"norm_sq": solution.norm_sq, "pencil_norm_sq": solution.pencil_norm_sq},
        "residuals": {
            "factorization": solution.residual,
            "norm_gap": norm_gap,
            "adjoint_range": solution.range_residual,
        },
        "comparisons": {"null_match": solution.null_match, "range_ok": solution.range_ok},
        "positive": True,
        "consistent": consistent,
    }


def _check_equivalence(instance, request, tol):
    result = frames.equivalence_check(_operator(instance, request, "left"), _right_operand(instance, request), tol)
    return {
        "bounds": {"majorization_constant": bound_to_json(result.majorization_constant)},
        "residuals": result.residuals,
        "comparisons": {
            "range_included": result.range_included,
            "majorized": result.majorized,
            "factorizable": result.factorizable,
        },
        "positive": result.range_included,
        "consistent": result.agree,
    }


def _check_verify_dual(instance, request, tol):
    certificate = frames.verify_dual(
        _family(instance, request), _family(instance, request, "dual"), _operator(instance, request), tol
    )
    return {
        "bounds": {
            "synthesis_norm_sq": certificate.synthesis_norm_sq,
            "floor": certificate.floor,
            "optimal_lower": bound_to_json(certificate.optimal_lower_bound),
            "gamma_bessel": certificate.gamma_bessel_bound,
        },
        "residuals": {"duality": certificate.duality_residual},
        "positive": certificate.is_valid,
        "consistent": True,
    }


def _check_canonical_dual(instance, request, tol):
    family = _family(instance, request)
    _, certificate = frames.canonical_dual(family, _operator(instance, request), tol)
    lower = certificate.optimal_lower_bound
    product = None if is_unconstrained(lower) else certificate.synthesis_norm_sq * lower
    consistent = certificate.is_valid and (product is None or abs(product - 1.0) <= defaults.DUAL_NORM_REL_SLACK)
    return {
        "bounds": {
            "synthesis_norm_sq": certificate.synthesis_norm_sq,
            "floor": certificate.floor,
            "optimal_lower": bound_to_json(lower),
        },
        "residuals": {"duality": certificate.duality_residual},
        "comparisons": {"norm_times_lower": product},
        "positive": True,
        "consistent": consistent,
    }


def _check_dual_norm_floor(instance, request, tol):
    floor = frames.dual_norm_floor(_family(instance, request), _operator(instance, request), tol)
    return {"bounds": {"floor": floor}, "positive": True, "consistent": True}


def _check_subspace_dual(instance, request, tol):
    result = frames.subspace_dual_bound(
        _family(instance, request), _family(instance, request, "dual"), _operator(instance, request), tol
    )
    return _theorem_outcome(result)


def _check_atomic(instance, request, tol):
    certificate = frames.atomic_check(_family(instance, request), _operator(instance, request), tol)
    return {
        "bounds": {"minimal_C": certificate.minimal_C, "is_ckg_frame": certificate.is_ckg_frame},
        "residuals": {"reconstruction": certificate.reconstruction_residual},
        "comparisons": {
            "is_atomic": certificate.is_atomic,
            "agrees": certificate.equivalence_agrees,
            "C_squared_times_lower": certificate.bound_product,
        },
        "positive": certificate.is_atomic,
        "consistent": certificate.equivalence_agrees,
    }


def _check_operator_algebra(instance, request, tol):
    result = frames.operator_algebra_bounds(
        _family(instance, request),
        _operator(instance, request, "k1"),
        _operator(instance, request, "k2"),
        _scalar(request, "alpha"),
        _scalar(request, "beta"),
        tol,
    )
    sum_part = _theorem_outcome(result.sum_result, "sum_")
    product_part = _theorem_outcome(result.product_result, "product_")
    return {
        "bounds": {**sum_part["bounds"], **product_part["bounds"]},
        "residuals": {**sum_part["residuals"], **product_part["residuals"]},
        "comparisons": {**sum_part["comparisons"], **product_part["comparisons"]},
        "positive": result.holds,
        "consistent": True,
    }


def _check_orthogonal_combine(instance, request, tol):
    result = frames.orthogonal_combine(
        _family(instance, request),
        _family(instance, request, "other"),
        _operator(instance, request, "u"),
        _operator(instance, request, "v"),
        _operator(instance, request),
        tol,
    )
    return _theorem_outcome(result)


def _check_range_combine(instance, request, tol):
    result = frames.range_combine(
        _family(instance, request),
        _family(instance, request, "other"),
        _operator(instance, request, "u1"),
        _operator(instance, request, "u2"),
        _operator(instance, request),
        tol,
    )
    return _theorem_outcome(result)


def _check_positive_perturb(instance, request, tol):
    power = request.params.get("power", 1)
    if isinstance(power, bool) or not isinstance(power, int):
        raise SchemaError(f"checks.{request.name}.params.power", "expected an integer")
    result = frames.positive_perturb(
        _family(instance, request), _operator(instance, request, "u"), power, _operator(instance, request), tol
    )
    return _theorem_outcome(result)


def _check_restricted_dual(instance, request, tol):
    result = frames.restricted_dual_frame(
        _family(instance, request), _family(instance, request, "dual"), _operator(instance, request), tol
    )
    return {
        "bounds": {
            **_frame_bounds_entry(result.certificate),
            "rank": int(result.basis.shape[1]),
        },
        "residuals": {
            "reconstruction": result.reconstruction_residual,
            "adjoint": result.adjoint_residual,
        },
        "comparisons": {
            "formula_upper": result.formula_upper_bound,
            "empirical_upper": result.certificate.upper_bound,
            "proof_lower": result.proof_lower_bound,
            "empirical_lower": bound_to_json(result.certificate.lower_bound),
        },
        "positive": result.holds,
        "consistent": True,
    }


CheckHandler = Callable[[Instance, CheckRequest, Tolerance], Dict[str, Any]]

CHECK_HANDLERS: Dict[str, CheckHandler] = {
    "frame_bounds": _check_frame_bounds,
    "douglas": _check_douglas,
    "equivalence": _check_equivalence,
    "verify_dual": _check_verify_dual,
    "canonical_dual": _check_canonical_dual,
    "dual_norm_floor": _check_dual_norm_floor,
    "subspace_dual": _check_subspace_dual,
    "atomic": _check_atomic,
    "operator_algebra": _check_operator_algebra,
    "orthogonal_combine": _check_orthogonal_combine,
    "range_combine": _check_range_combine,
    "positive_perturb": _check_positive_perturb,
    "restricted_dual": _check_restricted_dual,
}


def get_all_check_kinds() -> List[str]:
    return list(CHECK_HANDLERS.keys())


def _expectation(request: CheckRequest) -> str:
    expect = request.params.get("expect", "positive")
    if expect not in EXPECTATIONS:
        raise SchemaError(f"checks.{request.name}.params.expect", f"must be one of {EXPECTATIONS}")
    return expect


def validate_checks(instance: Instance) -> None:
    """Reject unknown kinds and bad expectations before anything runs."""
    for request in instance.checks:
        if request.kind not in CHECK_HANDLERS:
            raise SchemaError(f"checks.{request.name}.kind", f"unknown check kind {request.kind!r}")
        _expectation(request)


def run_check(instance: Instance, request: CheckRequest, tol: Tolerance = Tolerance()) -> CheckOutcome:
    """
    Run one check. Library errors become failed (or, when expected, passed)
    negative outcomes; instance errors such as unknown names propagate.
    """
    expect = _expectation(request)
    handler = CHECK_HANDLERS.get(request.kind)
    if handler is None:
        raise SchemaError(f"checks.{request.name}.kind", f"unknown check kind {request.kind!r}")

    start = time.perf_counter()
    try:
        result = handler(instance, request, tol)
        error: Optional[str] = None
    except SchemaError:
        raise
    except FrameError as exc:
        logger.debug("check %s raised %s: %s", request.name, type(exc).__name__, exc)
        result = {"positive": False, "consistent": True}
        error = f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start

    verdict_ok = expect == "any" or result["positive"] == (expect == "positive")
    passed = bool(result["consistent"] and verdict_ok)
    logger.info("check %s (%s): %s", request.name, request.kind, "pass" if passed else "FAIL")
    return CheckOutcome(
        name=request.name,
        kind=request.kind,
        passed=passed,
        bounds=dict(result.get("bounds", {})),
        residuals={k: float(v) for k, v in result.get("residuals", {}).items()},
        comparisons=dict(result.get("comparisons", {})),
        error=error,
        elapsed=elapsed,
    )


def run_checks(instance: Instance, tol: Tolerance = Tolerance()) -> List[CheckOutcome]:
    validate_checks(instance)
    return [run_check(instance, request, tol) for request in instance.checks]


def outcome_to_dict(outcome: CheckOutcome, timings: bool = False) -> Dict[str, Any]:
    entry: Dict[str, Any] = {
        "kind": outcome.kind,
        "verdict": "pass" if outcome.passed else "fail",
        "bounds": outcome.bounds,
        "residuals": outcome.residuals,
        "comparisons": outcome.comparisons,
    }
    if outcome.error is not None:
        entry["error"] = outcome.error
    if timings and outcome.elapsed is not None:
        entry["elapsed_seconds"] = outcome.elapsed
    return entry


def build_check_report(outcomes: List[CheckOutcome], tol: Tolerance, source: str,
                       timings: bool = False) -> Dict[str, Any]:
    passed = sum(1 for o in outcomes if o.passed)
    return {
        "schema_version": defaults.SCHEMA_VERSION,
        "provenance": {
            "schema_version": defaults.SCHEMA_VERSION,
            "source": source,
            "tolerance": {"rel": tol.rel, "abs": tol.abs},
        },
        "checks": {o.name: outcome_to_dict(o, timings) for o in outcomes},
        "summary": {"passed": passed, "failed": len(outcomes) - passed, "total": len(outcomes)},
    }
