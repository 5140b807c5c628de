import logging
import time
from typing import Any, Dict, List, Optional

import numpy as np

from logic import analytics, defaults
from logic.errors import FrameError, UnknownSuiteError
from logic.linalg_core import Tolerance
from logic.verification.models import SuiteResult, TrialResult
from logic.verification.suites import TrialRecorder, get_all_suite_names, get_suite, get_suite_description

logger = logging.getLogger(__name__)


class SuiteEngine:
    """
    Runs randomized property suites.

    Trial t of the suite at position s in the fixed suite order draws from
    numpy.random.default_rng([seed, s, t]), so a suite reproduces the same
    trials whether it runs alone or as part of "all".
    """

    def __init__(self, seed: int, tol: Optional[Tolerance] = None):
        """
        Args:
            seed: non-negative master seed
            tol: comparison tolerances (defaults when omitted)
        """
        if int(seed) != seed or seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
        self.seed = int(seed)
        self.tol = tol if tol is not None else Tolerance()

    def _trial_rng(self, suite_index: int, trial: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, suite_index, trial])

    def _run_single_trial(self, suite, suite_index: int, trial: int) -> TrialResult:
        rec = TrialRecorder()
        try:
            suite.run_trial(trial, self._trial_rng(suite_index, trial), self.tol, rec)
        except (FrameError, ValueError, np.linalg.LinAlgError) as exc:
            rec.failures.append(f"{type(exc).__name__}: {exc}")
        if rec.failures:
            logger.debug("%s trial %d failed: %s", suite.name, trial, "; ".join(rec.failures))
        return TrialResult(index=trial, passed=rec.passed, metrics=rec.metrics, failures=rec.failures)

    def run_suite(self, name: str, trials: Optional[int] = None) -> SuiteResult:
        names = get_all_suite_names()
        if name not in names:
            raise UnknownSuiteError(f"unknown suite {name!r}; choose from all, {', '.join(names)}")
        suite = get_suite(name)
        count = suite.default_trials if trials is None else int(trials)
        if count < 1:
            raise ValueError(f"trials must be at least 1, got {trials!r}")

        logger.info("running suite %s: %d trials, seed %d", name, count, self.seed)
        start = time.perf_counter()
        results = [self._run_single_trial(suite, names.index(name), t) for t in range(count)]
        result = SuiteResult(name=name, seed=self.seed, trials=results, elapsed=time.perf_counter() - start)
        logger.info("suite %s: %d/%d trials passed", name, result.passed_count, count)
        return result

    def run(self, name: str, trials: Optional[int] = None) -> List[SuiteResult]:
        """Run one suite, or every suite in order for name "all"."""
        names = get_all_suite_names() if name == "all" else [name]
        return [self.run_suite(n, trials) for n in names]

    def calculate_stats(self, result: SuiteResult) -> dict:
        """Summary statistics for one suite run."""
        if not result.trials:
            return {}
        return {
            "trials": len(result.trials),
            "passed": result.passed_count,
            "failed": result.failed_count,
            "pass_rate": result.passed_count / len(result.trials),
            "metrics": analytics.summarize_metrics(result),
            "failure_counts": analytics.failure_counts(result),
        }


def _failed_trials(result: SuiteResult) -> List[Dict[str, Any]]:
    """Failed trials, most failed assertions first."""
    by_index = {trial.index: trial for trial in result.trials}
    failed = analytics.get_failed_trials(analytics.trial_table(result))
    return [{"trial": int(index), "failures": by_index[index].failures} for index in failed.index]


def build_suite_report(engine: SuiteEngine, results: List[SuiteResult], timings: bool = False) -> Dict[str, Any]:
    suites: Dict[str, Any] = {}
    for result in results:
        entry = {
            "description": get_suite_description(result.name),
            "passed": result.passed,
            "stats": engine.calculate_stats(result),
            "failed_trials": _failed_trials(result),
        }
        if timings and result.elapsed is not None:
            entry["elapsed_seconds"] = result.elapsed
        suites[result.name] = entry

    passed = sum(1 for r in results if r.passed)
    return {
        "schema_version": defaults.SCHEMA_VERSION,
        "provenance": {
            "schema_version": defaults.SCHEMA_VERSION,
            "seed": engine.seed,
            "tolerance": {"rel": engine.tol.rel, "abs": engine.tol.abs},
        },
        "suites": suites,
        "summary": {"passed": passed, "failed": len(results) - passed, "total": len(results)},
    }
