import unittest

import pandas as pd

from logic import analytics
from logic.errors import HypothesisFailedError, UnknownSuiteError
from logic.verification.engine import SuiteEngine, build_suite_report
from logic.verification.models import SuiteResult, TrialResult
from logic.verification.suites import (
    SUITE_CLASSES,
    PropertySuite,
    get_all_suite_names,
    get_suite,
)


class FlakySuite(PropertySuite):
    """Fails every odd trial, once through an assertion and once through a library error."""
    name = "flaky"
    default_trials = 4

    def run_trial(self, index, rng, tol, rec):
        rec.metric("draw", rng.uniform())
        if index == 1:
            rec.require(False, "odd trial")
        if index == 3:
            raise HypothesisFailedError("commuting", "planted")


class TestSuiteEngine(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.engine = SuiteEngine(7)
        cls.results = cls.engine.run("all", trials=2)

    def test_should_run_every_suite_in_order_given_all(self):
        self.assertEqual([r.name for r in self.results], get_all_suite_names())
        self.assertEqual(len(self.results), 12)
        self.assertEqual(set(SUITE_CLASSES), set(get_all_suite_names()))

    def test_should_pass_every_suite_given_small_run(self):
        failures = {r.name: [t.failures for t in r.trials if not t.passed] for r in self.results if not r.passed}

        self.assertEqual(failures, {})

    def test_should_reproduce_trials_given_suite_run_alone(self):
        # Precondition: same seed, suite run outside "all"
        alone = SuiteEngine(7).run_suite("dual-floor", trials=2)
        together = next(r for r in self.results if r.name == "dual-floor")

        # Postcondition
        pd.testing.assert_frame_equal(alone.metrics_frame(), together.metrics_frame())

    def test_should_change_trials_given_different_seed(self):
        first = SuiteEngine(7).run_suite("douglas", trials=2).metrics_frame()
        second = SuiteEngine(8).run_suite("douglas", trials=2).metrics_frame()

        self.assertFalse(first.equals(second))

    def test_should_raise_given_unknown_suite_or_bad_arguments(self):
        with self.assertRaises(UnknownSuiteError):
            self.engine.run_suite("frames")
        with self.assertRaises(UnknownSuiteError):
            get_suite("frames")
        with self.assertRaises(ValueError):
            self.engine.run_suite("douglas", trials=0)
        with self.assertRaises(ValueError):
            SuiteEngine(-1)

    def test_should_use_default_trial_count_given_no_override(self):
        self.assertEqual(get_suite("parseval-sum").default_trials, 50)
        self.assertEqual(get_suite("atomic-equivalence").default_trials, 500)

    def test_should_calculate_stats_given_passing_run(self):
        stats = self.engine.calculate_stats(self.results[0])

        self.assertEqual(stats["trials"], 2)
        self.assertEqual(stats["passed"], 2)
        self.assertEqual(stats["pass_rate"], 1.0)
        self.assertEqual(stats["failure_counts"], {})
        self.assertIn("residual", stats["metrics"])

    def test_should_build_report_given_results(self):
        report = build_suite_report(self.engine, self.results)

        self.assertEqual(report["provenance"]["seed"], 7)
        self.assertEqual(report["summary"], {"passed": 12, "failed": 0, "total": 12})
        self.assertEqual(report["suites"]["douglas"]["failed_trials"], [])
        self.assertNotIn("elapsed_seconds", report["suites"]["douglas"])

        timed = build_suite_report(self.engine, self.results, timings=True)
        self.assertGreaterEqual(timed["suites"]["douglas"]["elapsed_seconds"], 0.0)


class TestFailingTrials(unittest.TestCase):

    def setUp(self):
        # Precondition: run the flaky suite through the engine's trial runner
        engine = SuiteEngine(3)
        suite = FlakySuite()
        trials = [engine._run_single_trial(suite, 0, t) for t in range(suite.default_trials)]
        self.result = SuiteResult(name="flaky", seed=3, trials=trials)

    def test_should_record_failures_given_assertion_or_library_error(self):
        self.assertEqual(self.result.failed_count, 2)
        self.assertFalse(self.result.passed)
        self.assertEqual(self.result.trials[1].failures, ["odd trial"])
        self.assertTrue(self.result.trials[3].failures[0].startswith("HypothesisFailedError"))

    def test_should_list_failed_trials_given_table(self):
        table = analytics.trial_table(self.result)
        failed = analytics.get_failed_trials(table)

        self.assertEqual(list(table.columns[:2]), ["Passed", "Failures"])
        self.assertEqual(sorted(failed.index), [1, 3])

    def test_should_report_failed_trials_given_flaky_suite(self):
        report = build_suite_report(SuiteEngine(3), [self.result])

        failed = report["suites"]["flaky"]["failed_trials"]
        self.assertEqual([entry["trial"] for entry in failed], [1, 3])
        self.assertEqual(failed[0]["failures"], ["odd trial"])
        self.assertEqual(report["summary"], {"passed": 0, "failed": 1, "total": 1})

    def test_should_order_failed_trials_by_failure_count(self):
        # Precondition: trial 2 fails twice, trial 0 once
        result = SuiteResult(name="manual", seed=0, trials=[
            TrialResult(0, False, {"x": 1.0}, ["a"]),
            TrialResult(1, True, {"x": 2.0}),
            TrialResult(2, False, {}, ["a", "b"]),
        ])

        # Under test
        report = build_suite_report(SuiteEngine(0), [result])

        # Postcondition
        self.assertEqual([entry["trial"] for entry in report["suites"]["manual"]["failed_trials"]], [2, 0])

    def test_should_count_failures_by_label(self):
        counts = analytics.failure_counts(self.result)

        self.assertEqual(counts["odd trial"], 1)
        self.assertEqual(sum(counts.values()), 2)


class TestSummarizeMetrics(unittest.TestCase):

    def test_should_skip_unconstrained_and_average_booleans(self):
        # Precondition
        result = SuiteResult(name="manual", seed=0, trials=[
            TrialResult(0, True, {"lower": 1.0, "frame": True}),
            TrialResult(1, True, {"lower": "unconstrained", "frame": False}),
            TrialResult(2, True, {"lower": 3.0, "frame": True}),
        ])

        # Under test
        summary = analytics.summarize_metrics(result)

        # Postcondition
        self.assertEqual(summary["lower"], {"min": 1.0, "max": 3.0, "mean": 2.0})
        self.assertAlmostEqual(summary["frame"]["mean"], 2 / 3)

    def test_should_return_empty_given_no_trials(self):
        empty = SuiteResult(name="empty", seed=0, trials=[])

        self.assertTrue(analytics.trial_table(empty).empty)
        self.assertEqual(analytics.failure_counts(empty), {})


if __name__ == '__main__':
    unittest.main()
