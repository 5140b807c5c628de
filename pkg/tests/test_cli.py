import contextlib
import io
import json
import os
import tempfile
import unittest

from app import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main
from logic import persistence


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.directory = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def path(self, name):
        return os.path.join(self.directory, name)

    def load(self, path):
        with open(path) as handle:
            return json.load(handle)

    def run_main(self, *argv):
        out = io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
            code = main(["-q", *argv])
        return code, out.getvalue()

    def test_should_generate_and_check_given_ckg_profile(self):
        # Precondition
        code, _ = self.run_main("gen", "--seed", "42", "--profile", "ckg", "--out", self.path("ckg.json"))
        self.assertEqual(code, EXIT_PASS)

        # Under test
        code, text = self.run_main("check", self.path("ckg.json"))

        # Postcondition
        self.assertEqual(code, EXIT_PASS)
        report = json.loads(text)
        self.assertEqual(report["summary"]["failed"], 0)
        self.assertNotIn("elapsed_seconds", report["checks"]["bounds"])

    def test_should_write_identical_files_given_same_seed(self):
        for name in ("a.json", "b.json"):
            self.run_main("gen", "--seed", "9", "--profile", "subspace", "--out", self.path(name))

        with open(self.path("a.json")) as a, open(self.path("b.json")) as b:
            self.assertEqual(a.read(), b.read())

    def test_should_exit_one_given_failing_expectation(self):
        self.run_main("gen", "--seed", "3", "--profile", "not-a-frame", "--out", self.path("bad.json"))
        data = self.load(self.path("bad.json"))
        data["checks"][0]["params"]["expect"] = "positive"
        with open(self.path("bad.json"), "w") as handle:
            json.dump(data, handle)

        code, _ = self.run_main("check", self.path("bad.json"), "--report", self.path("report.json"), "--timings")

        self.assertEqual(code, EXIT_FAIL)
        report = self.load(self.path("report.json"))
        self.assertEqual(report["checks"]["bounds"]["verdict"], "fail")
        self.assertIn("elapsed_seconds", report["checks"]["bounds"])

    def test_should_exit_two_given_unreadable_or_invalid_input(self):
        with open(self.path("broken.json"), "w") as handle:
            handle.write("{ not json")

        self.assertEqual(self.run_main("check", self.path("broken.json"))[0], EXIT_USAGE)
        self.assertEqual(self.run_main("check", self.path("missing.json"))[0], EXIT_USAGE)
        self.assertEqual(self.run_main("gen", "--seed", "1", "--profile", "nope", "--out", self.path("x.json"))[0],
                         EXIT_USAGE)
        self.assertEqual(self.run_main("gen", "--seed", "1", "--profile", "ckg", "--n", "40",
                                       "--out", self.path("x.json"))[0], EXIT_USAGE)
        self.assertEqual(self.run_main("suite", "nope", "--seed", "1")[0], EXIT_USAGE)
        self.assertEqual(self.run_main("frobnicate")[0], EXIT_USAGE)

    def test_should_add_verified_dual_given_ckg_instance(self):
        self.run_main("gen", "--seed", "5", "--profile", "ckg", "--out", self.path("ckg.json"))

        # Under test
        code, _ = self.run_main("dual", self.path("ckg.json"), "--family", "Lambda", "--operator", "K",
                                "--out", self.path("dual.json"))

        # Postcondition
        self.assertEqual(code, EXIT_PASS)
        instance = persistence.parse_instance(self.path("dual.json"))
        self.assertIn("Lambda_dual", instance.families)
        self.assertEqual(instance.checks[-1].kind, "verify_dual")
        self.assertEqual(self.run_main("check", self.path("dual.json"))[0], EXIT_PASS)

        # A second run would overwrite the dual
        code, _ = self.run_main("dual", self.path("dual.json"), "--family", "Lambda", "--operator", "K",
                                "--out", self.path("again.json"))
        self.assertEqual(code, EXIT_USAGE)

    def test_should_exit_one_given_dual_of_non_frame(self):
        self.run_main("gen", "--seed", "5", "--profile", "not-a-frame", "--out", self.path("bad.json"))

        code, _ = self.run_main("dual", self.path("bad.json"), "--family", "Lambda", "--operator", "K",
                                "--out", self.path("dual.json"))

        self.assertEqual(code, EXIT_FAIL)
        self.assertFalse(os.path.exists(self.path("dual.json")))

    def test_should_report_suite_given_small_trial_count(self):
        code, _ = self.run_main("suite", "douglas", "--seed", "1", "--trials", "3",
                                "--report", self.path("suite.json"))

        self.assertEqual(code, EXIT_PASS)
        report = self.load(self.path("suite.json"))
        self.assertEqual(list(report["suites"]), ["douglas"])
        self.assertEqual(report["suites"]["douglas"]["stats"]["trials"], 3)


    def test_should_write_identical_reports_given_repeated_suite_run(self):
        for name in ("first.json", "second.json"):
            code, _ = self.run_main("suite", "all", "--trials", "5", "--seed", "123", "--report", self.path(name))
            self.assertEqual(code, EXIT_PASS)

        with open(self.path("first.json"), "rb") as a, open(self.path("second.json"), "rb") as b:
            self.assertEqual(a.read(), b.read())



if __name__ == '__main__':
    unittest.main()
