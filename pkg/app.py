import argparse
import logging
import sys
from typing import List, Optional

from logic import defaults
from logic.errors import InstanceError, UnknownProfileError, UnknownSuiteError
from logic.generator import get_all_profile_names
from logic.verification.suites import get_all_suite_names
from ui import check, dual, generate, suite
from ui.utils import configure_logging

logger = logging.getLogger("app")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="app.py",
        description="Verify continuous K-g-frame constructions on discretized measure spaces.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_const", const=1, dest="verbosity", default=0)
    verbosity.add_argument("-q", "--quiet", action="store_const", const=-1, dest="verbosity")
    commands = parser.add_subparsers(dest="command", required=True)

    # --- check ---
    p_check = commands.add_parser("check", help="run the checks listed in an instance file")
    p_check.add_argument("file")
    p_check.add_argument("--tol", type=float, default=None, help=f"relative tolerance (default {defaults.DEFAULT_REL_TOL})")
    p_check.add_argument("--report", default=None, help="report path (default: stdout)")
    p_check.add_argument("--timings", action="store_true", help="include elapsed seconds in the report")
    p_check.set_defaults(handler=check.run_check_command)

    # --- gen ---
    p_gen = commands.add_parser("gen", help="write a seeded random instance")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--profile", required=True, help=", ".join(get_all_profile_names()))
    p_gen.add_argument("--n", type=int, default=defaults.DEFAULT_DOMAIN_DIM)
    p_gen.add_argument("--points", type=int, default=defaults.DEFAULT_POINTS)
    p_gen.add_argument("--maxblock", type=int, default=defaults.DEFAULT_MAX_BLOCK)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(handler=generate.run_gen_command)

    # --- dual ---
    p_dual = commands.add_parser("dual", help="add the canonical dual of a family to an instance")
    p_dual.add_argument("file")
    p_dual.add_argument("--family", required=True)
    p_dual.add_argument("--operator", required=True)
    p_dual.add_argument("--out", required=True)
    p_dual.set_defaults(handler=dual.run_dual_command)

    # --- suite ---
    p_suite = commands.add_parser("suite", help="run a randomized property suite")
    p_suite.add_argument("name", help="all, " + ", ".join(get_all_suite_names()))
    p_suite.add_argument("--trials", type=int, default=None, help="trials per suite (default: per-suite count)")
    p_suite.add_argument("--seed", type=int, required=True)
    p_suite.add_argument("--tol", type=float, default=None)
    p_suite.add_argument("--report", default=None)
    p_suite.add_argument("--timings", action="store_true")
    p_suite.set_defaults(handler=suite.run_suite_command)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return EXIT_USAGE if exc.code else EXIT_PASS

    configure_logging(args.verbosity)
    try:
        return args.handler(args)
    except (InstanceError, UnknownProfileError, UnknownSuiteError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
