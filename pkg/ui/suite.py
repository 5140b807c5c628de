import logging

from logic.verification.engine import SuiteEngine, build_suite_report
from ui.utils import emit_report, tolerance_from_args

logger = logging.getLogger(__name__)


def run_suite_command(args) -> int:
    engine = SuiteEngine(args.seed, tolerance_from_args(args.tol))
    results = engine.run(args.name, args.trials)
    emit_report(build_suite_report(engine, results, timings=args.timings), args.report)

    failed = [r for r in results if not r.passed]
    for result in failed:
        logger.warning("suite %s: %d of %d trials failed", result.name, result.failed_count, len(result.trials))
    return 1 if failed else 0
