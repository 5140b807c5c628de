import logging

from logic import persistence
from logic.verification import checks
from ui.utils import emit_report, tolerance_from_args

logger = logging.getLogger(__name__)


def run_check_command(args) -> int:
    """Verify every check of an instance file; exit 0 only when all pass."""
    tol = tolerance_from_args(args.tol)
    instance = persistence.parse_instance(args.file)
    outcomes = checks.run_checks(instance, tol)
    report = checks.build_check_report(outcomes, tol, source=args.file, timings=args.timings)
    emit_report(report, args.report)

    failed = [o.name for o in outcomes if not o.passed]
    if failed:
        logger.warning("%d of %d checks failed: %s", len(failed), len(outcomes), ", ".join(failed))
        return 1
    return 0
