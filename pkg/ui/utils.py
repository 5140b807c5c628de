import logging
import sys
from typing import Optional

from logic import defaults, persistence
from logic.linalg_core import Tolerance

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(verbosity: int = 0) -> None:
    """One stderr handler on the root logger; -v gives DEBUG, -q gives WARNING."""
    level = logging.INFO
    if verbosity > 0:
        level = logging.DEBUG
    elif verbosity < 0:
        level = logging.WARNING
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)


def tolerance_from_args(rel: Optional[float]) -> Tolerance:
    return Tolerance(rel=defaults.DEFAULT_REL_TOL if rel is None else rel, abs=defaults.DEFAULT_ABS_TOL)


def emit_report(report: dict, path: Optional[str]) -> None:
    """Write the report to path, or to stdout when no path is given."""
    text = persistence.write_report(report, path)
    if not path:
        sys.stdout.write(text)
