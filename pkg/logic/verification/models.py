from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from logic import defaults
from logic.block_space import MeasurePoints
from logic.frames.models import OperatorFamily
from logic.linalg_core import LinearMap

# Report values: plain floats, or "unconstrained" for a vacuous bound
Metric = Union[float, int, bool, str, None]


@dataclass
class CheckRequest:
    """One named check in an instance file."""
    name: str
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)  # names of families/operators, scalars, "expect"


@dataclass
class Instance:
    """A validated instance: one measure space, named families and operators, and the checks to run."""
    space: MeasurePoints
    families: Dict[str, OperatorFamily]
    operators: Dict[str, LinearMap]
    checks: List[CheckRequest] = field(default_factory=list)
    schema_version: str = defaults.SCHEMA_VERSION


@dataclass
class CheckOutcome:
    """Verdict of one instance check, ready for the report."""
    name: str
    kind: str
    passed: bool
    bounds: Dict[str, Metric] = field(default_factory=dict)
    residuals: Dict[str, float] = field(default_factory=dict)
    comparisons: Dict[str, Metric] = field(default_factory=dict)  # formula vs empirical
    error: Optional[str] = None
    elapsed: Optional[float] = None   # seconds; reported only with --timings


@dataclass
class TrialResult:
    """Outcome of one randomized trial of a property suite."""
    index: int
    passed: bool
    metrics: Dict[str, Metric] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)  # which assertions failed


@dataclass
class SuiteResult:
    """All trials of one suite run."""
    name: str
    seed: int
    trials: List[TrialResult]
    elapsed: Optional[float] = None

    @property
    def passed_count(self) -> int:
        return sum(1 for trial in self.trials if trial.passed)

    @property
    def failed_count(self) -> int:
        return len(self.trials) - self.passed_count

    @property
    def passed(self) -> bool:
        return self.failed_count == 0

    def metrics_frame(self) -> pd.DataFrame:
        """Rows: trials (by index), Cols: metric names."""
        frame = pd.DataFrame([trial.metrics for trial in self.trials], index=[trial.index for trial in self.trials])
        return frame.sort_index()
