"""
Verification machinery: instance checks, randomized property suites and the
engine that runs them.

Only the data models are re-exported here; import the engine, suites and
checks from their modules (the suites depend on logic.generator, which in
turn depends on these models).
"""

from logic.verification.models import (
    CheckRequest,
    Instance,
    CheckOutcome,
    TrialResult,
    SuiteResult,
)

__all__ = [
    "CheckRequest",
    "Instance",
    "CheckOutcome",
    "TrialResult",
    "SuiteResult",
]
