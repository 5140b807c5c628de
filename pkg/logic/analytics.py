import pandas as pd
import numpy as np
from logic.verification.models import SuiteResult


def trial_table(result: SuiteResult) -> pd.DataFrame:
    """
    One row per trial, indexed by trial number, with columns:
    - Passed (Bool)
    - Failures (number of failed assertions)
    - every metric the suite recorded
    """
    if not result.trials:
        return pd.DataFrame()

    df = result.metrics_frame()
    trials = sorted(result.trials, key=lambda trial: trial.index)
    df.insert(0, "Passed", [trial.passed for trial in trials])
    df.insert(1, "Failures", [len(trial.failures) for trial in trials])
    df.index.name = "Trial"
    return df


def get_failed_trials(table: pd.DataFrame) -> pd.DataFrame:
    """
    Returns only the trials that failed, most failures first.
    """
    if table.empty:
        return table
    return table[~table["Passed"].astype(bool)].sort_values("Failures", ascending=False, kind="stable")


def _as_number(value) -> float:
    if isinstance(value, (bool, np.bool_, int, float, np.integer, np.floating)):
        return float(value)
    return np.nan


def summarize_metrics(result: SuiteResult) -> dict:
    """
    min / max / mean of every numeric metric across trials.

    Booleans count as numbers (the mean is then a rate); "unconstrained" and
    missing entries are skipped.
    """
    frame = result.metrics_frame()
    summary = {}
    for column in sorted(frame.columns):
        values = frame[column].map(_as_number).astype(float)
        values = values[np.isfinite(values)]
        if values.empty:
            continue
        summary[column] = {
            "min": float(values.min()),
            "max": float(values.max()),
            "mean": float(values.mean()),
        }
    return summary


def failure_counts(result: SuiteResult) -> dict:
    """How often each assertion failed across the run."""
    labels = pd.Series([label for trial in result.trials for label in trial.failures], dtype=object)
    if labels.empty:
        return {}
    return {str(label): int(count) for label, count in labels.value_counts().sort_index().items()}
