"""Batch runs over seeded worlds and the metrics reported from them."""

from .metrics import (
    CSV_COLUMNS,
    EmptyInput,
    Metrics,
    compute_metrics,
    episode_row,
    episodes_csv,
    improvement,
    improvements,
    metrics_by_cell,
    per_example,
    summary_json,
    summary_markdown,
)
from .runner import load_log, load_logs, log_path, run_batch, run_one
from .suite import POLICIES, Cell, SuiteConfig, SuiteError, make_policy, register_policy

__all__ = [
    "CSV_COLUMNS",
    "POLICIES",
    "Cell",
    "EmptyInput",
    "Metrics",
    "SuiteConfig",
    "SuiteError",
    "compute_metrics",
    "episode_row",
    "episodes_csv",
    "improvement",
    "improvements",
    "load_log",
    "load_logs",
    "log_path",
    "make_policy",
    "metrics_by_cell",
    "per_example",
    "register_policy",
    "run_batch",
    "run_one",
    "summary_json",
    "summary_markdown",
]
