"""Statistical checks, verification suites, reports and the command-line surface."""

from src.harness.registry import SUITES, Outcome, register
from src.harness.report import CheckRecord, Report
from src.harness.stats import ks_one_sample, ks_two_sample, moment_check
from src.harness.suites import run_check, run_suite

__all__ = [
    "SUITES",
    "CheckRecord",
    "Outcome",
    "Report",
    "ks_one_sample",
    "ks_two_sample",
    "moment_check",
    "register",
    "run_check",
    "run_suite",
]
