"""Verification suites for the measure, Takagi and derivative identities."""

from .instances import STANDARD_CONFIGS, Instance, draw_instances, random_step, random_weights
from .report import (
    CheckFailure,
    SuiteResult,
    VerificationReport,
    load_report,
    save_report,
)
from .suites import SUITE_CHOICES, SUITES, run_suites

__all__ = [
    "CheckFailure",
    "Instance",
    "STANDARD_CONFIGS",
    "SUITES",
    "SUITE_CHOICES",
    "SuiteResult",
    "VerificationReport",
    "draw_instances",
    "load_report",
    "random_step",
    "random_weights",
    "run_suites",
    "save_report",
]
