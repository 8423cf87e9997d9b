"""Instance files, property suites and the command-line interface."""

from .instances import (
    InstanceSpec,
    SpecFormatError,
    random_invariant_subspace,
    random_nest_algebra,
    random_spec,
)
from .suites import SUITES, CheckRecord, Report, UsageError, control_algebra, run_suite

__all__ = [
    "InstanceSpec",
    "SpecFormatError",
    "random_invariant_subspace",
    "random_nest_algebra",
    "random_spec",
    "SUITES",
    "CheckRecord",
    "Report",
    "UsageError",
    "control_algebra",
    "run_suite",
]
