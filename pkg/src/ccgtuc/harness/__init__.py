"""System instances, regular units, variant comparisons and the command line."""

from ccgtuc.harness.instance import InstanceError, RegularUnit, SystemInstance, load_instance
from ccgtuc.harness.report import SolveReport, compare, emit_report
from ccgtuc.harness.system import build_system, extract_schedules, validate_system

__all__ = [
    "InstanceError",
    "RegularUnit",
    "SolveReport",
    "SystemInstance",
    "build_system",
    "compare",
    "emit_report",
    "extract_schedules",
    "load_instance",
    "validate_system",
]
