"""Schedule validation, independent pricing and the brute-force optimum."""

from ccgtuc.oracle.oracle import OracleError, OracleResult, brute_force_optimal
from ccgtuc.oracle.schedule import (
    CheckMode,
    Schedule,
    StartupEvent,
    Violation,
    ViolationCode,
    cfbm_schedule_cost,
    classify_startup,
    igap,
    market_cost,
    schedule_cost,
    startup_events,
    validate_schedule,
)

__all__ = [
    "CheckMode",
    "OracleError",
    "OracleResult",
    "Schedule",
    "StartupEvent",
    "Violation",
    "ViolationCode",
    "brute_force_optimal",
    "cfbm_schedule_cost",
    "classify_startup",
    "igap",
    "market_cost",
    "schedule_cost",
    "startup_events",
    "validate_schedule",
]
