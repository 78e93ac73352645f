"""Direct schedule checking and pricing, independent of any MILP.

A schedule is a configuration per hour plus the output of each configuration.
Turbine statuses, starts, stops and startup warmth all follow from the
configuration path and the plant's initial state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from enum import Enum
from typing import Mapping, Sequence

from ccgtuc.plant import (
    CcgtPlant,
    PhysicalTurbine,
    PlantError,
    StartupTier,
    classify_warmth,
    derive_cfbm_costs,
    initial_plant_clock,
)

__all__ = [
    "Schedule",
    "StartupEvent",
    "Violation",
    "ViolationCode",
    "CheckMode",
    "validate_schedule",
    "classify_startup",
    "hottest_allowed_tier",
    "startup_events",
    "transition_events",
    "schedule_cost",
    "cfbm_schedule_cost",
    "market_cost",
    "turbine_status",
    "igap",
    "TOL",
]

TOL = 1e-6


class ViolationCode(str, Enum):
    EXCLUSIVITY = "EXCLUSIVITY"
    ILLEGAL_TRANSITION = "ILLEGAL_TRANSITION"
    CAPACITY = "CAPACITY"
    RAMP_UP = "RAMP_UP"
    RAMP_DOWN = "RAMP_DOWN"
    MIN_UP = "MIN_UP"
    MIN_DOWN = "MIN_DOWN"
    INIT_FIX = "INIT_FIX"
    START_CAP = "START_CAP"


class CheckMode(str, Enum):
    """Which operating rules a schedule must respect.

    ``hybrid`` checks everything; ``cfbm`` drops the per-turbine rules
    (minimum up/down, initial fixing, daily start caps); ``hm1`` adds
    per-turbine minimum up/down and initial fixing back.
    """

    HYBRID = "hybrid"
    CFBM = "cfbm"
    HM1 = "hm1"

    @property
    def turbine_min_times(self) -> bool:
        return self is not CheckMode.CFBM

    @property
    def start_caps(self) -> bool:
        return self is CheckMode.HYBRID


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    plant: str
    hour: int
    detail: str
    element: str = ""

    def __str__(self) -> str:
        where = f"{self.plant}/{self.element}" if self.element else self.plant
        return f"{self.code.value} at hour {self.hour} ({where}): {self.detail}"


@dataclass(frozen=True)
class Schedule:
    """Committed configuration and dispatch of one plant over the horizon.

    ``dispatch[t]`` maps configuration id to MW for hour ``t + 1``; only the
    active configuration should carry output.
    """

    plant: str
    config_path: tuple[str, ...]
    dispatch: tuple[Mapping[str, float], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "config_path", tuple(self.config_path))
        if not self.dispatch:
            object.__setattr__(self, "dispatch", tuple({} for _ in self.config_path))
        object.__setattr__(self, "dispatch", tuple(dict(d) for d in self.dispatch))
        if len(self.dispatch) != len(self.config_path):
            raise ValueError("dispatch and config_path lengths differ")

    @classmethod
    def from_outputs(cls, plant: str, config_path: Sequence[str], outputs: Sequence[float]) -> "Schedule":
        return cls(plant, tuple(config_path), tuple({y: float(p)} for y, p in zip(config_path, outputs)))

    @property
    def horizon(self) -> int:
        return len(self.config_path)

    @property
    def outputs(self) -> tuple[float, ...]:
        """Output of the active configuration each hour."""
        return tuple(d.get(y, 0.0) for y, d in zip(self.config_path, self.dispatch))

    def to_json(self) -> dict:
        return {
            "plant": self.plant,
            "config_path": list(self.config_path),
            "output": list(self.outputs),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Schedule":
        return cls.from_outputs(doc["plant"], doc["config_path"], doc["output"])


@dataclass(frozen=True)
class StartupEvent:
    turbine: str
    hour: int
    downtime: int
    warmth: int
    cost: float


def _check_ids(plant: CcgtPlant, schedule: Schedule):
    known = {c.id for c in plant.configurations}
    for t, y in enumerate(schedule.config_path, start=1):
        if y not in known:
            raise PlantError(f"hour {t}: plant {plant.name!r} has no configuration {y!r}")


def turbine_status(plant: CcgtPlant, config_path: Sequence[str]) -> dict[str, tuple[int, ...]]:
    """On/off path of every turbine, hour 0 (initial state) first."""
    on_sets = {c.id: c.turbines_on for c in plant.configurations}
    out = {}
    for x in plant.turbines:
        out[x.id] = (int(x.init_on),) + tuple(int(x.id in on_sets[y]) for y in config_path)
    return out


def hottest_allowed_tier(tiers: Sequence[StartupTier], distances: Sequence[int]) -> int:
    """Tier a start may use given how many hours ago each qualifying event happened.

    Tier ``w`` (all but the coldest) needs an event whose age lies in
    ``[T_w, T_{w+1} - 1]``; the hottest such tier wins, else the coldest.
    """
    for w in range(1, len(tiers)):
        lo, hi = tiers[w - 1].min_down_for_type, tiers[w].min_down_for_type - 1
        if any(lo <= d <= hi for d in distances):
            return w
    return len(tiers)


def classify_startup(turbine: PhysicalTurbine, downtime: int) -> int:
    """Warmth tier (1 = hot) for a start after ``downtime`` hours off."""
    return classify_warmth(turbine.startup_tiers, downtime)


def startup_events(plant: CcgtPlant, config_path: Sequence[str]) -> list[StartupEvent]:
    """Per-turbine starts with downtime (pre-horizon hours included) and tier."""
    status = turbine_status(plant, config_path)
    events = []
    for x in plant.turbines:
        path = status[x.id]
        shutdowns = [] if x.init_on else [1 - x.init_off_hours]
        for t in range(1, len(path)):
            if path[t - 1] and not path[t]:
                shutdowns.append(t)
            elif path[t] and not path[t - 1]:
                downtime = t - shutdowns[-1]
                tier = hottest_allowed_tier(x.startup_tiers, [t - s for s in shutdowns])
                events.append(StartupEvent(x.id, t, downtime, tier, x.startup_tiers[tier - 1].cost))
    return events


def transition_events(plant: CcgtPlant, config_path: Sequence[str]) -> list[tuple[int, tuple[str, str]]]:
    prev = plant.init_config
    out = []
    for t, y in enumerate(config_path, start=1):
        if y != prev:
            out.append((t, (prev, y)))
        prev = y
    return out


def validate_schedule(
    plant: CcgtPlant,
    schedule: Schedule,
    mode: CheckMode | str = CheckMode.HYBRID,
    horizon: int | None = None,
) -> list[Violation]:
    """Every broken operating rule, in hour order per rule family.

    Raises :class:`PlantError` for configuration ids the plant does not
    declare, and ``ValueError`` when the schedule is not ``horizon`` long.
    """
    mode = CheckMode(mode)
    _check_ids(plant, schedule)
    if horizon is not None and schedule.horizon != horizon:
        raise ValueError(f"schedule covers {schedule.horizon} hours, horizon is {horizon}")
    out: list[Violation] = []
    name = plant.name
    configs = {c.id: c for c in plant.configurations}
    keys = plant.transition_keys
    path = schedule.config_path

    prev = plant.init_config
    prev_out = plant.init_output
    for t, (y, disp) in enumerate(zip(path, schedule.dispatch), start=1):
        for other, mw in disp.items():
            if other != y and abs(mw) > TOL:
                out.append(Violation(ViolationCode.EXCLUSIVITY, name, t, f"{other!r} produces {mw} MW while {y!r} is active", other))
        if y != prev and (prev, y) not in keys:
            out.append(Violation(ViolationCode.ILLEGAL_TRANSITION, name, t, f"{prev} -> {y} is not a declared transition", f"{prev}->{y}"))
        c = configs[y]
        p = disp.get(y, 0.0)
        if c.is_off:
            if abs(p) > TOL:
                out.append(Violation(ViolationCode.CAPACITY, name, t, f"off configuration produces {p} MW", y))
        else:
            lo, hi = c.p_min_at(t), c.p_max_at(t)
            if p < lo - TOL or p > hi + TOL:
                out.append(Violation(ViolationCode.CAPACITY, name, t, f"{p} MW outside [{lo}, {hi}]", y))
            if y == prev:
                if p - prev_out > c.ramp_up + TOL:
                    out.append(Violation(ViolationCode.RAMP_UP, name, t, f"up {p - prev_out} MW > {c.ramp_up}", y))
                if prev_out - p > c.ramp_down + TOL:
                    out.append(Violation(ViolationCode.RAMP_DOWN, name, t, f"down {prev_out - p} MW > {c.ramp_down}", y))
            elif p > c.startup_ramp + TOL:
                out.append(Violation(ViolationCode.RAMP_UP, name, t, f"entry output {p} MW > startup ramp {c.startup_ramp}", y))
        prev, prev_out = y, p

    if mode.turbine_min_times:
        out += _min_time_violations(plant, path)
    if mode.start_caps:
        out += _cap_violations(plant, path)
    return out


def _min_time_violations(plant: CcgtPlant, path: Sequence[str]) -> list[Violation]:
    out = []
    status = turbine_status(plant, path)
    for x in plant.turbines:
        st = status[x.id]
        run = x.init_hours
        started_in_horizon = False
        for t in range(1, len(st)):
            if st[t] == st[t - 1]:
                run += 1
                continue
            need = x.min_up_time if st[t - 1] else x.min_down_time
            if run < need:
                if started_in_horizon:
                    code = ViolationCode.MIN_UP if st[t - 1] else ViolationCode.MIN_DOWN
                else:
                    code = ViolationCode.INIT_FIX
                word = "on" if st[t - 1] else "off"
                out.append(Violation(code, plant.name, t, f"{x.id} changes status after {run} h {word} (needs {need})", x.id))
            run = 1
            started_in_horizon = True
    return out


def _cap_violations(plant: CcgtPlant, path: Sequence[str]) -> list[Violation]:
    out = []
    counts: dict[tuple[str, int], int] = {}
    for ev in startup_events(plant, path):
        day = (ev.hour - 1) // 24
        counts[(ev.turbine, day)] = counts.get((ev.turbine, day), 0) + 1
    for x in plant.turbines:
        if x.max_daily_starts is None:
            continue
        for (xid, day), n in sorted(counts.items()):
            if xid == x.id and n > x.max_daily_starts:
                out.append(Violation(ViolationCode.START_CAP, plant.name, 24 * day + 1, f"{x.id} starts {n} times on day {day + 1} (cap {x.max_daily_starts})", x.id))
    return out


def _production_cost(plant: CcgtPlant, schedule: Schedule) -> float:
    _check_ids(plant, schedule)
    configs = {c.id: c for c in plant.configurations}
    terms = []
    for y, p in zip(schedule.config_path, schedule.outputs):
        c = configs[y]
        if c.is_off:
            c.energy_cost(p)
            continue
        terms += [c.energy_cost(p), c.no_load_cost]
    return math.fsum(terms)


def schedule_cost(plant: CcgtPlant, schedule: Schedule) -> float:
    """Energy, no-load and per-turbine startup costs of a schedule."""
    return math.fsum([_production_cost(plant, schedule)] + [ev.cost for ev in startup_events(plant, schedule.config_path)])


def cfbm_startup_costs(plant: CcgtPlant, config_path: Sequence[str], tables=None) -> list[tuple[int, tuple[str, str], int, float]]:
    """(hour, transition, tier, cost) for each upward move under plant-clock warmth."""
    tables = tables or (plant.cfbm_costs if plant.cfbm_costs is not None else derive_cfbm_costs(plant))
    off = plant.off_config.id
    upward = {tr.key for tr in plant.upward_transitions}
    events = [1 - initial_plant_clock(plant)]
    out = []
    for t, key in transition_events(plant, config_path):
        if key in upward:
            tiers = tables[key]
            w = hottest_allowed_tier(tiers, [t - s for s in events])
            out.append((t, key, w, tiers[w - 1].cost))
        if off in key:
            events.append(t)
    return out


def cfbm_schedule_cost(plant: CcgtPlant, schedule: Schedule, tables=None) -> float:
    """Cost of a schedule priced the configuration-baseline way."""
    startups = [c for *_, c in cfbm_startup_costs(plant, schedule.config_path, tables)]
    return math.fsum([_production_cost(plant, schedule)] + startups)


def market_cost(context, total_output: Sequence[float]) -> float:
    """Shedding penalty (demand) or negative revenue (prices) for hourly output totals."""
    if context is None:
        return 0.0
    if context.demand is not None:
        terms = []
        for d, p in zip(context.demand, total_output):
            if p > d + TOL:
                raise ValueError(f"output {p} exceeds demand {d}")
            terms.append(context.value_of_lost_load * max(0.0, d - p))
        return math.fsum(terms)
    return -math.fsum(pi * p for pi, p in zip(context.prices, total_output))


def igap(mip_obj: float, lp_obj: float) -> Decimal:
    """Integrality gap in percent, rounded half-even to 4 decimals."""
    if not mip_obj > 0:
        raise ValueError("mip_obj must be positive")
    raw = Decimal(repr(float(mip_obj))) - Decimal(repr(float(lp_obj)))
    pct = Decimal(100) * raw / Decimal(repr(float(mip_obj)))
    return pct.quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN)
