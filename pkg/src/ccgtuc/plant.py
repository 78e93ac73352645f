"""CCGT plant description and the configuration/turbine mapping structures.

A plant is a set of physical turbines (CTs, STs, duct burners), a set of
mutually exclusive configurations (which turbines are on), and the declared
graph of feasible one-hour transitions between configurations.  Everything
the optimisation model needs at turbine level is recovered from three 0/1
matrices built here: turbine x configuration, and turbine x transition for
starts and stops.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "TurbineKind",
    "StartupTier",
    "PhysicalTurbine",
    "Configuration",
    "Transition",
    "CcgtPlant",
    "Diagnostic",
    "MappingMatrices",
    "ElementCounts",
    "ModelCounts",
    "PlantError",
    "validate_plant",
    "derive_mapping",
    "build_aggregate",
    "count_model_elements",
    "derive_cfbm_costs",
    "initial_plant_clock",
    "classify_warmth",
]

_ID_RE = re.compile(r"^[A-Za-z0-9_+\-.]+$")


class PlantError(ValueError):
    """Structural problem with a plant definition."""

    def __init__(self, message: str, diagnostics: Sequence["Diagnostic"] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class TurbineKind(str, Enum):
    CT = "CT"
    ST = "ST"
    DB = "DB"


@dataclass(frozen=True)
class StartupTier:
    """One warmth level: hot (1), intermediate (2) or cold (3)."""

    warmth: int
    min_down_for_type: int
    cost: float


@dataclass(frozen=True)
class PhysicalTurbine:
    id: str
    kind: TurbineKind
    min_up_time: int
    min_down_time: int
    startup_tiers: tuple[StartupTier, ...]
    max_daily_starts: int | None = None
    init_on: bool = False
    init_on_hours: int = 0
    init_off_hours: int = 1

    @property
    def init_hours(self) -> int:
        """Hours spent in the initial status before the horizon."""
        return self.init_on_hours if self.init_on else self.init_off_hours

    def required_initial_hours(self) -> tuple[int, int]:
        """Hours at the start of the horizon pinned to the initial status (on, off)."""
        up = max(0, (self.min_up_time - self.init_on_hours) * int(self.init_on))
        down = max(0, (self.min_down_time - self.init_off_hours) * (1 - int(self.init_on)))
        return up, down


def _as_profile(value) -> float | tuple[float, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    return float(value)


@dataclass(frozen=True)
class Configuration:
    """A valid operating mode.  ``p_min``/``p_max`` are constants or per-hour tuples."""

    id: str
    turbines_on: frozenset[str]
    p_min: float | tuple[float, ...] = 0.0
    p_max: float | tuple[float, ...] = 0.0
    ramp_up: float = 0.0
    ramp_down: float = 0.0
    startup_ramp: float = 0.0
    no_load_cost: float = 0.0
    cost_curve: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "turbines_on", frozenset(self.turbines_on))
        object.__setattr__(self, "p_min", _as_profile(self.p_min))
        object.__setattr__(self, "p_max", _as_profile(self.p_max))
        object.__setattr__(
            self, "cost_curve", tuple((float(a), float(b)) for a, b in self.cost_curve)
        )

    @property
    def is_off(self) -> bool:
        return not self.turbines_on

    def p_min_at(self, t: int) -> float:
        """Minimum output at hour ``t`` (1-based; hour 0 reuses hour 1)."""
        if isinstance(self.p_min, tuple):
            return self.p_min[max(t, 1) - 1]
        return self.p_min

    def p_max_at(self, t: int) -> float:
        if isinstance(self.p_max, tuple):
            return self.p_max[max(t, 1) - 1]
        return self.p_max

    def profile_length(self) -> int | None:
        lengths = {len(v) for v in (self.p_min, self.p_max) if isinstance(v, tuple)}
        if not lengths:
            return None
        return min(lengths)

    def energy_cost(self, output: float) -> float:
        """Interpolated energy cost at ``output``; raises outside the curve span."""
        if self.is_off:
            if abs(output) > 1e-9:
                raise ValueError(f"configuration {self.id!r} is off but output is {output}")
            return 0.0
        xs = [bp[0] for bp in self.cost_curve]
        tol = 1e-7 * max(1.0, abs(xs[-1]))
        if output < xs[0] - tol or output > xs[-1] + tol:
            raise ValueError(
                f"output {output} outside cost curve span [{xs[0]}, {xs[-1]}] "
                f"of configuration {self.id!r}"
            )
        return float(np.interp(output, xs, [bp[1] for bp in self.cost_curve]))


@dataclass(frozen=True)
class Transition:
    """A feasible move ``from_config -> to_config``; started/stopped are filled by the plant."""

    from_config: str
    to_config: str
    started: frozenset[str] = frozenset()
    stopped: frozenset[str] = frozenset()

    @property
    def key(self) -> tuple[str, str]:
        return self.from_config, self.to_config

    @property
    def is_upward(self) -> bool:
        """Starts at least one turbine (mixed moves count as upward)."""
        return bool(self.started)


@dataclass(frozen=True)
class CcgtPlant:
    name: str
    turbines: tuple[PhysicalTurbine, ...]
    configurations: tuple[Configuration, ...]
    transitions: tuple[Transition, ...]
    init_config: str
    init_output: float = 0.0
    # per upward transition: warmth tiers keyed to the plant offline-status clock
    cfbm_costs: Mapping[tuple[str, str], tuple[StartupTier, ...]] | None = None

    def __post_init__(self):
        object.__setattr__(self, "turbines", tuple(self.turbines))
        object.__setattr__(self, "configurations", tuple(self.configurations))
        by_id = {c.id: c for c in self.configurations}
        filled = []
        for tr in self.transitions:
            if isinstance(tr, (tuple, list)):
                tr = Transition(tr[0], tr[1])
            a, b = by_id.get(tr.from_config), by_id.get(tr.to_config)
            if a is not None and b is not None:
                tr = replace(
                    tr,
                    started=b.turbines_on - a.turbines_on,
                    stopped=a.turbines_on - b.turbines_on,
                )
            filled.append(tr)
        object.__setattr__(self, "transitions", tuple(filled))
        if self.cfbm_costs is not None:
            object.__setattr__(
                self,
                "cfbm_costs",
                {tuple(k): tuple(v) for k, v in self.cfbm_costs.items()},
            )

    def config(self, config_id: str) -> Configuration:
        for c in self.configurations:
            if c.id == config_id:
                return c
        raise PlantError(f"plant {self.name!r} has no configuration {config_id!r}")

    def turbine(self, turbine_id: str) -> PhysicalTurbine:
        for x in self.turbines:
            if x.id == turbine_id:
                return x
        raise PlantError(f"plant {self.name!r} has no turbine {turbine_id!r}")

    @property
    def off_config(self) -> Configuration:
        offs = [c for c in self.configurations if c.is_off]
        if len(offs) != 1:
            raise PlantError(f"plant {self.name!r} must have exactly one all-off configuration")
        return offs[0]

    @property
    def upward_transitions(self) -> tuple[Transition, ...]:
        return tuple(tr for tr in self.transitions if tr.is_upward)

    @property
    def transition_keys(self) -> frozenset[tuple[str, str]]:
        return frozenset(tr.key for tr in self.transitions)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    element: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} [{self.element}]: {self.message}"


def _validate_tiers(owner: str, tiers: Sequence[StartupTier], out: list[Diagnostic]):
    if not tiers or len(tiers) > 3:
        out.append(Diagnostic("BAD_TIERS", owner, f"expected 1 to 3 startup tiers, got {len(tiers)}"))
        return
    for k, tier in enumerate(tiers, start=1):
        if tier.warmth != k:
            out.append(Diagnostic("BAD_TIERS", owner, f"tier {k} has warmth {tier.warmth}"))
        if tier.min_down_for_type < 1:
            out.append(Diagnostic("BAD_TIERS", owner, f"tier {k} threshold must be >= 1"))
        if tier.cost < 0:
            out.append(Diagnostic("BAD_TIERS", owner, f"tier {k} cost must be >= 0"))
    for lo, hi in zip(tiers, tiers[1:]):
        if hi.min_down_for_type <= lo.min_down_for_type:
            out.append(Diagnostic("BAD_TIERS", owner, "tier thresholds must be strictly increasing"))
        if hi.cost < lo.cost:
            out.append(Diagnostic("BAD_TIERS", owner, "tier costs must be non-decreasing"))


def _validate_turbine(x: PhysicalTurbine, out: list[Diagnostic]):
    if not _ID_RE.match(x.id):
        out.append(Diagnostic("BAD_ID", x.id, "ids may use letters, digits and _+-. only"))
    if x.min_up_time < 1 or x.min_down_time < 1:
        out.append(Diagnostic("BAD_MIN_UPDOWN", x.id, "min up/down times must be >= 1"))
    _validate_tiers(x.id, x.startup_tiers, out)
    if x.startup_tiers and x.startup_tiers[0].min_down_for_type != x.min_down_time:
        out.append(
            Diagnostic("BAD_TIERS", x.id, "hot tier threshold must equal the minimum down time")
        )
    if x.init_on_hours < 0 or x.init_off_hours < 0:
        out.append(Diagnostic("BAD_INIT_STATE", x.id, "initial hours must be >= 0"))
    elif x.init_on and not (x.init_on_hours > 0 and x.init_off_hours == 0):
        out.append(Diagnostic("BAD_INIT_STATE", x.id, "an on turbine needs init_on_hours > 0 and init_off_hours == 0"))
    elif not x.init_on and not (x.init_off_hours > 0 and x.init_on_hours == 0):
        out.append(Diagnostic("BAD_INIT_STATE", x.id, "an off turbine needs init_off_hours > 0 and init_on_hours == 0"))
    if x.max_daily_starts is not None and x.max_daily_starts < 0:
        out.append(Diagnostic("BAD_DAILY_CAP", x.id, "max_daily_starts must be >= 0"))


def _validate_configuration(c: Configuration, out: list[Diagnostic]):
    if not _ID_RE.match(c.id):
        out.append(Diagnostic("BAD_ID", c.id, "ids may use letters, digits and _+-. only"))
    pmins = c.p_min if isinstance(c.p_min, tuple) else (c.p_min,)
    pmaxs = c.p_max if isinstance(c.p_max, tuple) else (c.p_max,)
    if isinstance(c.p_min, tuple) and isinstance(c.p_max, tuple) and len(pmins) != len(pmaxs):
        out.append(Diagnostic("BAD_CAPACITY", c.id, "p_min and p_max profiles differ in length"))
    if c.is_off:
        if any(v != 0 for v in pmins + pmaxs):
            out.append(Diagnostic("BAD_OFF_CONFIG", c.id, "the all-off configuration must have p_min = p_max = 0"))
        return
    n = max(len(pmins), len(pmaxs))
    for t in range(1, n + 1):
        lo, hi = c.p_min_at(t), c.p_max_at(t)
        if not 0 <= lo <= hi:
            out.append(Diagnostic("BAD_CAPACITY", c.id, f"hour {t}: need 0 <= p_min <= p_max, got {lo}, {hi}"))
            break
    if min(c.ramp_up, c.ramp_down, c.startup_ramp) <= 0:
        out.append(Diagnostic("BAD_RAMP", c.id, "ramp rates must be > 0"))
    curve = c.cost_curve
    if len(curve) < 2:
        out.append(Diagnostic("BAD_COST_CURVE", c.id, "need at least 2 breakpoints"))
        return
    xs = [bp[0] for bp in curve]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        out.append(Diagnostic("BAD_COST_CURVE", c.id, "breakpoints must be strictly increasing in MW"))
    if xs[0] > min(pmins) or xs[-1] < max(pmaxs):
        out.append(Diagnostic("BAD_COST_CURVE", c.id, "cost curve must span [p_min, p_max]"))
    if any(not np.isfinite(v) for bp in curve for v in bp):
        out.append(Diagnostic("BAD_COST_CURVE", c.id, "breakpoints must be finite"))


def validate_plant(plant: CcgtPlant) -> list[Diagnostic]:
    """Check every structural invariant; an empty list means the plant is usable."""
    out: list[Diagnostic] = []
    if not _ID_RE.match(plant.name):
        out.append(Diagnostic("BAD_ID", plant.name, "ids may use letters, digits and _+-. only"))
    for kind, ids in (("turbine", [x.id for x in plant.turbines]), ("configuration", [c.id for c in plant.configurations])):
        for dup, n in Counter(ids).items():
            if n > 1:
                out.append(Diagnostic("DUPLICATE_ID", dup, f"{kind} id declared {n} times"))
    for x in plant.turbines:
        _validate_turbine(x, out)
    for c in plant.configurations:
        _validate_configuration(c, out)

    turbine_ids = {x.id for x in plant.turbines}
    config_ids = {c.id for c in plant.configurations}
    offs = [c.id for c in plant.configurations if c.is_off]
    if not offs:
        out.append(Diagnostic("MISSING_OFF_CONFIG", plant.name, "no all-off configuration"))
    elif len(offs) > 1:
        out.append(Diagnostic("DUPLICATE_OFF_CONFIG", ",".join(offs), "more than one all-off configuration"))
    used: set[str] = set()
    seen_sets: dict[frozenset[str], str] = {}
    for c in plant.configurations:
        for x in sorted(c.turbines_on - turbine_ids):
            out.append(Diagnostic("UNKNOWN_TURBINE", c.id, f"references undeclared turbine {x!r}"))
        used |= c.turbines_on
        if c.turbines_on in seen_sets and not c.is_off:
            out.append(Diagnostic("DUPLICATE_ON_SET", c.id, f"same turbines on as {seen_sets[c.turbines_on]!r}"))
        seen_sets.setdefault(c.turbines_on, c.id)
    for x in plant.turbines:
        if x.id not in used:
            out.append(Diagnostic("UNUSED_TURBINE", x.id, "turbine appears in no configuration"))

    keys: Counter = Counter()
    for tr in plant.transitions:
        label = f"{tr.from_config}->{tr.to_config}"
        keys[tr.key] += 1
        if tr.from_config == tr.to_config:
            out.append(Diagnostic("SELF_LOOP", label, "transition from a configuration to itself"))
            continue
        missing = [cid for cid in tr.key if cid not in config_ids]
        if missing:
            out.append(Diagnostic("UNKNOWN_CONFIG", label, f"unknown configuration(s) {missing}"))
            continue
        if not (tr.started or tr.stopped):
            out.append(Diagnostic("EMPTY_TRANSITION", label, "transition starts and stops nothing"))
    for key, n in keys.items():
        if n > 1:
            out.append(Diagnostic("DUPLICATE_TRANSITION", f"{key[0]}->{key[1]}", f"declared {n} times"))

    if plant.init_config not in config_ids:
        out.append(Diagnostic("UNKNOWN_INIT_CONFIG", plant.init_config, "initial configuration not declared"))
    else:
        init = plant.config(plant.init_config)
        for x in plant.turbines:
            if x.init_on != (x.id in init.turbines_on):
                out.append(
                    Diagnostic("INIT_CONFIG_MISMATCH", x.id, f"init_on={x.init_on} but initial configuration is {init.id!r}")
                )
        if init.is_off:
            if plant.init_output != 0:
                out.append(Diagnostic("BAD_INIT_OUTPUT", plant.name, "initial output must be 0 when off"))
        elif not init.p_min_at(1) <= plant.init_output <= init.p_max_at(1):
            out.append(Diagnostic("BAD_INIT_OUTPUT", plant.name, "initial output outside the initial configuration's limits"))

    if plant.cfbm_costs is not None:
        upward = {tr.key for tr in plant.transitions if tr.is_upward}
        for key, tiers in plant.cfbm_costs.items():
            label = f"{key[0]}->{key[1]}"
            if key not in upward:
                out.append(Diagnostic("BAD_CFBM_COSTS", label, "not a declared upward transition"))
            _validate_tiers(label, tiers, out)
        for key in sorted(upward - set(plant.cfbm_costs)):
            out.append(Diagnostic("BAD_CFBM_COSTS", f"{key[0]}->{key[1]}", "missing transition cost tiers"))
    return out


def _require_valid(plant: CcgtPlant):
    diags = validate_plant(plant)
    if diags:
        raise PlantError(f"plant {plant.name!r} is invalid: {diags[0]}", diags)


@dataclass(frozen=True)
class MappingMatrices:
    """Turbine/configuration (``m``) and turbine/transition (``m_up``, ``m_dn``) incidence."""

    turbine_ids: tuple[str, ...]
    config_ids: tuple[str, ...]
    transitions: tuple[tuple[str, str], ...]
    m: np.ndarray
    m_up: np.ndarray
    m_dn: np.ndarray
    on_sets: Mapping[str, tuple[str, ...]]
    ut_sets: Mapping[str, tuple[tuple[str, str], ...]]
    dt_sets: Mapping[str, tuple[tuple[str, str], ...]]


def derive_mapping(plant: CcgtPlant) -> MappingMatrices:
    turbine_ids = tuple(x.id for x in plant.turbines)
    config_ids = tuple(c.id for c in plant.configurations)
    row = {x: i for i, x in enumerate(turbine_ids)}
    col = {c: j for j, c in enumerate(config_ids)}

    m = np.zeros((len(turbine_ids), len(config_ids)), dtype=np.int8)
    for c in plant.configurations:
        for x in c.turbines_on:
            if x not in row:
                raise PlantError(f"configuration {c.id!r} references unknown turbine {x!r}")
            m[row[x], col[c.id]] = 1

    keys = tuple(tr.key for tr in plant.transitions)
    m_up = np.zeros((len(turbine_ids), len(keys)), dtype=np.int8)
    m_dn = np.zeros_like(m_up)
    for k, tr in enumerate(plant.transitions):
        for cid in tr.key:
            if cid not in col:
                raise PlantError(f"transition {tr.key} references unknown configuration {cid!r}")
        for x in tr.started:
            m_up[row[x], k] = 1
        for x in tr.stopped:
            m_dn[row[x], k] = 1

    on_sets = {x: tuple(config_ids[j] for j in np.flatnonzero(m[i])) for i, x in enumerate(turbine_ids)}
    ut_sets = {x: tuple(keys[k] for k in np.flatnonzero(m_up[i])) for i, x in enumerate(turbine_ids)}
    dt_sets = {x: tuple(keys[k] for k in np.flatnonzero(m_dn[i])) for i, x in enumerate(turbine_ids)}
    return MappingMatrices(turbine_ids, config_ids, keys, m, m_up, m_dn, on_sets, ut_sets, dt_sets)


_KIND_ORDER = (TurbineKind.CT, TurbineKind.ST, TurbineKind.DB)


def _count_class(plant_turbines: Mapping[str, PhysicalTurbine], on: Iterable[str]) -> tuple[int, int, int]:
    counts = Counter(plant_turbines[x].kind for x in on)
    return tuple(counts.get(k, 0) for k in _KIND_ORDER)


def _class_label(cls: tuple[int, int, int]) -> str:
    return "+".join(f"{n}{k.value}" for n, k in zip(cls, _KIND_ORDER) if n)


def build_aggregate(plant: CcgtPlant, priority: Mapping[str, Sequence[str]] | Sequence[str]) -> CcgtPlant:
    """Merge configurations with equal turbine counts per kind.

    ``priority`` lists turbine ids highest priority first, either as one flat
    sequence or per kind (``{"CT": ["CT1", "CT2"], "ST": ["ST1"]}``).  An
    aggregate configuration switches on the highest-priority turbines of each
    kind; its operating data come from the original configuration with exactly
    that set, else from the first declared member of the class.  Initial
    statuses are reassigned the same way so the aggregate stays consistent.
    """
    _require_valid(plant)
    turbines = {x.id: x for x in plant.turbines}
    if isinstance(priority, Mapping):
        order = {TurbineKind(k): list(v) for k, v in priority.items()}
    else:
        order = {}
        for x in priority:
            if x not in turbines:
                raise PlantError(f"priority names unknown turbine {x!r}")
            order.setdefault(turbines[x].kind, []).append(x)
    for kind in _KIND_ORDER:
        expected = sorted(x.id for x in plant.turbines if x.kind == kind)
        given = order.get(kind, [])
        if sorted(given) != expected:
            raise PlantError(
                f"priority for {kind.value} must be a permutation of {expected}, got {list(given)}"
            )

    def filled(cls: tuple[int, int, int]) -> frozenset[str]:
        on: list[str] = []
        for n, kind in zip(cls, _KIND_ORDER):
            on.extend(order.get(kind, [])[:n])
        return frozenset(on)

    classes: dict[tuple[int, int, int], list[Configuration]] = {}
    for c in plant.configurations:
        classes.setdefault(_count_class(turbines, c.turbines_on), []).append(c)

    new_id: dict[str, str] = {}
    configs: list[Configuration] = []
    for cls, members in classes.items():
        on = filled(cls)
        source = next((c for c in members if c.turbines_on == on), members[0])
        cid = source.id if source.is_off else _class_label(cls)
        configs.append(replace(source, id=cid, turbines_on=on))
        for c in members:
            new_id[c.id] = cid

    transitions: list[tuple[str, str]] = []
    for tr in plant.transitions:
        key = (new_id[tr.from_config], new_id[tr.to_config])
        if key[0] != key[1] and key not in transitions:
            transitions.append(key)

    init_id = new_id[plant.init_config]
    init_on = next(c for c in configs if c.id == init_id).turbines_on
    reassigned: list[PhysicalTurbine] = []
    for kind in _KIND_ORDER:
        ranked = order.get(kind, [])
        # initial states of this kind, on turbines first (by priority), then off ones
        states = sorted(
            (turbines[x] for x in ranked),
            key=lambda x: (not x.init_on, ranked.index(x.id)),
        )
        for x_id, state in zip(ranked, states):
            if (x_id in init_on) != state.init_on:
                raise PlantError("initial statuses cannot be reassigned by priority")
            reassigned.append(
                replace(
                    turbines[x_id],
                    init_on=state.init_on,
                    init_on_hours=state.init_on_hours,
                    init_off_hours=state.init_off_hours,
                )
            )
    by_id = {x.id: x for x in reassigned}
    return CcgtPlant(
        name=plant.name,
        turbines=tuple(by_id[x.id] for x in plant.turbines),
        configurations=tuple(configs),
        transitions=tuple(transitions),
        init_config=init_id,
        init_output=plant.init_output,
    )


def classify_warmth(tiers: Sequence[StartupTier], downtime: int) -> int:
    """Index (1-based) of the tier whose threshold band contains ``downtime``.

    Downtimes below the first threshold fall back to the coldest tier, which
    is the only tier the model leaves unrestricted.
    """
    if downtime < tiers[0].min_down_for_type:
        return len(tiers)
    w = 1
    for k, tier in enumerate(tiers, start=1):
        if downtime >= tier.min_down_for_type:
            w = k
    return w


def initial_plant_clock(plant: CcgtPlant) -> int:
    """Hours since the plant's offline status last changed, as of hour 0.

    Offline: the most recently stopped turbine's off time.  Online: the
    longest-running turbine's on time.
    """
    if plant.config(plant.init_config).is_off:
        return min(x.init_off_hours for x in plant.turbines)
    return max(x.init_on_hours for x in plant.turbines if x.init_on)


def derive_cfbm_costs(plant: CcgtPlant) -> dict[tuple[str, str], tuple[StartupTier, ...]]:
    """Transition cost tiers built from turbine startup costs.

    Tier ``w`` of a transition costs the sum of tier-``w`` costs of the turbines
    it starts (shorter tier lists repeat their coldest entry).  The hot band
    opens at one hour of plant status; later thresholds take the largest
    threshold among the started turbines.
    """
    turbines = {x.id: x for x in plant.turbines}
    out = {}
    for tr in plant.upward_transitions:
        started = [turbines[x] for x in sorted(tr.started)]
        padded = [list(x.startup_tiers) + [x.startup_tiers[-1]] * (3 - len(x.startup_tiers)) for x in started]
        tiers = []
        prev = 0
        for w in range(3):
            if w == 0:
                threshold = 1
            else:
                threshold = max(
                    (p[w].min_down_for_type for p, x in zip(padded, started) if w < len(x.startup_tiers)),
                    default=prev + 1,
                )
                threshold = max(threshold, prev + 1)
            cost = sum(p[w].cost for p in padded)
            tiers.append(StartupTier(w + 1, threshold, cost))
            prev = threshold
        out[tr.key] = tuple(tiers)
    return out


@dataclass(frozen=True)
class ElementCounts:
    """Per-model sizes; ``constraints`` is keyed by row family."""

    startup_binaries_per_interval: int
    binaries: int
    continuous: int
    constraints: Mapping[str, int] = field(default_factory=dict)

    @property
    def total_constraints(self) -> int:
        return sum(self.constraints.values())


@dataclass(frozen=True)
class ModelCounts:
    hybrid: ElementCounts
    cfbm: ElementCounts


def count_model_elements(plant: CcgtPlant, horizon: int, options=None) -> ModelCounts:
    """Size of the hybrid model (variant from ``options``, default F1) and of CFBM."""
    from ccgtuc.formulation.options import BuildOptions, Variant

    if options is None:
        options = BuildOptions.preset(Variant.F1)
    cfbm_options = BuildOptions.preset(Variant.CFBM)
    return ModelCounts(
        hybrid=_count_for(plant, horizon, options),
        cfbm=_count_for(plant, horizon, cfbm_options),
    )


def _count_for(plant: CcgtPlant, horizon: int, options) -> ElementCounts:
    from ccgtuc.formulation import rows

    T = horizon
    mapping = derive_mapping(plant)
    on_configs = [c for c in plant.configurations if not c.is_off]
    n_up = len(plant.upward_transitions)
    n_tr = len(plant.transitions)
    cfbm = options.is_cfbm
    tables = plant.cfbm_costs if plant.cfbm_costs is not None else (derive_cfbm_costs(plant) if cfbm else None)

    if cfbm:
        typed = sum(len(tables[tr.key]) for tr in plant.upward_transitions)
        startup_per_t = typed
        transition_vars = typed + (n_tr - n_up)
        delta_vars = 0
    else:
        startup_per_t = sum(len(x.startup_tiers) for x in plant.turbines) + n_up
        transition_vars = n_tr
        delta_vars = sum(len(x.startup_tiers) for x in plant.turbines)

    lambda_vars = sum(len(c.cost_curve) for c in on_configs)
    binaries = len(plant.configurations) * T
    continuous = (len(on_configs) + lambda_vars) * T
    if options.transition_vars == "binary":
        binaries += transition_vars * T
    else:
        continuous += transition_vars * T
    if options.startup_indicator_vars == "binary":
        binaries += delta_vars * T
    else:
        continuous += delta_vars * T

    fam: dict[str, int] = {}

    def add(name, n):
        if n:
            fam[name] = fam.get(name, 0) + n

    add("exclusivity", T)
    if options.transition_logic in ("config", "both"):
        add("transition_config", len(plant.configurations) * T)
    if options.transition_logic in ("turbine", "both"):
        add("transition_pt", len(plant.turbines) * T)
    add("link_from", n_tr * T)
    add("link_to", n_tr * T)
    add("capacity_min", len(on_configs) * T)
    add("capacity_max", len(on_configs) * T)
    add("pwl_convexity", len(on_configs) * T)
    add("pwl_output", len(on_configs) * T)
    add("ramp_up", len(on_configs) * T)
    add("ramp_down", len(on_configs) * T)

    selection = options.min_updown_turbines(plant)
    if options.pt_min_updown:
        for x in plant.turbines:
            if x.id not in selection:
                continue
            if mapping.ut_sets[x.id]:
                add("min_up", T)
            if mapping.dt_sets[x.id]:
                add("min_down", T)
        for x in plant.turbines:
            up, down = x.required_initial_hours()
            add("init_fix", min(T, up + down))
    if cfbm:
        clock = initial_plant_clock(plant)
        off_id = plant.off_config.id
        has_change = any(off_id in tr.key for tr in plant.transitions)
        for tr in plant.upward_transitions:
            for plan in rows.warmth_rows(tables[tr.key], T, clock, has_change):
                add("cfbm_type" if plan.window else "cfbm_type_init", 1)
    else:
        for x in plant.turbines:
            for plan in rows.startup_type_rows(x, T, bool(mapping.dt_sets[x.id])):
                add("startup_type" if plan.window else "startup_type_init", 1)
            add("startup_sum", T)
        if options.include_daily_start_caps:
            for x in plant.turbines:
                if x.max_daily_starts is not None and mapping.ut_sets[x.id]:
                    add("daily_starts", -(-T // 24))
    return ElementCounts(startup_per_t, binaries, continuous, fam)
