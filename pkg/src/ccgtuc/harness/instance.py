"""System instances: CCGT plants, regular thermal units and a demand profile.

Instances are JSON documents checked against ``data/instance.schema.json``;
``docs/instance_format.md`` walks through the fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cache
from importlib import resources
from typing import Any, Mapping

import jsonschema

from ccgtuc.milp_io.adapter import SolverAdapter
from ccgtuc.plant import (
    CcgtPlant,
    Configuration,
    Diagnostic,
    PhysicalTurbine,
    StartupTier,
    TurbineKind,
    validate_plant,
)

__all__ = [
    "InstanceError",
    "RegularUnit",
    "SystemInstance",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "plant_from_dict",
    "plant_to_dict",
    "validate_unit",
]


class InstanceError(ValueError):
    """Rejected instance.  ``pointer`` is a JSON pointer to the offending node."""

    def __init__(self, message: str, pointer: str = "", diagnostics: tuple[Diagnostic, ...] = ()):
        self.pointer = pointer
        self.diagnostics = tuple(diagnostics)
        lines = [f"{pointer or '/'}: {message}"] + [f"  {d}" for d in self.diagnostics]
        super().__init__("\n".join(lines))


@dataclass(frozen=True)
class RegularUnit:
    """Single-mode thermal unit.

    Ramp and initial-state conventions follow the CCGT configurations: the
    start hour is limited by ``startup_ramp`` and shutdowns are unramped.
    """

    id: str
    p_min: float
    p_max: float
    ramp_up: float
    ramp_down: float
    min_up_time: int
    min_down_time: int
    cost_curve: tuple[tuple[float, float], ...]
    startup_tiers: tuple[StartupTier, ...]
    startup_ramp: float | None = None
    no_load_cost: float = 0.0
    init_on: bool = False
    init_on_hours: int = 0
    init_off_hours: int = 1
    init_output: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "cost_curve", tuple((float(a), float(b)) for a, b in self.cost_curve))
        object.__setattr__(self, "startup_tiers", tuple(self.startup_tiers))
        if self.startup_ramp is None:
            object.__setattr__(self, "startup_ramp", max(float(self.p_min), float(self.ramp_up)))

    def as_turbine(self) -> PhysicalTurbine:
        return PhysicalTurbine(
            self.id,
            TurbineKind.CT,
            self.min_up_time,
            self.min_down_time,
            self.startup_tiers,
            init_on=self.init_on,
            init_on_hours=self.init_on_hours,
            init_off_hours=self.init_off_hours,
        )

    def as_plant(self) -> CcgtPlant:
        """Equivalent two-configuration plant (``off`` and ``on``) for validation and the oracle."""
        on = Configuration(
            "on",
            frozenset([self.id]),
            self.p_min,
            self.p_max,
            self.ramp_up,
            self.ramp_down,
            self.startup_ramp,
            self.no_load_cost,
            self.cost_curve,
        )
        off = Configuration("off", frozenset(), 0.0, 0.0, 1.0, 1.0, 1.0)
        return CcgtPlant(
            self.id,
            (self.as_turbine(),),
            (off, on),
            (("off", "on"), ("on", "off")),
            "on" if self.init_on else "off",
            self.init_output,
        )


def validate_unit(unit: RegularUnit) -> list[Diagnostic]:
    """Structural checks shared with CCGT configurations and turbines."""
    return validate_plant(unit.as_plant())


@dataclass(frozen=True)
class SystemInstance:
    horizon: int
    demand: tuple[float, ...]
    plants: tuple[CcgtPlant, ...] = ()
    units: tuple[RegularUnit, ...] = ()
    value_of_lost_load: float = 10000.0
    name: str = "system"
    solver: Mapping[str, Any] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "demand", tuple(float(d) for d in self.demand))
        object.__setattr__(self, "plants", tuple(self.plants))
        object.__setattr__(self, "units", tuple(self.units))
        if len(self.demand) != self.horizon:
            raise InstanceError(f"demand has {len(self.demand)} entries, horizon is {self.horizon}", "/demand")
        seen: set[str] = set()
        for kind, items in (("plants", self.plants), ("units", self.units)):
            for k, item in enumerate(items):
                name = item.name if kind == "plants" else item.id
                if name in seen:
                    raise InstanceError(f"name {name!r} is used twice", f"/{kind}/{k}")
                seen.add(name)

    def solver_adapter(self) -> SolverAdapter | None:
        if not self.solver:
            return None
        return SolverAdapter(
            self.solver["command"],
            self.solver.get("format", "name_value_lines"),
            dict(self.solver.get("log_patterns", {})),
            name="instance",
        )


@cache
def _schema() -> dict:
    text = resources.files("ccgtuc").joinpath("data/instance.schema.json").read_text()
    return json.loads(text)


def _pointer(path) -> str:
    return "".join(f"/{str(p).replace('~', '~0').replace('/', '~1')}" for p in path)


def _tiers(items) -> tuple[StartupTier, ...]:
    return tuple(StartupTier(int(d["warmth"]), int(d["min_down_for_type"]), float(d["cost"])) for d in items)


def plant_from_dict(doc: Mapping) -> CcgtPlant:
    turbines = tuple(
        PhysicalTurbine(
            d["id"],
            TurbineKind(d["kind"]),
            int(d["min_up_time"]),
            int(d["min_down_time"]),
            _tiers(d["startup_tiers"]),
            d.get("max_daily_starts"),
            bool(d.get("init_on", False)),
            int(d.get("init_on_hours", 0)),
            int(d.get("init_off_hours", 0 if d.get("init_on") else 1)),
        )
        for d in doc["turbines"]
    )
    configs = tuple(
        Configuration(
            d["id"],
            frozenset(d["turbines_on"]),
            d.get("p_min", 0.0),
            d.get("p_max", 0.0),
            float(d.get("ramp_up", 0.0)),
            float(d.get("ramp_down", 0.0)),
            float(d.get("startup_ramp", 0.0)),
            float(d.get("no_load_cost", 0.0)),
            tuple(tuple(bp) for bp in d.get("cost_curve", ())),
        )
        for d in doc["configurations"]
    )
    cfbm = None
    if "cfbm_costs" in doc:
        cfbm = {(d["from"], d["to"]): _tiers(d["tiers"]) for d in doc["cfbm_costs"]}
    return CcgtPlant(
        doc["name"],
        turbines,
        configs,
        tuple((a, b) for a, b in doc["transitions"]),
        doc["init_config"],
        float(doc.get("init_output", 0.0)),
        cfbm,
    )


def _unit_from_dict(doc: Mapping) -> RegularUnit:
    return RegularUnit(
        doc["id"],
        float(doc["p_min"]),
        float(doc["p_max"]),
        float(doc["ramp_up"]),
        float(doc["ramp_down"]),
        int(doc["min_up_time"]),
        int(doc["min_down_time"]),
        tuple(tuple(bp) for bp in doc["cost_curve"]),
        _tiers(doc["startup_tiers"]),
        doc.get("startup_ramp"),
        float(doc.get("no_load_cost", 0.0)),
        bool(doc.get("init_on", False)),
        int(doc.get("init_on_hours", 0)),
        int(doc.get("init_off_hours", 0 if doc.get("init_on") else 1)),
        float(doc.get("init_output", 0.0)),
    )


def instance_from_dict(doc: Mapping) -> SystemInstance:
    """Check ``doc`` against the schema and every plant/unit for structural errors."""
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        raise InstanceError(first.message, _pointer(first.absolute_path))

    plants = []
    for k, d in enumerate(doc.get("plants", ())):
        plant = plant_from_dict(d)
        diags = validate_plant(plant)
        if diags:
            raise InstanceError(f"plant {plant.name!r} is invalid", f"/plants/{k}", diags)
        plants.append(plant)
    units = []
    for k, d in enumerate(doc.get("units", ())):
        unit = _unit_from_dict(d)
        diags = validate_unit(unit)
        if diags:
            raise InstanceError(f"unit {unit.id!r} is invalid", f"/units/{k}", diags)
        units.append(unit)
    return SystemInstance(
        int(doc["horizon"]),
        tuple(doc["demand"]),
        tuple(plants),
        tuple(units),
        float(doc.get("value_of_lost_load", 10000.0)),
        doc.get("name", "system"),
        doc.get("solver"),
    )


def load_instance(path) -> SystemInstance:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"not valid JSON: {exc}") from None
    return instance_from_dict(doc)


def _tiers_doc(tiers) -> list[dict]:
    return [{"warmth": s.warmth, "min_down_for_type": s.min_down_for_type, "cost": s.cost} for s in tiers]


def _number_or_list(value):
    return list(value) if isinstance(value, tuple) else value


def plant_to_dict(plant: CcgtPlant) -> dict:
    doc = {
        "name": plant.name,
        "turbines": [
            {
                "id": x.id,
                "kind": x.kind.value,
                "min_up_time": x.min_up_time,
                "min_down_time": x.min_down_time,
                "startup_tiers": _tiers_doc(x.startup_tiers),
                "max_daily_starts": x.max_daily_starts,
                "init_on": x.init_on,
                "init_on_hours": x.init_on_hours,
                "init_off_hours": x.init_off_hours,
            }
            for x in plant.turbines
        ],
        "configurations": [
            {
                "id": c.id,
                "turbines_on": sorted(c.turbines_on),
                "p_min": _number_or_list(c.p_min),
                "p_max": _number_or_list(c.p_max),
                "ramp_up": c.ramp_up,
                "ramp_down": c.ramp_down,
                "startup_ramp": c.startup_ramp,
                "no_load_cost": c.no_load_cost,
                "cost_curve": [list(bp) for bp in c.cost_curve],
            }
            for c in plant.configurations
        ],
        "transitions": [list(tr.key) for tr in plant.transitions],
        "init_config": plant.init_config,
        "init_output": plant.init_output,
    }
    if plant.cfbm_costs is not None:
        doc["cfbm_costs"] = [
            {"from": a, "to": b, "tiers": _tiers_doc(tiers)} for (a, b), tiers in plant.cfbm_costs.items()
        ]
    return doc


def _unit_to_dict(unit: RegularUnit) -> dict:
    return {
        "id": unit.id,
        "p_min": unit.p_min,
        "p_max": unit.p_max,
        "ramp_up": unit.ramp_up,
        "ramp_down": unit.ramp_down,
        "startup_ramp": unit.startup_ramp,
        "min_up_time": unit.min_up_time,
        "min_down_time": unit.min_down_time,
        "no_load_cost": unit.no_load_cost,
        "cost_curve": [list(bp) for bp in unit.cost_curve],
        "startup_tiers": _tiers_doc(unit.startup_tiers),
        "init_on": unit.init_on,
        "init_on_hours": unit.init_on_hours,
        "init_off_hours": unit.init_off_hours,
        "init_output": unit.init_output,
    }


def instance_to_dict(instance: SystemInstance) -> dict:
    doc = {
        "name": instance.name,
        "horizon": instance.horizon,
        "demand": list(instance.demand),
        "value_of_lost_load": instance.value_of_lost_load,
        "plants": [plant_to_dict(p) for p in instance.plants],
        "units": [_unit_to_dict(u) for u in instance.units],
    }
    if instance.solver:
        doc["solver"] = dict(instance.solver)
    return doc
