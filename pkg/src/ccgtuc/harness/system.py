"""Single-bus system model: CCGT plants and regular units against one demand profile."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ccgtuc.formulation.build import MarketContext, add_market, add_plant, finish_metadata
from ccgtuc.formulation.model import Domain, MilpModel, Sense
from ccgtuc.formulation.options import BuildOptions, Variant
from ccgtuc.formulation.rows import p_name, startup_type_rows, u_name
from ccgtuc.harness.instance import RegularUnit, SystemInstance
from ccgtuc.oracle.schedule import CheckMode, Schedule, Violation, validate_schedule

__all__ = [
    "build_system",
    "add_unit",
    "unit_names",
    "extract_schedules",
    "validate_system",
    "check_mode_for",
    "SystemSchedules",
]


def unit_names(unit: str, t: int) -> dict[str, str]:
    """Variable names of a regular unit at hour ``t``."""
    return {
        "u": f"ug[{unit},{t}]",
        "su": f"su[{unit},{t}]",
        "sd": f"sd[{unit},{t}]",
        "p": f"pg[{unit},{t}]",
    }


def _lam(unit: str, t: int, k: int) -> str:
    return f"lg[{unit},{t},{k}]"


def _delta(unit: str, t: int, w: int) -> str:
    return f"dg[{unit},{t},{w}]"


def add_unit(model: MilpModel, unit: RegularUnit, horizon: int) -> None:
    """Commitment/startup/shutdown formulation with facet min up/down rows."""
    g = unit.id
    u0 = 1.0 if unit.init_on else 0.0
    for t in range(1, horizon + 1):
        n = unit_names(g, t)
        model.add_variable(n["u"], Domain.BINARY)
        model.add_variable(n["su"], Domain.BINARY)
        model.add_variable(n["sd"], Domain.BINARY)
        model.add_variable(n["p"], Domain.CONTINUOUS, 0.0, unit.p_max)
        for k in range(len(unit.cost_curve)):
            model.add_variable(_lam(g, t, k), Domain.CONTINUOUS, 0.0, 1.0)
        for w in range(1, len(unit.startup_tiers) + 1):
            model.add_variable(_delta(g, t, w), Domain.BINARY)

    for t in range(1, horizon + 1):
        n = unit_names(g, t)
        u, su, sd, p = n["u"], n["su"], n["sd"], n["p"]
        logic = [(u, 1.0), (su, -1.0), (sd, 1.0)]
        if t > 1:
            logic.append((unit_names(g, t - 1)["u"], -1.0))
        model.add_constraint(f"ulogic[{g},{t}]", logic, Sense.EQ, u0 if t == 1 else 0.0, "unit_logic")
        model.add_constraint(f"ususd[{g},{t}]", [(su, 1.0), (sd, 1.0)], Sense.LE, 1.0, "unit_logic")

        model.add_constraint(f"upmin[{g},{t}]", [(p, 1.0), (u, -unit.p_min)], Sense.GE, 0.0, "unit_capacity")
        model.add_constraint(f"upmax[{g},{t}]", [(p, 1.0), (u, -unit.p_max)], Sense.LE, 0.0, "unit_capacity")

        lams = [_lam(g, t, k) for k in range(len(unit.cost_curve))]
        model.add_constraint(f"ucvx[{g},{t}]", [(lam, 1.0) for lam in lams] + [(u, -1.0)], Sense.EQ, 0.0, "unit_pwl")
        model.add_constraint(
            f"updef[{g},{t}]",
            [(p, 1.0)] + [(lam, -mw) for lam, (mw, _) in zip(lams, unit.cost_curve)],
            Sense.EQ,
            0.0,
            "unit_pwl",
        )
        model.add_sos2(
            f"usos[{g},{t}]",
            [(lam, mw) for lam, (mw, _) in zip(lams, unit.cost_curve)],
            output=p,
            costs=[c for _, c in unit.cost_curve],
        )
        for lam, (_, cost) in zip(lams, unit.cost_curve):
            model.add_objective(lam, cost)
        model.add_objective(u, unit.no_load_cost)

        # start hour capped by the startup ramp, shutdown unramped
        p0 = unit.init_output if t == 1 else 0.0
        up = [(p, 1.0), (su, -(unit.startup_ramp - unit.ramp_up))]
        down = [(p, -1.0), (u, unit.p_max - unit.ramp_down)]
        if t > 1:
            prev = unit_names(g, t - 1)["p"]
            up.append((prev, -1.0))
            down.append((prev, 1.0))
        model.add_constraint(f"urup[{g},{t}]", up, Sense.LE, unit.ramp_up + p0, "unit_ramp")
        model.add_constraint(f"urdn[{g},{t}]", down, Sense.LE, unit.p_max - p0, "unit_ramp")

        ups = [(unit_names(g, s)["su"], 1.0) for s in range(max(1, t - unit.min_up_time + 1), t + 1)]
        model.add_constraint(f"uminup[{g},{t}]", ups + [(u, -1.0)], Sense.LE, 0.0, "unit_min_up")
        dns = [(unit_names(g, s)["sd"], 1.0) for s in range(max(1, t - unit.min_down_time + 1), t + 1)]
        model.add_constraint(f"umindn[{g},{t}]", dns + [(u, 1.0)], Sense.LE, 1.0, "unit_min_down")

    up_fix, down_fix = unit.as_turbine().required_initial_hours()
    for t in range(1, min(horizon, up_fix + down_fix) + 1):
        model.add_constraint(f"uinit[{g},{t}]", [(unit_names(g, t)["u"], 1.0)], Sense.EQ, u0, "unit_init_fix")

    for row in startup_type_rows(unit.as_turbine(), horizon, True):
        d = _delta(g, row.t, row.w)
        if row.window:
            stops = [(unit_names(g, s)["sd"], -1.0) for s in row.window]
            model.add_constraint(f"usutype[{g},{row.t},{row.w}]", [(d, 1.0)] + stops, Sense.LE, 0.0, "unit_startup_type")
        else:
            model.add_constraint(f"usutype0[{g},{row.t},{row.w}]", [(d, 1.0)], Sense.EQ, 0.0, "unit_startup_type")
    for t in range(1, horizon + 1):
        terms = [(_delta(g, t, w), 1.0) for w in range(1, len(unit.startup_tiers) + 1)]
        model.add_constraint(f"ususum[{g},{t}]", terms + [(unit_names(g, t)["su"], -1.0)], Sense.EQ, 0.0, "unit_startup_sum")
        for w, tier in enumerate(unit.startup_tiers, start=1):
            model.add_objective(_delta(g, t, w), tier.cost)


def build_system(instance: SystemInstance, options: BuildOptions | Variant | str = Variant.F1) -> MilpModel:
    """Every plant in the chosen variant, every unit, and a shed-penalised balance per hour."""
    if not isinstance(options, BuildOptions):
        options = BuildOptions.preset(options)
    horizon = instance.horizon
    model = MilpModel(name=f"{instance.name}_{options.variant.value}")
    for plant in instance.plants:
        add_plant(model, plant, options, horizon)
    for unit in instance.units:
        add_unit(model, unit, horizon)
    extra = {t: [unit_names(u.id, t)["p"] for u in instance.units] for t in range(1, horizon + 1)}
    context = MarketContext(demand=instance.demand, value_of_lost_load=instance.value_of_lost_load)
    add_market(model, instance.plants, context, horizon, extra)
    finish_metadata(model, options, horizon)
    model.metadata["system"] = instance.name
    return model


def check_mode_for(variant: Variant | str) -> CheckMode:
    """Rule set a variant's schedules are held to by the validator."""
    variant = Variant.parse(variant) if isinstance(variant, str) else variant
    if variant is Variant.CFBM:
        return CheckMode.CFBM
    if variant is Variant.HM1:
        return CheckMode.HM1
    return CheckMode.HYBRID


@dataclass
class SystemSchedules:
    plants: dict[str, Schedule]
    units: dict[str, Schedule]
    shed: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "plants": [s.to_json() for s in self.plants.values()],
            "units": [s.to_json() for s in self.units.values()],
            "shed": list(self.shed),
        }


def _active(plant_name: str, configs, values: Mapping[str, float], t: int, uname) -> str:
    on = [c for c in configs if values.get(uname(plant_name, c, t), 0.0) > 0.5]
    if len(on) != 1:
        raise ValueError(f"{plant_name} hour {t}: {len(on)} active configurations")
    return on[0]


def extract_schedules(instance: SystemInstance, values: Mapping[str, float]) -> SystemSchedules:
    """Configuration paths and outputs read back from a MILP solution."""
    T = instance.horizon
    plants = {}
    for plant in instance.plants:
        ids = [c.id for c in plant.configurations]
        path = [_active(plant.name, ids, values, t, u_name) for t in range(1, T + 1)]
        outputs = [
            0.0 if plant.config(y).is_off else values.get(p_name(plant.name, y, t), 0.0)
            for t, y in zip(range(1, T + 1), path)
        ]
        plants[plant.name] = Schedule.from_outputs(plant.name, path, outputs)
    units = {}
    for unit in instance.units:
        path, outputs = [], []
        for t in range(1, T + 1):
            n = unit_names(unit.id, t)
            on = values.get(n["u"], 0.0) > 0.5
            path.append("on" if on else "off")
            outputs.append(values.get(n["p"], 0.0) if on else 0.0)
        units[unit.id] = Schedule.from_outputs(unit.id, path, outputs)
    shed = tuple(values.get(f"shed[{t}]", 0.0) for t in range(1, T + 1))
    return SystemSchedules(plants, units, shed)


def validate_system(
    instance: SystemInstance, schedules: SystemSchedules, mode: CheckMode | str = CheckMode.HYBRID
) -> list[Violation]:
    """Violations of every plant (under ``mode``) and every unit (full rules)."""
    out: list[Violation] = []
    for plant in instance.plants:
        out += validate_schedule(plant, schedules.plants[plant.name], mode, instance.horizon)
    for unit in instance.units:
        out += validate_schedule(unit.as_plant(), schedules.units[unit.id], CheckMode.HYBRID, instance.horizon)
    return out
