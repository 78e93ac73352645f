"""Row families of the configuration-component hybrid model.

Every adder works on one plant and hours ``1..horizon``.  Hour 0 is the
plant's initial state and enters the rows as constants.
"""

from __future__ import annotations

from ccgtuc.formulation.model import Domain, MilpModel, Sense
from ccgtuc.formulation.options import BuildOptions
from ccgtuc.formulation.rows import (
    delta_name,
    lambda_name,
    p_name,
    startup_type_rows,
    u_name,
    v_name,
)
from ccgtuc.plant import CcgtPlant, MappingMatrices

__all__ = [
    "declare_variables",
    "add_exclusivity",
    "add_transition_logic_config",
    "add_transition_logic_pt",
    "add_transition_links",
    "add_capacity",
    "add_objective",
    "add_ramps",
    "add_min_updown",
    "add_initial_conditions",
    "add_startup_types",
    "add_daily_start_caps",
    "transition_terms",
    "EXTRA_TIGHTENING_HOOKS",
]

# Callables ``hook(model, plant, mapping, horizon, options)`` run after the
# hybrid families; F5 is meant to differ from F1 by one such family.
EXTRA_TIGHTENING_HOOKS: list = []


def transition_terms(model: MilpModel, plant: CcgtPlant, key: tuple[str, str], t: int) -> list[str]:
    """Variables whose sum is the 0/1 indicator of transition ``key`` at ``t``."""
    typed = model.metadata.get("cfbm_tiers", {}).get(plant.name)
    if typed and key in typed:
        return [v_name(plant.name, key, t, w) for w in range(1, typed[key] + 1)]
    return [v_name(plant.name, key, t)]


def _u0(plant: CcgtPlant, y: str) -> float:
    return 1.0 if y == plant.init_config else 0.0


def declare_variables(model: MilpModel, plant: CcgtPlant, horizon: int, options: BuildOptions, cfbm_tiers=None):
    """u, v, p, interpolation weights and (hybrid only) startup-type indicators."""
    name = plant.name
    v_domain = Domain.BINARY if options.transition_vars == "binary" else Domain.CONTINUOUS
    d_domain = Domain.BINARY if options.startup_indicator_vars == "binary" else Domain.CONTINUOUS
    if cfbm_tiers is not None:
        model.metadata.setdefault("cfbm_tiers", {})[name] = dict(cfbm_tiers)
    for t in range(1, horizon + 1):
        for c in plant.configurations:
            model.add_variable(u_name(name, c.id, t), Domain.BINARY)
        for tr in plant.transitions:
            if cfbm_tiers is not None and tr.key in cfbm_tiers:
                for w in range(1, cfbm_tiers[tr.key] + 1):
                    model.add_variable(v_name(name, tr.key, t, w), v_domain, 0.0, 1.0)
            else:
                model.add_variable(v_name(name, tr.key, t), v_domain, 0.0, 1.0)
        for c in plant.configurations:
            if c.is_off:
                continue
            model.add_variable(p_name(name, c.id, t), Domain.CONTINUOUS, 0.0, c.p_max_at(t))
            for k in range(len(c.cost_curve)):
                model.add_variable(lambda_name(name, c.id, t, k), Domain.CONTINUOUS, 0.0, 1.0)
        if cfbm_tiers is None:
            for x in plant.turbines:
                for w in range(1, len(x.startup_tiers) + 1):
                    model.add_variable(delta_name(name, x.id, t, w), d_domain, 0.0, 1.0)


def add_exclusivity(model: MilpModel, plant: CcgtPlant, horizon: int):
    for t in range(1, horizon + 1):
        model.add_constraint(
            f"excl[{plant.name},{t}]",
            [(u_name(plant.name, c.id, t), 1.0) for c in plant.configurations],
            Sense.EQ,
            1.0,
            "exclusivity",
        )


def add_transition_logic_config(model: MilpModel, plant: CcgtPlant, horizon: int):
    """Status change of each configuration equals transitions in minus out."""
    name = plant.name
    for t in range(1, horizon + 1):
        for c in plant.configurations:
            terms = [(u_name(name, c.id, t), 1.0)]
            rhs = 0.0
            if t == 1:
                rhs = _u0(plant, c.id)
            else:
                terms.append((u_name(name, c.id, t - 1), -1.0))
            for tr in plant.transitions:
                if tr.to_config == c.id:
                    terms += [(v, -1.0) for v in transition_terms(model, plant, tr.key, t)]
                elif tr.from_config == c.id:
                    terms += [(v, 1.0) for v in transition_terms(model, plant, tr.key, t)]
            model.add_constraint(f"trcfg[{name},{c.id},{t}]", terms, Sense.EQ, rhs, "transition_config")


def add_transition_logic_pt(model: MilpModel, plant: CcgtPlant, mapping: MappingMatrices, horizon: int):
    """Turbine status change equals its starts minus its stops."""
    name = plant.name
    for t in range(1, horizon + 1):
        for x in plant.turbines:
            terms = [(u_name(name, y, t), 1.0) for y in mapping.on_sets[x.id]]
            rhs = 0.0
            if t == 1:
                rhs = float(x.init_on)
            else:
                terms += [(u_name(name, y, t - 1), -1.0) for y in mapping.on_sets[x.id]]
            for key in mapping.ut_sets[x.id]:
                terms += [(v, -1.0) for v in transition_terms(model, plant, key, t)]
            for key in mapping.dt_sets[x.id]:
                terms += [(v, 1.0) for v in transition_terms(model, plant, key, t)]
            model.add_constraint(f"trpt[{name},{x.id},{t}]", terms, Sense.EQ, rhs, "transition_pt")


def add_transition_links(model: MilpModel, plant: CcgtPlant, horizon: int):
    """A transition at ``t`` needs its source on at ``t-1`` and its target on at ``t``."""
    name = plant.name
    for t in range(1, horizon + 1):
        for tr in plant.transitions:
            vs = [(v, 1.0) for v in transition_terms(model, plant, tr.key, t)]
            tag = f"{name},{tr.from_config},{tr.to_config},{t}"
            if t == 1:
                model.add_constraint(f"lkfrom[{tag}]", vs, Sense.LE, _u0(plant, tr.from_config), "link_from")
            else:
                model.add_constraint(
                    f"lkfrom[{tag}]", vs + [(u_name(name, tr.from_config, t - 1), -1.0)], Sense.LE, 0.0, "link_from"
                )
            model.add_constraint(
                f"lkto[{tag}]", vs + [(u_name(name, tr.to_config, t), -1.0)], Sense.LE, 0.0, "link_to"
            )


def add_capacity(model: MilpModel, plant: CcgtPlant, horizon: int):
    name = plant.name
    for t in range(1, horizon + 1):
        for c in plant.configurations:
            if c.is_off:
                continue
            p, u = p_name(name, c.id, t), u_name(name, c.id, t)
            model.add_constraint(f"pmin[{name},{c.id},{t}]", [(p, 1.0), (u, -c.p_min_at(t))], Sense.GE, 0.0, "capacity_min")
            model.add_constraint(f"pmax[{name},{c.id},{t}]", [(p, 1.0), (u, -c.p_max_at(t))], Sense.LE, 0.0, "capacity_max")


def add_objective(model: MilpModel, plant: CcgtPlant, horizon: int):
    """Piecewise energy cost by convex combination (SOS2) plus no-load cost."""
    name = plant.name
    for t in range(1, horizon + 1):
        for c in plant.configurations:
            if c.is_off:
                continue
            u, p = u_name(name, c.id, t), p_name(name, c.id, t)
            lams = [lambda_name(name, c.id, t, k) for k in range(len(c.cost_curve))]
            model.add_constraint(
                f"cvx[{name},{c.id},{t}]", [(lam, 1.0) for lam in lams] + [(u, -1.0)], Sense.EQ, 0.0, "pwl_convexity"
            )
            model.add_constraint(
                f"pdef[{name},{c.id},{t}]",
                [(p, 1.0)] + [(lam, -mw) for lam, (mw, _) in zip(lams, c.cost_curve)],
                Sense.EQ,
                0.0,
                "pwl_output",
            )
            model.add_sos2(
                f"sos[{name},{c.id},{t}]",
                [(lam, mw) for lam, (mw, _) in zip(lams, c.cost_curve)],
                output=p,
                costs=[cost for _, cost in c.cost_curve],
            )
            for lam, (_, cost) in zip(lams, c.cost_curve):
                model.add_objective(lam, cost)
            model.add_objective(u, c.no_load_cost)


def add_ramps(model: MilpModel, plant: CcgtPlant, horizon: int):
    """Stay-on ramp limits; entry hours use the destination's startup ramp, exits are unramped."""
    name = plant.name
    for t in range(1, horizon + 1):
        for c in plant.configurations:
            if c.is_off:
                continue
            p, u = p_name(name, c.id, t), u_name(name, c.id, t)
            p_prev = p0 = 0.0
            if t == 1:
                p0 = plant.init_output if c.id == plant.init_config else 0.0
            else:
                p_prev = p_name(name, c.id, t - 1)
            up = [(p, 1.0)]
            if t > 1:
                up.append((p_prev, -1.0))
            for tr in plant.transitions:
                if tr.to_config == c.id:
                    up += [(v, -(c.startup_ramp - c.ramp_up)) for v in transition_terms(model, plant, tr.key, t)]
            model.add_constraint(f"rup[{name},{c.id},{t}]", up, Sense.LE, c.ramp_up + p0, "ramp_up")
            cap_prev = c.p_max_at(t - 1)
            down = [(p, -1.0), (u, cap_prev - c.ramp_down)]
            if t > 1:
                down.append((p_prev, 1.0))
            model.add_constraint(f"rdn[{name},{c.id},{t}]", down, Sense.LE, cap_prev - p0, "ramp_down")


def add_min_updown(model: MilpModel, plant: CcgtPlant, mapping: MappingMatrices, horizon: int, selection=None):
    """Facet rows: starts in the last TU hours force on, stops in the last TD hours force off.

    Windows are truncated at hour 1, so rows exist for every hour of the horizon.
    """
    name = plant.name
    chosen = [x for x in plant.turbines if selection is None or x.id in selection]
    for x in chosen:
        ut, dt = mapping.ut_sets[x.id], mapping.dt_sets[x.id]
        for t in range(1, horizon + 1):
            on = [(u_name(name, y, t), 1.0) for y in mapping.on_sets[x.id]]
            if ut:
                window = range(max(1, t - x.min_up_time + 1), t + 1)
                starts = [(v, 1.0) for s in window for key in ut for v in transition_terms(model, plant, key, s)]
                model.add_constraint(
                    f"minup[{name},{x.id},{t}]", starts + [(u, -1.0) for u, _ in on], Sense.LE, 0.0, "min_up"
                )
            if dt:
                window = range(max(1, t - x.min_down_time + 1), t + 1)
                stops = [(v, 1.0) for s in window for key in dt for v in transition_terms(model, plant, key, s)]
                model.add_constraint(f"mindn[{name},{x.id},{t}]", stops + on, Sense.LE, 1.0, "min_down")


def add_initial_conditions(model: MilpModel, plant: CcgtPlant, mapping: MappingMatrices, horizon: int):
    """Pin each turbine to its initial status until its residual up/down time has elapsed."""
    name = plant.name
    for x in plant.turbines:
        up, down = x.required_initial_hours()
        for t in range(1, min(horizon, up + down) + 1):
            model.add_constraint(
                f"init[{name},{x.id},{t}]",
                [(u_name(name, y, t), 1.0) for y in mapping.on_sets[x.id]],
                Sense.EQ,
                float(x.init_on),
                "init_fix",
            )


def add_startup_types(model: MilpModel, plant: CcgtPlant, mapping: MappingMatrices, horizon: int):
    """Per-turbine warmth indicators; each start picks one tier and pays its cost."""
    name = plant.name
    for x in plant.turbines:
        dt = mapping.dt_sets[x.id]
        for row in startup_type_rows(x, horizon, bool(dt)):
            d = delta_name(name, x.id, row.t, row.w)
            if row.window:
                stops = [(v, -1.0) for s in row.window for key in dt for v in transition_terms(model, plant, key, s)]
                model.add_constraint(
                    f"sutype[{name},{x.id},{row.t},{row.w}]", [(d, 1.0)] + stops, Sense.LE, 0.0, "startup_type"
                )
            else:
                model.add_constraint(
                    f"sutype0[{name},{x.id},{row.t},{row.w}]", [(d, 1.0)], Sense.EQ, 0.0, "startup_type_init"
                )
        for t in range(1, horizon + 1):
            terms = [(delta_name(name, x.id, t, w), 1.0) for w in range(1, len(x.startup_tiers) + 1)]
            for key in mapping.ut_sets[x.id]:
                terms += [(v, -1.0) for v in transition_terms(model, plant, key, t)]
            model.add_constraint(f"susum[{name},{x.id},{t}]", terms, Sense.EQ, 0.0, "startup_sum")
            for w, tier in enumerate(x.startup_tiers, start=1):
                model.add_objective(delta_name(name, x.id, t, w), tier.cost)


def add_daily_start_caps(model: MilpModel, plant: CcgtPlant, mapping: MappingMatrices, horizon: int):
    """At most ``max_daily_starts`` starts per turbine in each 24-hour day of the horizon."""
    name = plant.name
    for x in plant.turbines:
        ut = mapping.ut_sets[x.id]
        if x.max_daily_starts is None or not ut:
            continue
        for day in range(-(-horizon // 24)):
            hours = range(24 * day + 1, min(horizon, 24 * day + 24) + 1)
            terms = [(v, 1.0) for t in hours for key in ut for v in transition_terms(model, plant, key, t)]
            model.add_constraint(
                f"starts[{name},{x.id},{day + 1}]", terms, Sense.LE, float(x.max_daily_starts), "daily_starts"
            )
