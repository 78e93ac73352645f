"""Assemble complete models from a plant, a variant and a market context."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ccgtuc.formulation import hybrid
from ccgtuc.formulation.cfbm import WARMTH_RULE, add_cfbm_startup_types, transition_cost_tables
from ccgtuc.formulation.model import Domain, MilpModel, Sense
from ccgtuc.formulation.options import BuildOptions, Variant
from ccgtuc.formulation.rows import p_name
from ccgtuc.plant import CcgtPlant, _require_valid, derive_mapping

__all__ = ["MarketContext", "build", "add_plant", "add_market", "RAMP_ENTRY_RULE"]

RAMP_ENTRY_RULE = "entry hour limited by the destination configuration's startup ramp"


@dataclass(frozen=True)
class MarketContext:
    """Either a demand to serve (with load shedding) or prices to sell into.

    Demand adds a per-hour balance row with a shed variable charged at
    ``value_of_lost_load``; prices make each plant a price taker whose revenue
    is subtracted from its cost.
    """

    demand: tuple[float, ...] | None = None
    prices: tuple[float, ...] | None = None
    value_of_lost_load: float = 10000.0

    def __post_init__(self):
        if (self.demand is None) == (self.prices is None):
            raise ValueError("market context needs exactly one of demand or prices")
        for field_name in ("demand", "prices"):
            value = getattr(self, field_name)
            if value is not None:
                value = tuple(float(v) for v in value)
                if not all(math.isfinite(v) for v in value):
                    raise ValueError(f"{field_name} must be finite")
                object.__setattr__(self, field_name, value)
        if self.demand is not None and min(self.demand, default=0.0) < 0:
            raise ValueError("demand must be non-negative")
        if not self.value_of_lost_load > 0:
            raise ValueError("value_of_lost_load must be positive")

    @property
    def horizon(self) -> int:
        return len(self.demand if self.demand is not None else self.prices)


def add_plant(model: MilpModel, plant: CcgtPlant, options: BuildOptions, horizon: int) -> None:
    """Add one plant's variables, rows and cost terms for the chosen variant."""
    _require_valid(plant)
    for c in plant.configurations:
        n = c.profile_length()
        if n is not None and n < horizon:
            raise ValueError(f"configuration {c.id!r} capacity profile covers {n} < {horizon} hours")
    mapping = derive_mapping(plant)
    tables = None
    if options.is_cfbm:
        tables = transition_cost_tables(plant)
        typed = {tr.key: len(tables[tr.key]) for tr in plant.upward_transitions}
        hybrid.declare_variables(model, plant, horizon, options, cfbm_tiers=typed)
    else:
        hybrid.declare_variables(model, plant, horizon, options)

    hybrid.add_exclusivity(model, plant, horizon)
    if options.transition_logic in ("config", "both"):
        hybrid.add_transition_logic_config(model, plant, horizon)
    if options.transition_logic in ("turbine", "both"):
        hybrid.add_transition_logic_pt(model, plant, mapping, horizon)
    hybrid.add_transition_links(model, plant, horizon)
    hybrid.add_capacity(model, plant, horizon)
    hybrid.add_objective(model, plant, horizon)
    hybrid.add_ramps(model, plant, horizon)
    if options.pt_min_updown:
        hybrid.add_min_updown(model, plant, mapping, horizon, options.min_updown_turbines(plant))
        hybrid.add_initial_conditions(model, plant, mapping, horizon)
    if options.is_cfbm:
        add_cfbm_startup_types(model, plant, horizon, tables)
    else:
        hybrid.add_startup_types(model, plant, mapping, horizon)
        if options.include_daily_start_caps:
            hybrid.add_daily_start_caps(model, plant, mapping, horizon)
        for hook in hybrid.EXTRA_TIGHTENING_HOOKS:
            if options.variant is not Variant.F5:
                hook(model, plant, mapping, horizon, options)


def add_market(model: MilpModel, plants: Sequence[CcgtPlant], context: MarketContext, horizon: int, extra_output=()):
    """Balance rows or price terms over the plants' outputs.

    ``extra_output`` maps hour -> list of further output variables (regular
    units) to include in the balance or revenue.
    """
    extra = dict(extra_output) if extra_output else {}
    for t in range(1, horizon + 1):
        outputs = [
            p_name(plant.name, c.id, t) for plant in plants for c in plant.configurations if not c.is_off
        ] + list(extra.get(t, ()))
        if context.demand is not None:
            d = context.demand[t - 1]
            shed = model.add_variable(f"shed[{t}]", Domain.CONTINUOUS, 0.0, d)
            model.add_objective(shed, context.value_of_lost_load)
            model.add_constraint(
                f"balance[{t}]", [(p, 1.0) for p in outputs] + [(shed, 1.0)], Sense.EQ, d, "balance"
            )
        else:
            for p in outputs:
                model.add_objective(p, -context.prices[t - 1])


def build(plant: CcgtPlant, options: BuildOptions | Variant | str, horizon: int, context: MarketContext | None = None) -> MilpModel:
    """Complete single-plant model.

    Without a context only the plant's own costs are minimised.  Metadata
    records the emitted row families, the variant and the modelling rules
    chosen where the formulation leaves room.
    """
    if not isinstance(options, BuildOptions):
        options = BuildOptions.preset(options)
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    if context is not None and context.horizon != horizon:
        raise ValueError(f"market context covers {context.horizon} hours, horizon is {horizon}")
    model = MilpModel(name=f"{plant.name}_{options.variant.value}")
    add_plant(model, plant, options, horizon)
    if context is not None:
        add_market(model, [plant], context, horizon)
    finish_metadata(model, options, horizon)
    return model


def finish_metadata(model: MilpModel, options: BuildOptions, horizon: int) -> None:
    model.metadata.update(
        variant=options.variant.value,
        horizon=horizon,
        options=options,
        families=model.family_counts(),
        ramp_entry_rule=RAMP_ENTRY_RULE,
        extra_tightening_hooks=len(hybrid.EXTRA_TIGHTENING_HOOKS),
    )
    if options.is_cfbm:
        model.metadata["cfbm_warmth_rule"] = WARMTH_RULE
    if options.variant is Variant.F5:
        model.metadata["alias_of"] = Variant.F1.value
