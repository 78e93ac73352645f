"""Configuration-based baseline: typed upward transitions priced by plant warmth.

Each upward transition carries one binary per warmth tier.  The warmth clock
is the time since the plant's offline status last changed: for a start out of
the all-off configuration that is how long the plant was off, and for a move
between online configurations it is how long ago the plant left all-off.
"""

from __future__ import annotations

from ccgtuc.formulation.hybrid import transition_terms
from ccgtuc.formulation.model import MilpModel, Sense
from ccgtuc.formulation.rows import v_name, warmth_rows
from ccgtuc.plant import CcgtPlant, PlantError, StartupTier, derive_cfbm_costs, initial_plant_clock

__all__ = ["WARMTH_RULE", "transition_cost_tables", "add_cfbm_startup_types"]

WARMTH_RULE = "hours since the plant last changed offline status (left or entered all-off)"


def transition_cost_tables(plant: CcgtPlant) -> dict[tuple[str, str], tuple[StartupTier, ...]]:
    """Instance tables when given (must cover every upward transition), else derived ones."""
    if plant.cfbm_costs is None:
        return derive_cfbm_costs(plant)
    missing = [tr.key for tr in plant.upward_transitions if tr.key not in plant.cfbm_costs]
    if missing:
        raise PlantError(f"plant {plant.name!r} has no transition cost table for {missing}")
    return dict(plant.cfbm_costs)


def add_cfbm_startup_types(model: MilpModel, plant: CcgtPlant, horizon: int, tables) -> None:
    """Warmth rows on the typed transition binaries plus their costs."""
    name = plant.name
    off = plant.off_config.id
    change_keys = [tr.key for tr in plant.transitions if off in tr.key]
    clock = initial_plant_clock(plant)
    for tr in plant.upward_transitions:
        tiers = tables[tr.key]
        for row in warmth_rows(tiers, horizon, clock, bool(change_keys)):
            v = v_name(name, tr.key, row.t, row.w)
            tag = f"{name},{tr.from_config},{tr.to_config},{row.t},{row.w}"
            if row.window:
                events = [(e, -1.0) for s in row.window for key in change_keys for e in transition_terms(model, plant, key, s)]
                model.add_constraint(f"cftype[{tag}]", [(v, 1.0)] + events, Sense.LE, 0.0, "cfbm_type")
            else:
                model.add_constraint(f"cftype0[{tag}]", [(v, 1.0)], Sense.EQ, 0.0, "cfbm_type_init")
        for t in range(1, horizon + 1):
            for w, tier in enumerate(tiers, start=1):
                model.add_objective(v_name(name, tr.key, t, w), tier.cost)
