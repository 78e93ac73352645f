"""Small plants and seeded study instances with integer data.

Integer capacities, ramps, breakpoints and market data keep the oracle's
1 MW dispatch grid exact, so MILP and brute-force optima can be compared
without a grid error term.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ccgtuc.formulation.build import MarketContext
from ccgtuc.plant import (
    CcgtPlant,
    Configuration,
    PhysicalTurbine,
    StartupTier,
    TurbineKind,
    build_aggregate,
)

__all__ = [
    "COMPLETE_TRANSITIONS",
    "two_by_one_plant",
    "two_by_one_aggregate",
    "random_aggregate_instance",
    "one_by_one_plant",
    "misprice_instance",
]

CT_TIERS = (StartupTier(1, 2, 300.0), StartupTier(2, 4, 500.0), StartupTier(3, 6, 800.0))
ST_TIERS = (StartupTier(1, 1, 200.0), StartupTier(2, 3, 400.0), StartupTier(3, 5, 700.0))

# (id, turbines, p_min, p_max, ramp_up, ramp_down, startup_ramp, no_load, curve)
_CONFIGS = (
    ("off", (), 0, 0, 1, 1, 1, 0, ()),
    ("CT1", ("CT1",), 40, 120, 30, 40, 60, 150, ((40, 1600), (80, 3000), (120, 4600))),
    ("CT2", ("CT2",), 40, 120, 30, 40, 60, 150, ((40, 1600), (80, 3000), (120, 4600))),
    ("CT1+CT2", ("CT1", "CT2"), 80, 240, 60, 80, 100, 280, ((80, 3100), (160, 5900), (240, 9000))),
    ("CT1+ST", ("CT1", "ST"), 60, 180, 40, 60, 80, 180, ((60, 1900), (120, 3800), (180, 5900))),
    ("CT2+ST", ("CT2", "ST"), 60, 180, 40, 60, 80, 180, ((60, 1900), (120, 3800), (180, 5900))),
    ("CT1+CT2+ST", ("CT1", "CT2", "ST"), 120, 360, 80, 120, 140, 320, ((120, 3700), (240, 7500), (360, 11600))),
)

_UPWARD = (
    ("off", "CT1"),
    ("off", "CT2"),
    ("off", "CT1+CT2"),
    ("CT1", "CT1+CT2"),
    ("CT1", "CT1+ST"),
    ("CT2", "CT1+CT2"),
    ("CT2", "CT2+ST"),
    ("CT1+CT2", "CT1+CT2+ST"),
    ("CT1+ST", "CT1+CT2+ST"),
    ("CT2+ST", "CT1+CT2+ST"),
)

# ten upward moves, then the same ten reversed
COMPLETE_TRANSITIONS = _UPWARD + tuple((b, a) for a, b in _UPWARD)


def two_by_one_plant(
    name: str = "cc1",
    init_config: str = "off",
    init_hours: int = 8,
    init_output: float | None = None,
    max_daily_starts: int | None = None,
) -> CcgtPlant:
    """Two CTs and one ST with all seven valid configurations.

    ``init_hours`` is how long every turbine has been in its initial status.
    """
    configs = tuple(
        Configuration(cid, frozenset(on), pmin, pmax, ru, rd, su, nl, curve)
        for cid, on, pmin, pmax, ru, rd, su, nl, curve in _CONFIGS
    )
    init_on = next(c for c in configs if c.id == init_config).turbines_on

    def turbine(tid, kind, tu, td, tiers):
        on = tid in init_on
        return PhysicalTurbine(
            tid,
            kind,
            min_up_time=tu,
            min_down_time=td,
            startup_tiers=tiers,
            max_daily_starts=max_daily_starts,
            init_on=on,
            init_on_hours=init_hours if on else 0,
            init_off_hours=0 if on else init_hours,
        )

    turbines = (
        turbine("CT1", TurbineKind.CT, 2, 2, CT_TIERS),
        turbine("CT2", TurbineKind.CT, 2, 2, CT_TIERS),
        turbine("ST", TurbineKind.ST, 2, 1, ST_TIERS),
    )
    if init_output is None:
        init_output = next(c.p_min_at(1) for c in configs if c.id == init_config)
    return CcgtPlant(name, turbines, configs, COMPLETE_TRANSITIONS, init_config, init_output)


def two_by_one_aggregate(name: str = "cc1", **kwargs) -> CcgtPlant:
    """Five-configuration aggregate with CT1 preferred over CT2."""
    return build_aggregate(two_by_one_plant(name, **kwargs), ["CT1", "CT2", "ST"])


_AGG_INIT = {"off": "off", "1CT": "CT1", "2CT": "CT1+CT2", "1CT+1ST": "CT1+ST", "2CT+1ST": "CT1+CT2+ST"}


def random_aggregate_instance(seed: int, horizon: int = 6) -> tuple[CcgtPlant, MarketContext]:
    """Aggregate 2x1 plant with a random initial state and market.

    Even seeds serve a demand profile, odd seeds sell into a price curve with
    one spike.  All data stay integral.  Draws whose demand cannot be met
    without over-generation are discarded (checked by brute force), so every
    returned instance is feasible.
    """
    from ccgtuc.oracle import brute_force_optimal

    for attempt in range(1000):
        plant, context = _draw_aggregate(np.random.default_rng([seed, attempt]), seed % 2 == 0, horizon)
        if context.prices is not None or brute_force_optimal(plant, context).feasible:
            return plant, context
    raise RuntimeError(f"no feasible draw for seed {seed}")


def _draw_aggregate(rng: np.random.Generator, with_demand: bool, horizon: int) -> tuple[CcgtPlant, MarketContext]:
    init_agg = str(rng.choice(list(_AGG_INIT)))
    init_hours = int(rng.integers(1, 9))
    plant = two_by_one_aggregate(
        init_config=_AGG_INIT[init_agg],
        init_hours=init_hours,
        max_daily_starts=int(rng.integers(1, 3)) if rng.random() < 0.3 else None,
    )
    c = plant.config(init_agg)
    if not c.is_off:
        plant = replace(plant, init_output=float(rng.integers(int(c.p_min_at(1)), int(c.p_max_at(1)) + 1)))
    # jitter the tier costs while keeping them strictly increasing
    turbines = []
    for x in plant.turbines:
        base = int(rng.integers(100, 400))
        steps = rng.integers(50, 300, size=len(x.startup_tiers))
        costs = base + np.cumsum(steps) - steps[0]
        tiers = tuple(replace(tier, cost=float(cost)) for tier, cost in zip(x.startup_tiers, costs))
        turbines.append(replace(x, startup_tiers=tiers))
    plant = replace(plant, turbines=tuple(turbines))

    if with_demand:
        base = rng.integers(0, 200, size=horizon)
        peak = int(rng.integers(0, horizon))
        base[peak] += int(rng.integers(100, 250))
        return plant, MarketContext(demand=tuple(float(v) for v in base), value_of_lost_load=120.0)
    prices = rng.integers(15, 45, size=horizon)
    spike = int(rng.integers(0, horizon))
    prices[spike] += int(rng.integers(20, 80))
    return plant, MarketContext(prices=tuple(float(v) for v in prices))


def one_by_one_plant(name: str = "cc1", init_config: str = "CT+ST", init_hours: int = 10, init_output: float = 120.0) -> CcgtPlant:
    """One CT and one ST: off, CT alone, CT+ST."""
    rows = {cid: row for cid, *row in _CONFIGS}
    configs = (
        Configuration("off", frozenset(), *rows["off"][1:]),
        Configuration("CT", frozenset({"CT"}), *rows["CT1"][1:]),
        Configuration("CT+ST", frozenset({"CT", "ST"}), *rows["CT1+ST"][1:]),
    )
    on = next(c for c in configs if c.id == init_config).turbines_on

    def turbine(tid, kind, tu, td, tiers):
        return PhysicalTurbine(
            tid, kind, tu, td, tiers,
            init_on=tid in on,
            init_on_hours=init_hours if tid in on else 0,
            init_off_hours=0 if tid in on else init_hours,
        )

    turbines = (turbine("CT", TurbineKind.CT, 2, 2, CT_TIERS), turbine("ST", TurbineKind.ST, 2, 1, ST_TIERS))
    transitions = (("off", "CT"), ("CT", "CT+ST"), ("CT+ST", "CT"), ("CT", "off"))
    if init_config == "off":
        init_output = 0.0
    return CcgtPlant(name, turbines, configs, transitions, init_config, init_output)


def misprice_instance(horizon: int = 6) -> tuple[CcgtPlant, MarketContext, float]:
    """The CT runs throughout while the ST cycles off for one hour.

    A negative price in hour 3 makes dropping the ST worthwhile but not
    shutting the whole plant.  The ST restart an hour later is hot for the
    hybrid model (short downtime), but the plant left all-off long ago, so
    the configuration baseline prices the same move at its cold tier.
    Returns the plant, the market and the expected objective gap (cold
    minus hot ST cost).
    """
    if horizon < 5:
        raise ValueError("need at least 5 hours")
    plant = one_by_one_plant()
    st = plant.turbine("ST")
    gap = st.startup_tiers[-1].cost - st.startup_tiers[0].cost
    prices = tuple(-50.0 if t == 3 else 60.0 for t in range(1, horizon + 1))
    return plant, MarketContext(prices=prices), gap
