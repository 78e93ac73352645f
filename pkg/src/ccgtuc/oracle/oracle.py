"""Brute-force optimum over every configuration path of a small instance.

Dispatch inside a run of one configuration (a "stint") is optimised by a
dynamic program over a MW grid, so the cost of every stint ``(y, a, b)`` is
known before the path search starts.  The path search itself lives in
:mod:`ccgtuc.oracle.kernel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.ndimage import minimum_filter1d

from ccgtuc.oracle import kernel
from ccgtuc.oracle.schedule import CheckMode, Schedule
from ccgtuc.plant import CcgtPlant, _require_valid, derive_cfbm_costs, initial_plant_clock

__all__ = ["OracleError", "OracleResult", "OracleTables", "brute_force_optimal", "prepare_tables", "window_min", "ENUMERATION_LIMIT"]

ENUMERATION_LIMIT = 10**7


class OracleError(ValueError):
    pass


@dataclass
class OracleTables:
    """Flat arrays describing one plant for the path search."""

    horizon: int
    n_configs: int
    n_turbines: int
    init_index: int
    allowed: np.ndarray  # (Y, Y) int8, diagonal = stay
    stint: np.ndarray  # (Y, T+2, T+2) cost of y over hours a..b
    hour_lb_suffix: np.ndarray  # (T+2,) sum of per-hour minimum costs from hour a on
    on_mask: np.ndarray  # (Y, X) int8
    init_on: np.ndarray
    init_hours: np.ndarray
    min_up: np.ndarray
    min_down: np.ndarray
    caps: np.ndarray  # -1 = uncapped
    tier_thr: np.ndarray  # (X, 3)
    tier_cost: np.ndarray
    tier_n: np.ndarray
    upward: np.ndarray  # (Y, Y) int8
    change: np.ndarray  # (Y, Y) int8: transition into or out of all-off
    trans_thr: np.ndarray  # (Y, Y, 3)
    trans_cost: np.ndarray
    trans_n: np.ndarray
    init_clock: int
    check_min_times: int
    check_caps: int
    cfbm_pricing: int
    prune: int = 1


@dataclass
class OracleResult:
    cost: float
    schedules: dict[str, Schedule]
    grid_step: float
    grid_bound: float
    visited: int
    kernel: str
    paths: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.cost)


def window_min(values: np.ndarray, left: int, right: int) -> np.ndarray:
    """``out[i] = min(values[i - left : i + right + 1])``, out-of-range treated as +inf."""
    size = left + right + 1
    return minimum_filter1d(values, size=size, mode="constant", cval=np.inf, origin=left - size // 2)


def _aligned(values: Sequence[float], step: float) -> bool:
    return all(abs(v / step - round(v / step)) < 1e-9 for v in values if math.isfinite(v))


class _Dispatch:
    """Per-hour grid costs and the stint dynamic program for one plant."""

    def __init__(self, plant: CcgtPlant, horizon: int, context, step: float):
        self.plant = plant
        self.T = horizon
        self.step = step
        self.context = context
        top = max((c.p_max_at(t) for c in plant.configurations for t in range(1, horizon + 1)), default=0.0)
        self.grid = np.arange(0, int(math.floor(top / step + 1e-9)) + 1) * step
        self.hour_cost: dict[tuple[str, int], np.ndarray] = {}
        for c in plant.configurations:
            for t in range(1, horizon + 1):
                self.hour_cost[(c.id, t)] = self._cost(c, t)

    def _market(self, t: int, p):
        ctx = self.context
        if ctx is None:
            return 0.0 * p
        if ctx.demand is not None:
            d = ctx.demand[t - 1]
            return np.where(p <= d + 1e-9, ctx.value_of_lost_load * np.maximum(d - p, 0.0), np.inf)
        return -ctx.prices[t - 1] * p

    def _cost(self, c, t: int) -> np.ndarray:
        g = self.grid
        if c.is_off:
            return np.where(g == 0, self._market(t, g), np.inf)
        xs = [bp[0] for bp in c.cost_curve]
        ys = [bp[1] for bp in c.cost_curve]
        lo, hi = c.p_min_at(t), c.p_max_at(t)
        ok = (g >= lo - 1e-9) & (g <= hi + 1e-9)
        energy = np.interp(g, xs, ys) + c.no_load_cost
        return np.where(ok, energy + self._market(t, g), np.inf)

    def stint(self, y: str, a: int, keep: bool = False):
        """Costs of staying in ``y`` from hour ``a`` to every later hour.

        Returns an array indexed by end hour (``inf`` where infeasible) and,
        with ``keep``, the per-hour value tables for backtracking.
        """
        c = self.plant.config(y)
        T = self.T
        out = np.full(T + 2, np.inf)
        tables = []
        if c.is_off:
            acc = 0.0
            for t in range(a, T + 1):
                acc += float(self.hour_cost[(y, t)][0])
                out[t] = acc
            return out, tables
        g = self.grid
        value = self.hour_cost[(y, a)].copy()
        if a == 1 and y == self.plant.init_config:
            p0 = self.plant.init_output
            value[(g - p0 > c.ramp_up + 1e-9) | (p0 - g > c.ramp_down + 1e-9)] = np.inf
        else:
            value[g > c.startup_ramp + 1e-9] = np.inf
        left = int(math.floor(c.ramp_up / self.step + 1e-9))
        right = int(math.floor(c.ramp_down / self.step + 1e-9))
        out[a] = value.min()
        tables.append(value)
        for t in range(a + 1, T + 1):
            if not math.isfinite(out[t - 1]):
                break
            value = self.hour_cost[(y, t)] + window_min(value, left, right)
            out[t] = value.min()
            if keep:
                tables.append(value)
        return out, tables

    def backtrack(self, y: str, a: int, b: int) -> list[float]:
        c = self.plant.config(y)
        if c.is_off:
            return [0.0] * (b - a + 1)
        _, tables = self.stint(y, a, keep=True)
        g = self.grid
        left = int(math.floor(c.ramp_up / self.step + 1e-9))
        right = int(math.floor(c.ramp_down / self.step + 1e-9))
        k = int(np.argmin(tables[b - a]))
        outs = [float(g[k])]
        for t in range(b - 1, a - 1, -1):
            # predecessor grid index q with q in [k - left, k + right]
            lo, hi = max(0, k - left), min(len(g) - 1, k + right)
            k = lo + int(np.argmin(tables[t - a][lo : hi + 1]))
            outs.append(float(g[k]))
        return outs[::-1]

    def hour_lower_bounds(self) -> np.ndarray:
        per_hour = np.array(
            [min(float(self.hour_cost[(c.id, t)].min()) for c in self.plant.configurations) for t in range(1, self.T + 1)]
        )
        suffix = np.zeros(self.T + 2)
        for t in range(self.T, 0, -1):
            suffix[t] = suffix[t + 1] + per_hour[t - 1]
        return suffix


def prepare_tables(
    plant: CcgtPlant,
    horizon: int,
    context=None,
    mode: CheckMode | str = CheckMode.HYBRID,
    step: float = 1.0,
    prune: bool = True,
):
    """Arrays for the path search plus the dispatch helper used to rebuild outputs."""
    mode = CheckMode(mode)
    _require_valid(plant)
    T = horizon
    ids = [c.id for c in plant.configurations]
    index = {y: i for i, y in enumerate(ids)}
    Y, X = len(ids), len(plant.turbines)
    disp = _Dispatch(plant, T, context, step)

    allowed = np.eye(Y, dtype=np.int8)
    upward = np.zeros((Y, Y), dtype=np.int8)
    change = np.zeros((Y, Y), dtype=np.int8)
    trans_thr = np.zeros((Y, Y, 3), dtype=np.int64)
    trans_cost = np.zeros((Y, Y, 3))
    trans_n = np.ones((Y, Y), dtype=np.int64)
    off = plant.off_config.id
    cfbm_pricing = mode is not CheckMode.HYBRID
    tables = None
    if cfbm_pricing:
        tables = plant.cfbm_costs if plant.cfbm_costs is not None else derive_cfbm_costs(plant)
    for tr in plant.transitions:
        i, j = index[tr.from_config], index[tr.to_config]
        allowed[i, j] = 1
        change[i, j] = int(off in tr.key)
        if tr.is_upward:
            upward[i, j] = 1
            if tables is not None:
                tiers = tables[tr.key]
                trans_n[i, j] = len(tiers)
                for w, tier in enumerate(tiers):
                    trans_thr[i, j, w] = tier.min_down_for_type
                    trans_cost[i, j, w] = tier.cost

    on_mask = np.zeros((Y, X), dtype=np.int8)
    for i, c in enumerate(plant.configurations):
        for k, x in enumerate(plant.turbines):
            on_mask[i, k] = int(x.id in c.turbines_on)
    tier_thr = np.zeros((X, 3), dtype=np.int64)
    tier_cost = np.zeros((X, 3))
    tier_n = np.zeros(X, dtype=np.int64)
    for k, x in enumerate(plant.turbines):
        tier_n[k] = len(x.startup_tiers)
        for w, tier in enumerate(x.startup_tiers):
            tier_thr[k, w] = tier.min_down_for_type
            tier_cost[k, w] = tier.cost

    stint = np.full((Y, T + 2, T + 2), np.inf)
    for i, y in enumerate(ids):
        for a in range(1, T + 1):
            stint[i, a, :] = disp.stint(y, a)[0]

    tab = OracleTables(
        horizon=T,
        n_configs=Y,
        n_turbines=X,
        init_index=index[plant.init_config],
        allowed=allowed,
        stint=stint,
        hour_lb_suffix=disp.hour_lower_bounds(),
        on_mask=on_mask,
        init_on=np.array([int(x.init_on) for x in plant.turbines], dtype=np.int64),
        init_hours=np.array([x.init_hours for x in plant.turbines], dtype=np.int64),
        min_up=np.array([x.min_up_time for x in plant.turbines], dtype=np.int64),
        min_down=np.array([x.min_down_time for x in plant.turbines], dtype=np.int64),
        caps=np.array(
            [-1 if x.max_daily_starts is None else x.max_daily_starts for x in plant.turbines], dtype=np.int64
        ),
        tier_thr=tier_thr,
        tier_cost=tier_cost,
        tier_n=tier_n,
        upward=upward,
        change=change,
        trans_thr=trans_thr,
        trans_cost=trans_cost,
        trans_n=trans_n,
        init_clock=initial_plant_clock(plant),
        check_min_times=int(mode.turbine_min_times),
        check_caps=int(mode.start_caps),
        cfbm_pricing=int(cfbm_pricing),
        prune=int(prune),
    )
    return tab, disp


def _grid_bound(plant: CcgtPlant, horizon: int, context, step: float) -> float:
    values = [plant.init_output]
    for c in plant.configurations:
        values += [c.ramp_up, c.ramp_down, c.startup_ramp]
        values += [c.p_min_at(t) for t in range(1, horizon + 1)] + [c.p_max_at(t) for t in range(1, horizon + 1)]
        values += [bp[0] for bp in c.cost_curve]
    if context is not None and context.demand is not None:
        values += list(context.demand)
    # with every MW quantity on the grid the dispatch optimum is attained on
    # the grid (interval constraints are totally unimodular); otherwise no
    # finite bound is claimed
    return 0.0 if _aligned(values, step) else math.inf


def _solve_plant(plant, horizon, context, mode, step, pure_python, prune):
    tab, disp = prepare_tables(plant, horizon, context, mode, step, prune)
    cost, path_idx, visited = kernel.enumerate_paths(tab, pure_python=pure_python)
    ids = [c.id for c in plant.configurations]
    if not math.isfinite(cost):
        return cost, None, visited
    path = tuple(ids[i] for i in path_idx)
    outputs: list[float] = []
    a = 1
    for t in range(1, horizon + 1):
        if t == horizon or path[t] != path[t - 1]:
            outputs += disp.backtrack(path[t - 1], a, t)
            a = t + 1
    return cost, Schedule.from_outputs(plant.name, path, outputs), visited


def brute_force_optimal(
    plants: CcgtPlant | Sequence[CcgtPlant],
    context=None,
    horizon: int | None = None,
    mode: CheckMode | str = CheckMode.HYBRID,
    dispatch_grid: float = 1.0,
    pure_python: bool | None = None,
    prune: bool = True,
) -> OracleResult:
    """Cheapest schedule over all configuration paths.

    Several plants are only supported against prices (or no market), where
    they decouple and their optima add up.  ``prune=False`` disables the
    lower-bound cut-off and visits every valid prefix.  Raises :class:`OracleError` when
    a plant has more than ``ENUMERATION_LIMIT`` paths.
    """
    if isinstance(plants, CcgtPlant):
        plants = [plants]
    plants = list(plants)
    if horizon is None:
        if context is None:
            raise OracleError("horizon is required without a market context")
        horizon = context.horizon
    if context is not None and context.horizon != horizon:
        raise OracleError(f"market context covers {context.horizon} hours, horizon is {horizon}")
    if context is not None and context.demand is not None and len(plants) != 1:
        raise OracleError("a demand context couples resources; the oracle handles one plant against demand")
    if dispatch_grid <= 0:
        raise OracleError("dispatch grid step must be positive")
    for plant in plants:
        n_paths = len(plant.configurations) ** horizon
        if n_paths > ENUMERATION_LIMIT:
            raise OracleError(
                f"plant {plant.name!r} has {len(plant.configurations)}^{horizon} = {n_paths} paths, above the "
                f"limit of {ENUMERATION_LIMIT}; use a shorter horizon or fewer configurations"
            )
    total, schedules, visited, bound = 0.0, {}, 0, 0.0
    for plant in plants:
        cost, schedule, n = _solve_plant(plant, horizon, context, CheckMode(mode), dispatch_grid, pure_python, prune)
        visited += n
        bound += _grid_bound(plant, horizon, context, dispatch_grid)
        total += cost
        if schedule is not None:
            schedules[plant.name] = schedule
    paths = {name: s.config_path for name, s in schedules.items()}
    return OracleResult(total, schedules, dispatch_grid, bound, visited, kernel.active_kernel(pure_python), paths)
