from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import strategies as st

from ccgtuc.formulation.rows import delta_name, lambda_name, p_name, u_name, v_name
from ccgtuc.milp_io import SolveStatus, solve
from ccgtuc.oracle.schedule import cfbm_startup_costs, startup_events, transition_events
from ccgtuc.plant import CcgtPlant, Configuration, PhysicalTurbine, StartupTier, TurbineKind

# criterion number -> (passed, summary), filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {text}")


def solve_optimal(model, gap: float = 1e-9, **kw):
    sol = solve(model, gap=gap, **kw)
    assert sol.status is SolveStatus.OPTIMAL, (sol.status, sol.warnings, sol.output[-2000:])
    return sol


def rel_close(a: float, b: float, rel: float = 1e-6) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(b))


def interpolation_weights(curve, p: float) -> list[float]:
    xs = [bp[0] for bp in curve]
    weights = [0.0] * len(xs)
    for k in range(len(xs) - 1):
        if xs[k] - 1e-9 <= p <= xs[k + 1] + 1e-9:
            frac = (p - xs[k]) / (xs[k + 1] - xs[k])
            weights[k], weights[k + 1] = 1.0 - frac, frac
            return weights
    raise ValueError(f"{p} outside curve")


def embed(model, plant: CcgtPlant, schedule, cfbm: bool = False) -> dict[str, float]:
    """Variable values that encode ``schedule`` in a single-plant model.

    Transitions the plant does not declare have no variable, so an illegal
    path shows up as a violated transition row.
    """
    values = {name: 0.0 for name in model.variables}
    path = schedule.config_path
    name = plant.name
    for t, (y, p) in enumerate(zip(path, schedule.outputs), start=1):
        values[u_name(name, y, t)] = 1.0
        c = plant.config(y)
        if not c.is_off:
            values[p_name(name, y, t)] = p
            for k, w in enumerate(interpolation_weights(c.cost_curve, p)):
                values[lambda_name(name, y, t, k)] = w
    typed = {}
    if cfbm:
        typed = {(t, key): w for t, key, w, _ in cfbm_startup_costs(plant, path)}
    for t, key in transition_events(plant, path):
        var = v_name(name, key, t, typed[(t, key)]) if (t, key) in typed else v_name(name, key, t)
        if var in values:
            values[var] = 1.0
    if not cfbm:
        for ev in startup_events(plant, path):
            values[delta_name(name, ev.turbine, ev.hour, ev.warmth)] = 1.0
    return values


def add_shed(values: dict, context, totals) -> dict:
    if context is not None and context.demand is not None:
        for t, (d, p) in enumerate(zip(context.demand, totals), start=1):
            values[f"shed[{t}]"] = d - p
    return values


@st.composite
def random_plants(draw, max_turbines: int = 3):
    """Small valid plants with arbitrary on-sets and transition graphs."""
    n = draw(st.integers(1, max_turbines))
    ids = [f"G{k}" for k in range(n)]
    subsets = [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(ids, r)]
    chosen = draw(st.lists(st.sampled_from(subsets), min_size=1, max_size=len(subsets), unique=True))
    missing = set(ids) - set().union(*chosen)
    if missing:
        chosen.append(frozenset(missing))
    configs = [Configuration("off", frozenset(), 0, 0, 1, 1, 1)]
    for k, on in enumerate(chosen):
        m = len(on)
        lo, hi = 10 * m, 30 * m
        mid = (lo + hi) / 2
        slope1 = draw(st.integers(10, 30))
        slope2 = slope1 + draw(st.integers(0, 20))
        curve = ((lo, 100 * m), (mid, 100 * m + slope1 * (mid - lo)), (hi, 100 * m + slope1 * (mid - lo) + slope2 * (hi - mid)))
        configs.append(Configuration(f"C{k}", on, lo, hi, 10 * m, 10 * m, lo + 5, 20 * m, curve))
    names = [c.id for c in configs]
    pairs = [(a, b) for a in names for b in names if a != b]
    transitions = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs), unique=True))
    turbines = []
    for x in ids:
        td = draw(st.integers(1, 3))
        turbines.append(
            PhysicalTurbine(
                x,
                TurbineKind.CT,
                draw(st.integers(1, 3)),
                td,
                (StartupTier(1, td, 100.0), StartupTier(2, td + 2, 250.0), StartupTier(3, td + 4, 400.0)),
                init_on=False,
                init_on_hours=0,
                init_off_hours=draw(st.integers(1, 8)),
            )
        )
    return CcgtPlant("rp", tuple(turbines), tuple(configs), tuple(transitions), "off", 0.0)


@pytest.fixture(scope="session")
def cbc_path():
    from ccgtuc.milp_io.adapter import find_cbc

    path = find_cbc()
    if path is None:
        pytest.skip("CBC not installed (pip install pulp)")
    return path


def finite(x) -> bool:
    return x is not None and math.isfinite(x)
