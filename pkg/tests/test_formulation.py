from __future__ import annotations

import warnings
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from ccgtuc.formulation.build import MarketContext, build
from ccgtuc.formulation.model import Domain, MilpModel, ModelError, Sense
from ccgtuc.formulation.options import BuildOptions, Variant
from ccgtuc.formulation.rows import startup_type_rows, u_name, v_name, warmth_rows
from ccgtuc.harness.fixtures import CT_TIERS, random_aggregate_instance, two_by_one_aggregate, two_by_one_plant
from ccgtuc.oracle import brute_force_optimal
from ccgtuc.oracle.schedule import Schedule, schedule_cost, validate_schedule
from ccgtuc.plant import StartupTier, classify_warmth, count_model_elements, derive_mapping
from conftest import add_shed, embed, random_plants, rel_close, solve_optimal

HYBRID = ["F1", "F2", "F3", "F4"]


def quiet_build(*args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build(*args, **kw)


@pytest.mark.parametrize("variant", ["F1", "F2", "F3", "F4", "CFBM", "HM1"])
def test_sizes_match_counting(variant):
    plant = two_by_one_aggregate(init_config="off", init_hours=3, max_daily_starts=2)
    model = build(plant, variant, 30)
    side = count_model_elements(plant, 30, BuildOptions.preset(variant)).hybrid
    assert model.family_counts() == dict(side.constraints)
    assert len(model.binaries) == side.binaries
    assert len(model.variables) - len(model.binaries) == side.continuous


def test_variant_families():
    plant = two_by_one_aggregate(init_config="off", init_hours=3)
    T = 6
    fam = {v: quiet_build(plant, v, T).family_counts() for v in ["F1", "F2", "F3", "F5", "CFBM"]}
    assert "transition_pt" not in fam["F1"] and "transition_config" not in fam["F2"]
    assert fam["F3"]["transition_pt"] == len(plant.turbines) * T
    assert sum(fam["F3"].values()) == sum(fam["F1"].values()) + len(plant.turbines) * T
    assert fam["F5"] == fam["F1"]
    assert "min_up" not in fam["CFBM"] and "startup_type" not in fam["CFBM"]


def test_f4_relaxes_transitions_only():
    model = build(two_by_one_aggregate(), "F4", 4)
    for name, var in model.variables.items():
        if name.startswith("v["):
            assert var.domain is Domain.CONTINUOUS
        if name.startswith(("u[", "d[")):
            assert var.domain is Domain.BINARY


def test_f5_warns_and_is_f1():
    with pytest.warns(UserWarning, match="identical to F1"):
        f5 = build(two_by_one_aggregate(), "F5", 4)
    f1 = build(two_by_one_aggregate(), "F1", 4)
    assert [r.terms for r in f5.constraints] == [r.terms for r in f1.constraints]
    assert f5.metadata["alias_of"] == "F1"


def test_zero_horizon_is_empty():
    model = build(two_by_one_aggregate(), "F1", 0)
    assert model.variables == {} and model.constraints == []


def test_bad_options():
    with pytest.raises(ValueError):
        BuildOptions(transition_logic="bogus")
    with pytest.raises(ValueError):
        Variant.parse("F9")
    with pytest.raises(ValueError):
        MarketContext()
    with pytest.raises(ValueError):
        MarketContext(demand=(1.0,), prices=(1.0,))
    with pytest.raises(ValueError):
        MarketContext(demand=(-1.0,))
    with pytest.raises(ValueError):
        build(two_by_one_aggregate(), "F1", 5, MarketContext(prices=(1.0,) * 4))


def test_model_rejects_undeclared_names():
    m = MilpModel()
    m.add_variable("x")
    with pytest.raises(ModelError):
        m.add_variable("x")
    with pytest.raises(ModelError):
        m.add_constraint("r", [("y", 1.0)], Sense.LE, 1.0)
    with pytest.raises(ModelError):
        m.add_sos2("s", [("x", 0.0)])


@settings(max_examples=40, deadline=None)
@given(random_plants(), st.integers(1, 4))
def test_pt_rows_are_sums_of_config_rows(plant, horizon):
    """Each turbine row equals the sum of the configuration rows over its on-set."""
    model = build(plant, "F3", horizon)
    mapping = derive_mapping(plant)
    rows = {r.name: r for r in model.constraints}
    name = plant.name
    for t in range(1, horizon + 1):
        for x in mapping.turbine_ids:
            total: dict[str, float] = defaultdict(float)
            rhs = 0.0
            for y in mapping.on_sets[x]:
                row = rows[f"trcfg[{name},{y},{t}]"]
                for v, c in row.terms:
                    total[v] += c
                rhs += row.rhs
            # moves inside the on-set cancel
            expect = {v: c for v, c in total.items() if c != 0.0}
            pt = rows[f"trpt[{name},{x},{t}]"]
            assert dict(pt.terms) == expect
            assert pt.rhs == rhs


@given(st.integers(1, 40))
def test_warmth_rows_reproduce_classification(gap):
    """A single shutdown ``gap`` hours earlier admits exactly the classified tier as hottest."""
    tiers = CT_TIERS
    assume(gap >= tiers[0].min_down_for_type)
    t = gap + 1
    rows = list(warmth_rows(tiers, t, None, True))
    allowed = {len(tiers)} | {r.w for r in rows if r.t == t and 1 in r.window}
    assert min(allowed) == classify_warmth(tiers, gap)


def test_initial_downtime_rows():
    plant = two_by_one_plant(init_config="off", init_hours=3)
    ct = plant.turbine("CT1")
    rows = list(startup_type_rows(ct, 4, True))
    # off 3 h at hour 0: a start at hour 1 sees downtime 3 (hot band [2, 3]), so no hot row at t=1
    assert (1, 1) not in {(r.t, r.w) for r in rows}
    # at hour 2 the downtime is 4, the hot tier needs an in-horizon stop at hour 0 or earlier: pinned
    assert [r.window for r in rows if (r.t, r.w) == (2, 1)] == [()]


def test_ramp_rows_use_startup_ramp_on_entry():
    plant = two_by_one_aggregate(init_config="off", init_hours=5)
    model = build(plant, "F1", 3)
    c = plant.config("1CT")
    row = next(r for r in model.constraints if r.name == "rup[cc1,1CT,2]")
    terms = dict(row.terms)
    entering = [v_name("cc1", tr.key, 2) for tr in plant.transitions if tr.to_config == "1CT"]
    assert all(terms[v] == pytest.approx(-(c.startup_ramp - c.ramp_up)) for v in entering)
    assert row.rhs == c.ramp_up


def test_daily_caps_and_init_fix():
    plant = two_by_one_aggregate(init_config="CT1+ST", init_hours=1, max_daily_starts=1)
    fam = build(plant, "F1", 30).family_counts()
    assert fam["daily_starts"] == len(plant.turbines) * 2
    expected = sum(min(30, sum(x.required_initial_hours())) for x in plant.turbines)
    assert fam["init_fix"] == expected > 0
    no_caps = build(plant, BuildOptions.preset("F1", include_daily_start_caps=False), 30)
    assert "daily_starts" not in no_caps.family_counts()


def _pmin_schedule(plant, path):
    return Schedule.from_outputs(plant.name, path, [plant.config(y).p_min_at(t) for t, y in enumerate(path, 1)])


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_embedded_schedules_agree_with_validator(data):
    plant = data.draw(random_plants())
    T = data.draw(st.integers(1, 6))
    ids = [c.id for c in plant.configurations]
    path = data.draw(st.lists(st.sampled_from(ids), min_size=T, max_size=T))
    schedule = _pmin_schedule(plant, path)
    ok = not validate_schedule(plant, schedule, "hybrid")
    for variant in ("F1", "F2", "F3"):
        model = build(plant, variant, T)
        values = embed(model, plant, schedule)
        worst, where = model.max_violation(values)
        if ok:
            assert worst <= 1e-9, (variant, where)
            assert rel_close(model.objective_value(values), schedule_cost(plant, schedule), 1e-9)
        else:
            assert worst > 1e-6, variant


@pytest.mark.parametrize("seed", range(8))
def test_oracle_optimum_embeds_feasibly(seed):
    plant, context = random_aggregate_instance(seed, 5)
    for variant, mode in [("F1", "hybrid"), ("F2", "hybrid"), ("CFBM", "cfbm"), ("HM1", "hm1")]:
        res = brute_force_optimal(plant, context, mode=mode)
        sched = res.schedules[plant.name]
        model = build(plant, variant, 5, context)
        values = add_shed(embed(model, plant, sched, cfbm=mode != "hybrid"), context, sched.outputs)
        worst, where = model.max_violation(values)
        assert worst <= 1e-7, (variant, where)
        assert rel_close(model.objective_value(values), res.cost, 1e-9)


CURVE = ((0.0, 0.0), (10.0, 100.0), (20.0, 120.0), (30.0, 300.0))


def _curve_model(p: float) -> MilpModel:
    m = MilpModel("sos")
    m.add_variable("p", Domain.CONTINUOUS, p, p)
    lams = [m.add_variable(f"l{k}", Domain.CONTINUOUS, 0.0, 1.0) for k in range(len(CURVE))]
    m.add_constraint("cvx", [(v, 1.0) for v in lams], Sense.EQ, 1.0)
    m.add_constraint("out", [("p", 1.0)] + [(v, -mw) for v, (mw, _) in zip(lams, CURVE)], Sense.EQ, 0.0)
    m.add_sos2("s", [(v, mw) for v, (mw, _) in zip(lams, CURVE)], output="p", costs=[c for _, c in CURVE])
    for v, (_, c) in zip(lams, CURVE):
        m.add_objective(v, c)
    return m


@pytest.mark.parametrize("p", [5.0, 10.0, 15.0, 27.5])
def test_sos2_interpolates_nonconvex_curve(p):
    xs, cs = zip(*CURVE)
    hull = linprog(cs, A_eq=[[1.0] * 4, list(xs)], b_eq=[1.0, p], bounds=[(0, 1)] * 4)
    sos = solve_optimal(_curve_model(p))
    lp = solve_optimal(_curve_model(p).relaxed())
    assert sos.objective == pytest.approx(np.interp(p, xs, cs), abs=1e-6)
    assert lp.objective == pytest.approx(hull.fun, abs=1e-6)
    assert lp.objective <= sos.objective + 1e-9
