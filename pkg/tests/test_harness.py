from __future__ import annotations

import copy
import json
import warnings
from decimal import Decimal
from importlib import resources

import numpy as np
import pytest

from ccgtuc.formulation.build import MarketContext
from ccgtuc.harness import (
    InstanceError,
    RegularUnit,
    SolveReport,
    SystemInstance,
    build_system,
    compare,
    emit_report,
    extract_schedules,
    load_instance,
    validate_system,
)
from ccgtuc.harness.fixtures import one_by_one_plant, two_by_one_aggregate
from ccgtuc.harness.instance import instance_from_dict, instance_to_dict
from ccgtuc.harness.report import COLUMNS, ReportError, noisy_rows
from ccgtuc.oracle import brute_force_optimal
from ccgtuc.oracle.schedule import igap
from ccgtuc.plant import StartupTier
from conftest import solve_optimal

BUNDLED = resources.files("ccgtuc").joinpath("data/two_by_one.json")


def bundled_doc() -> dict:
    return json.loads(BUNDLED.read_text())


def peaker(**kw) -> RegularUnit:
    args = dict(
        id="g1",
        p_min=20,
        p_max=100,
        ramp_up=50,
        ramp_down=60,
        min_up_time=2,
        min_down_time=2,
        cost_curve=((20, 1200), (60, 3800), (100, 6800)),
        startup_tiers=(StartupTier(1, 2, 150.0), StartupTier(2, 6, 450.0)),
        startup_ramp=60,
        no_load_cost=400,
        init_off_hours=4,
    )
    args.update(kw)
    return RegularUnit(**args)


def test_bundled_instance_loads():
    inst = load_instance(str(BUNDLED))
    assert inst.horizon == 12 and len(inst.demand) == 12
    assert len(inst.plants[0].configurations) == 7
    assert [u.id for u in inst.units] == ["peaker"]


def test_instance_round_trip():
    inst = load_instance(str(BUNDLED))
    assert instance_from_dict(instance_to_dict(inst)) == inst


def test_missing_off_config_reported():
    doc = bundled_doc()
    plant = doc["plants"][0]
    plant["configurations"] = plant["configurations"][1:]
    plant["transitions"] = [tr for tr in plant["transitions"] if "off" not in tr]
    with pytest.raises(InstanceError) as info:
        instance_from_dict(doc)
    assert info.value.pointer == "/plants/0"
    assert "MISSING_OFF_CONFIG" in {d.code for d in info.value.diagnostics}


def test_demand_length_pointer():
    doc = bundled_doc()
    doc["demand"] = doc["demand"][:-1]
    with pytest.raises(InstanceError) as info:
        instance_from_dict(doc)
    assert info.value.pointer == "/demand"


@pytest.mark.parametrize(
    "edit, pointer",
    [
        (lambda d: d.update(horizon=0), "/horizon"),
        (lambda d: d["plants"][0]["turbines"][0].update(kind="GT"), "/plants/0/turbines/0/kind"),
        (lambda d: d.update(extra=1), ""),
        (lambda d: d["units"][0].pop("p_max"), "/units/0"),
    ],
)
def test_schema_errors_carry_pointers(edit, pointer):
    doc = bundled_doc()
    edit(doc)
    with pytest.raises(InstanceError) as info:
        instance_from_dict(doc)
    assert info.value.pointer == pointer


def test_bad_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{")
    with pytest.raises(InstanceError, match="not valid JSON"):
        load_instance(path)


def test_duplicate_names():
    plant = one_by_one_plant("a")
    with pytest.raises(InstanceError) as info:
        SystemInstance(2, (0, 0), (plant,), (peaker(id="a"),))
    assert info.value.pointer == "/units/0"


def test_unit_defaults_and_plant_view():
    unit = peaker(startup_ramp=None)
    assert unit.startup_ramp == 50
    plant = unit.as_plant()
    assert [c.id for c in plant.configurations] == ["off", "on"]
    assert plant.init_config == "off"


def test_zero_demand_from_off_costs_nothing():
    inst = SystemInstance(4, (0,) * 4, (two_by_one_aggregate(init_config="off", init_hours=10),), (peaker(),))
    sol = solve_optimal(build_system(inst))
    assert sol.objective == 0.0


def test_shed_is_charged_at_voll():
    inst = SystemInstance(3, (50.0, 10.0, 0.0), (), (), value_of_lost_load=100.0)
    sol = solve_optimal(build_system(inst))
    assert sol.objective == 6000.0
    assert extract_schedules(inst, sol.values).shed == (50.0, 10.0, 0.0)


@pytest.mark.parametrize("seed", range(3))
def test_system_matches_decoupled_oracles(seed):
    """Demand above every resource's capacity: each resource simply sells at VOLL."""
    rng = np.random.default_rng(seed)
    voll = 90.0
    plants = (
        one_by_one_plant("a", init_config="off", init_hours=int(rng.integers(1, 6))),
        one_by_one_plant("b", init_config="CT+ST", init_hours=int(rng.integers(1, 6))),
    )
    unit = peaker(init_off_hours=int(rng.integers(1, 6)), no_load_cost=float(rng.integers(100, 2000)))
    T = 5
    demand = tuple(float(v) for v in rng.integers(500, 700, size=T))
    inst = SystemInstance(T, demand, plants, (unit,), value_of_lost_load=voll)
    sol = solve_optimal(build_system(inst, "F1"))
    prices = MarketContext(prices=(voll,) * T)
    resources_cost = brute_force_optimal([*plants, unit.as_plant()], prices).cost
    assert sol.objective == pytest.approx(voll * sum(demand) + resources_cost, rel=1e-9)
    schedules = extract_schedules(inst, sol.values)
    assert validate_system(inst, schedules) == []


@pytest.fixture(scope="module")
def bundled_comparison():
    inst = load_instance(str(BUNDLED))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return compare(inst, gap=1e-6, jobs=4)


def test_compare_rows(bundled_comparison):
    rows, runs = bundled_comparison
    assert [r.model for r in rows] == ["CFBM", "HM1", "F1", "F2", "F3", "F4", "F5"]
    assert rows[0].saving == 0.0
    assert all(r.violations == 0 for r in rows)
    f = [r.objective for r in rows if r.model.startswith("F")]
    assert max(f) - min(f) <= 1e-6 * abs(f[0])
    for r in rows:
        assert r.saving == pytest.approx(rows[0].objective - r.objective)
        assert r.igap is not None and r.igap >= 0


def test_compare_csv(bundled_comparison):
    rows, _ = bundled_comparison
    lines = emit_report(rows, "csv").splitlines()
    assert lines[0] == "Model," + ",".join(COLUMNS)
    assert len(lines) == 8
    cells = lines[1].split(",")
    assert cells[0] == "CFBM" and cells[2] == "0.00"


def test_report_blanks_and_igap_format():
    rows = [
        SolveReport("CFBM", 1508854.85, saving=0.0, igap=igap(1508854.85, 1500698.77)),
        SolveReport("F1", None),
    ]
    lines = emit_report(rows, "csv").splitlines()
    assert lines[1] == "CFBM,1508854.85,0.00,,,,,0.5405"
    assert lines[2] == "F1,,,,,,,"


def test_report_text_footnotes():
    rows = [
        SolveReport("CFBM", 1000.0, saving=0.0, best_bound=990.0),
        SolveReport("F1", 998.0, saving=2.0, best_bound=997.0),
        SolveReport("F2", 900.0, saving=100.0, best_bound=899.0),
    ]
    assert noisy_rows(rows) == ["F1"]
    text = emit_report(rows, "text")
    assert "* F1: saving is smaller" in text
    assert "note: CFBM start warmth" in text
    csv_text = emit_report(rows, "csv")
    assert "*" not in csv_text and "note" not in csv_text


def test_report_errors():
    with pytest.raises(ReportError):
        emit_report([])
    with pytest.raises(ReportError):
        emit_report([SolveReport("F1", 1.0)], "xml")


def test_report_json_round_trip():
    row = SolveReport("F1", 10.0, 1.0, 0.1, 2.0, 0.5, 7, Decimal("0.1234"), 0, 9.0)
    assert SolveReport.from_json(json.loads(json.dumps(row.to_json()))) == row


def test_instance_solver_block():
    doc = copy.deepcopy(bundled_doc())
    doc["solver"] = {"command": "mysolver {model} {solution}"}
    adapter = instance_from_dict(doc).solver_adapter()
    assert adapter.command_template == "mysolver {model} {solution}"
    assert adapter.solution_format == "name_value_lines"
