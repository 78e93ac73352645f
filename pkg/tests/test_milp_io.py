from __future__ import annotations

import hashlib
import math
import os
import subprocess
import sys
from pathlib import Path

import highspy
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccgtuc.formulation.build import MarketContext, build
from ccgtuc.formulation.model import Domain, MilpModel, Sense
from ccgtuc.harness.fixtures import two_by_one_plant
from ccgtuc.milp_io import (
    HIGHS,
    MpsError,
    SolutionParseError,
    SolveStatus,
    SolverAdapter,
    cbc_adapter,
    parse_solution,
    solve,
    write_mps,
)
from ccgtuc.milp_io.adapter import adapter_from_template
from ccgtuc.milp_io.mps import format_number, split_sos_section
from ccgtuc.milp_io.solution import Solution
from conftest import rel_close, solve_optimal

GOLDEN = Path(__file__).parent / "data" / "two_by_one_f1_t4.mps"


def golden_model():
    return build(two_by_one_plant(), "F1", 4)


def knapsack() -> MilpModel:
    m = MilpModel("knap")
    for name in "abc":
        m.add_variable(name, Domain.BINARY)
    m.add_constraint("cap", [("a", 3.0), ("b", 4.0), ("c", 5.0)], Sense.LE, 9.0)
    for name, value in zip("abc", (4.0, 5.0, 7.0)):
        m.add_objective(name, -value)
    return m


def test_golden_file():
    assert write_mps(golden_model()) == GOLDEN.read_text()


def test_emission_is_repeatable_in_process():
    assert write_mps(golden_model()) == write_mps(golden_model())


def test_emission_ignores_hash_seed():
    code = (
        "import hashlib,sys;"
        "from ccgtuc.formulation.build import build;"
        "from ccgtuc.harness.fixtures import two_by_one_plant;"
        "from ccgtuc.milp_io import write_mps;"
        "sys.stdout.write(hashlib.sha256(write_mps(build(two_by_one_plant(),'F1',4)).encode()).hexdigest())"
    )
    digests = set()
    for seed in ("0", "1", "12345"):
        env = {**os.environ, "PYTHONHASHSEED": seed}
        digests.add(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout)
    assert digests == {hashlib.sha256(GOLDEN.read_bytes()).hexdigest()}


def test_highs_reads_golden_structure(tmp_path):
    model = golden_model()
    stripped, sets = split_sos_section(GOLDEN.read_text())
    path = tmp_path / "m.mps"
    path.write_text(stripped)
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    assert h.readModel(str(path)) == highspy.HighsStatus.kOk
    lp = h.getLp()
    assert lp.num_col_ == len(model.variables)
    assert lp.num_row_ == len(model.constraints)
    assert list(lp.col_names_) == list(model.variables)
    assert len(sets) == len(model.sos2_sets)
    integer = [j for j, kind in enumerate(lp.integrality_) if kind == highspy.HighsVarType.kInteger]
    assert len(integer) == len(model.binaries)


def test_cbc_accepts_golden_file_with_sos(cbc_path):
    model = golden_model()
    ours = solve_optimal(model)
    other = solve(model, cbc_adapter(cbc_path), gap=1e-9)
    assert other.status is SolveStatus.OPTIMAL
    assert rel_close(other.objective, ours.objective, 1e-6)


def test_markers_wrap_binaries():
    text = write_mps(knapsack())
    lines = text.splitlines()
    start = lines.index(" MARKER0 'MARKER' 'INTORG'")
    end = lines.index(" MARKER1 'MARKER' 'INTEND'")
    assert all(line.split()[0] in "abc" for line in lines[start + 1 : end])


def test_empty_model():
    text = write_mps(MilpModel("empty"))
    assert text == "NAME empty FREE\nROWS\n N OBJ\nENDATA\n"


def test_long_name_rejected():
    m = MilpModel("x")
    m.add_variable("v" * 256)
    with pytest.raises(MpsError):
        write_mps(m)


def test_whitespace_name_rejected():
    m = MilpModel("x")
    m.add_variable("a b")
    with pytest.raises(MpsError):
        write_mps(m)


def test_bounds_section():
    m = MilpModel("b")
    m.add_variable("free", Domain.CONTINUOUS, -math.inf, math.inf)
    m.add_variable("fixed", Domain.CONTINUOUS, 2.5, 2.5)
    m.add_variable("neg", Domain.CONTINUOUS, -math.inf, 3)
    m.add_variable("box", Domain.CONTINUOUS, 1, 4)
    bounds = write_mps(m).split("BOUNDS\n")[1].splitlines()
    assert bounds[:-1] == [
        " FR BND free",
        " FX BND fixed 2.5",
        " MI BND neg",
        " UP BND neg 3",
        " LO BND box 1",
        " UP BND box 4",
    ]


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_number_round_trips(x):
    assert float(format_number(x)) == x


def test_format_number_rejects_inf():
    with pytest.raises(MpsError):
        format_number(math.inf)


def test_split_sos_rejects_s1():
    with pytest.raises(MpsError):
        split_sos_section("NAME m\nSOS\n S1 SOS s 1\n x 1\nENDATA\n")


def test_parse_name_value_with_header():
    parsed = parse_solution("# status optimal\n# objective 3.5\nx 1\ny 2.5\n")
    assert parsed.values == {"x": 1.0, "y": 2.5}
    assert parsed.header == {"status": "optimal", "objective": "3.5"}


def test_parse_duplicate_variable():
    with pytest.raises(SolutionParseError) as info:
        parse_solution("x 1\nx 2\n")
    assert info.value.code == "DUPLICATE_VARIABLE" and info.value.line == 2


@pytest.mark.parametrize("text", ["x\n", "x 1 2\n", "x one\n", "x nan\n"])
def test_parse_malformed(text):
    with pytest.raises(SolutionParseError) as info:
        parse_solution(text)
    assert info.value.line == 1


def test_parse_empty_and_missing():
    parsed = parse_solution("", variables=["a", "b"])
    assert parsed.values == {"a": 0.0, "b": 0.0}
    assert any("no variables" in w for w in parsed.warnings)
    assert any("2 variable(s) missing" in w for w in parsed.warnings)


def test_parse_cbc_native():
    text = "Optimal - objective value -11.00000000\n      0 a                      1                       -4\n**    2 c    1    -7\n"
    parsed = parse_solution(text, "solver_native")
    assert parsed.values == {"a": 1.0, "c": 1.0}
    assert parsed.header["status"] == "Optimal" and parsed.header["objective"] == "-11.00000000"


_names = st.text(alphabet="abcxyz0123[],", min_size=1, max_size=12)


@settings(max_examples=100)
@given(st.dictionaries(_names, st.floats(allow_nan=False, width=64), max_size=20))
def test_name_value_round_trip(values):
    text = "".join(f"{k} {v!r}\n" for k, v in values.items())
    assert parse_solution(text).values == values


def test_gap_property():
    assert Solution(SolveStatus.OPTIMAL, objective=100.0, best_bound=90.0).gap == pytest.approx(0.1)
    assert Solution(SolveStatus.OPTIMAL, objective=100.0, best_bound=101.0).gap == 0.0
    assert Solution(SolveStatus.OPTIMAL, objective=100.0).gap is None


def test_highs_knapsack():
    sol = solve_optimal(knapsack())
    assert sol.objective == -12.0
    assert sol.values == {"a": 0.0, "b": 1.0, "c": 1.0}
    assert sol.best_bound == pytest.approx(-12.0)


def test_lp_relaxation_is_lower():
    lp = solve_optimal(knapsack().relaxed())
    # take c, then a, then a quarter of b
    assert lp.objective == pytest.approx(-12.25)
    assert all(0.0 <= x <= 1.0 for x in lp.values.values())


def test_infeasible_status():
    m = MilpModel("inf")
    m.add_variable("x", Domain.BINARY)
    m.add_constraint("r", [("x", 1.0)], Sense.GE, 2.0)
    sol = solve(m)
    assert sol.status is SolveStatus.INFEASIBLE and sol.objective is None


def test_cbc_knapsack(cbc_path):
    sol = solve(knapsack(), cbc_adapter(cbc_path))
    assert sol.status is SolveStatus.OPTIMAL and sol.objective == -12.0


def _fake_solver(tmp_path, body: str) -> SolverAdapter:
    script = tmp_path / "fake.py"
    script.write_text("import sys\nmodel, out = sys.argv[1:3]\n" + body)
    return SolverAdapter(f"{{python}} {script} {{model}} {{solution}}")


def test_solution_failing_rows_is_rejected(tmp_path):
    adapter = _fake_solver(tmp_path, "open(out, 'w').write('a 1\\nb 1\\nc 1\\n')\n")
    sol = solve(knapsack(), adapter)
    assert sol.status is SolveStatus.ERROR
    assert any("violates cap" in w for w in sol.warnings)


def test_fractional_binary_is_rejected(tmp_path):
    adapter = _fake_solver(tmp_path, "open(out, 'w').write('a 0.5\\nb 0\\nc 0\\n')\n")
    sol = solve(knapsack(), adapter)
    assert sol.status is SolveStatus.ERROR and any("not integral" in w for w in sol.warnings)


def test_solver_crash_and_missing_file(tmp_path):
    sol = solve(knapsack(), _fake_solver(tmp_path, "sys.exit(3)\n"))
    assert sol.status is SolveStatus.ERROR and "exited with code 3" in sol.warnings[0]
    sol = solve(knapsack(), _fake_solver(tmp_path, "pass\n"))
    assert sol.status is SolveStatus.ERROR and "no solution file" in sol.warnings[0]


def test_unparseable_solution(tmp_path):
    sol = solve(knapsack(), _fake_solver(tmp_path, "open(out, 'w').write('a b c\\n')\n"))
    assert sol.status is SolveStatus.ERROR and "unparseable" in sol.warnings[0]


def test_missing_values_default_to_zero(tmp_path):
    sol = solve(knapsack(), _fake_solver(tmp_path, "open(out, 'w').write('a 1\\n')\n"))
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.values == {"a": 1.0, "b": 0.0, "c": 0.0} and sol.objective == -4.0


def test_adapter_templates():
    with pytest.raises(ValueError):
        SolverAdapter("solver {model}")
    assert adapter_from_template("HiGHS") is HIGHS
    assert adapter_from_template("mysolver {model} -solu {solution}").solution_format == "solver_native"


def test_highs_reports_root_time_and_nodes():
    plant = two_by_one_plant(init_config="off", init_hours=8)
    model = build(plant, "F1", 6, MarketContext(prices=(20.0, 60.0, 80.0, 80.0, 30.0, 70.0)))
    sol = solve_optimal(model)
    assert sol.nodes is not None and sol.nodes >= 0
    assert sol.root_relax_time is not None and sol.root_relax_time >= 0
