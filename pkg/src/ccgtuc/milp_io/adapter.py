"""Out-of-process solver invocation.

A :class:`SolverAdapter` is a command template.  ``solve`` writes the model
as MPS into a private temporary directory, runs the command, parses the
solution file and re-checks every row before handing the result back.
"""

from __future__ import annotations

import math
import os
import re
import shlex
import shutil
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field

from ccgtuc.formulation.model import MilpModel
from ccgtuc.milp_io.mps import write_mps
from ccgtuc.milp_io.solution import Solution, SolutionParseError, SolveStatus, parse_solution

__all__ = [
    "SolverAdapter",
    "HIGHS",
    "cbc_adapter",
    "default_adapter",
    "adapter_from_template",
    "find_cbc",
    "solve",
    "HYGIENE_TOL",
    "INTEGRALITY_TOL",
]

HYGIENE_TOL = 1e-6
INTEGRALITY_TOL = 1e-6
SOLVER_ENV = "CCGTUC_SOLVER"


@dataclass(frozen=True)
class SolverAdapter:
    """Command template with ``{model}``, ``{solution}``, ``{gap}`` and ``{timelimit}``.

    ``{python}`` expands to the running interpreter.  ``log_patterns`` maps
    ``nodes``/``root_time``/``bound`` to regexes with one capture group,
    searched in the solver's combined output.
    """

    command_template: str
    solution_format: str = "name_value_lines"
    log_patterns: dict = field(default_factory=dict)
    name: str = "custom"

    def __post_init__(self):
        for key in ("{model}", "{solution}"):
            if key not in self.command_template:
                raise ValueError(f"command template must contain {key}")
        if self.solution_format not in ("name_value_lines", "solver_native"):
            raise ValueError(f"unknown solution format {self.solution_format!r}")

    def command(self, model_path: str, solution_path: str, gap: float, time_limit: float) -> list[str]:
        text = self.command_template.format(
            model=shlex.quote(model_path),
            solution=shlex.quote(solution_path),
            gap=repr(float(gap)),
            timelimit=repr(float(time_limit)) if time_limit > 0 else "1e8",
            python=shlex.quote(sys.executable),
        )
        return shlex.split(text)


HIGHS = SolverAdapter(
    "{python} -m ccgtuc.milp_io.highs_driver {model} {solution} --gap {gap} --time-limit {timelimit}",
    "name_value_lines",
    # first node-0 line with LP iterations: the root relaxation has been solved
    {"root_time": r"^[ \t]*[A-Za-z]?[ \t]+0[ \t]+0[ \t]+0[ \t]+[0-9.]+%(?:[ \t]+\S+){3}(?:[ \t]+\d+){3}[ \t]+[1-9]\d*[ \t]+([0-9.]+)s"},
    name="highs",
)


def find_cbc() -> str | None:
    """CBC binary on PATH, else the one shipped inside the pulp package."""
    found = shutil.which("cbc")
    if found:
        return found
    try:
        from pulp.apis.coin_api import pulp_cbc_path as path
    except ImportError:
        return None
    return os.path.normpath(path) if path and os.path.exists(path) else None


def cbc_adapter(path: str | None = None) -> SolverAdapter:
    path = path or find_cbc()
    if path is None:
        raise FileNotFoundError("no CBC executable found")
    return SolverAdapter(
        f"{shlex.quote(path)} {{model}} -ratio {{gap}} -sec {{timelimit}} -threads 1 -solve -solu {{solution}}",
        "solver_native",
        {
            "nodes": r"Enumerated nodes:\s+(\d+)",
            "root_time": r"Continuous objective value is \S+ - ([0-9.]+) seconds",
            "bound": r"Objective value:\s+\S+\s*\n.*?Lower bound:\s+(\S+)",
        },
        name="cbc",
    )


def adapter_from_template(template: str) -> SolverAdapter:
    """User template; ``cbc``/``highs`` name the built-in adapters."""
    if template.strip().lower() == "highs":
        return HIGHS
    if template.strip().lower() == "cbc":
        return cbc_adapter()
    fmt = "solver_native" if "-solu" in template else "name_value_lines"
    return SolverAdapter(template, fmt)


def default_adapter() -> SolverAdapter:
    template = os.environ.get(SOLVER_ENV)
    return adapter_from_template(template) if template else HIGHS


def _native_status(header: dict) -> SolveStatus:
    word = header.get("status", "").lower()
    if word.startswith("optimal"):
        return SolveStatus.OPTIMAL
    if "infeasible" in word and "no integer solution" not in word:
        return SolveStatus.INFEASIBLE
    if word.startswith("stopped") and "no integer solution" not in word:
        return SolveStatus.FEASIBLE_GAP
    return SolveStatus.ERROR


def _header_status(header: dict, has_values: bool) -> SolveStatus:
    word = header.get("status")
    if word is None:
        return SolveStatus.OPTIMAL if has_values else SolveStatus.ERROR
    try:
        return SolveStatus(word)
    except ValueError:
        return SolveStatus.ERROR


def _search(pattern: str | None, text: str):
    if not pattern:
        return None
    m = re.search(pattern, text, re.MULTILINE | re.DOTALL)
    return m.group(1) if m else None


def _finish(model: MilpModel, sol: Solution) -> Solution:
    """Complete, round and re-check values of a solution that claims to have them."""
    values = {name: float(sol.values.get(name, 0.0)) for name in model.variables}
    for name in model.binaries:
        x = values[name]
        if min(abs(x), abs(x - 1.0)) > INTEGRALITY_TOL:
            sol.status = SolveStatus.ERROR
            sol.warnings.append(f"binary {name} = {x} is not integral")
            return sol
        values[name] = float(round(x))
    worst, where = model.max_violation(values)
    if worst > HYGIENE_TOL:
        sol.status = SolveStatus.ERROR
        sol.warnings.append(f"returned solution violates {where} by {worst:.3g}")
        return sol
    sol.values = values
    sol.objective = model.objective_value(values)
    if sol.best_bound is None and sol.status is SolveStatus.OPTIMAL:
        sol.best_bound = sol.objective
    return sol


def solve(
    model: MilpModel,
    adapter: SolverAdapter | None = None,
    gap: float = 1e-4,
    time_limit: float = 300.0,
    keep_dir: str | None = None,
) -> Solution:
    """Run the external solver on ``model``.

    ``gap`` is a relative fraction.  The subprocess gets ``time_limit`` plus
    a grace period before it is killed.  ``keep_dir`` copies the MPS and
    solution files there for inspection.
    """
    adapter = adapter or default_adapter()
    with tempfile.TemporaryDirectory(prefix="ccgtuc-") as tmp:
        model_path = os.path.join(tmp, "model.mps")
        solution_path = os.path.join(tmp, "model.sol")
        with open(model_path, "w") as fh:
            fh.write(write_mps(model))
        cmd = adapter.command(model_path, solution_path, gap, time_limit)
        start = time.perf_counter()
        timed_out = False
        try:
            proc = subprocess.run(
                cmd,
                capture_output=True,
                text=True,
                timeout=time_limit + 30 + 0.5 * time_limit if time_limit > 0 else None,
            )
            output = proc.stdout + proc.stderr
            code = proc.returncode
        except subprocess.TimeoutExpired as exc:
            timed_out = True
            output = _text(exc.stdout) + _text(exc.stderr)
            code = None
        except OSError as exc:
            return Solution(SolveStatus.ERROR, wall_time=time.perf_counter() - start, output=str(exc))
        wall = time.perf_counter() - start
        if keep_dir:
            os.makedirs(keep_dir, exist_ok=True)
            for path in (model_path, solution_path):
                if os.path.exists(path):
                    shutil.copy(path, keep_dir)

        sol = Solution(SolveStatus.ERROR, wall_time=wall, output=output)
        if code not in (0, None):
            sol.warnings.append(f"solver exited with code {code}")
            return sol
        if not os.path.exists(solution_path):
            sol.warnings.append("solver wrote no solution file" + (" before the timeout" if timed_out else ""))
            return sol
        with open(solution_path) as fh:
            text = fh.read()

    try:
        parsed = parse_solution(text, adapter.solution_format)
    except SolutionParseError as exc:
        sol.warnings.append(f"unparseable solution: {exc}")
        return sol
    sol.warnings += parsed.warnings
    header = parsed.header
    if adapter.solution_format == "solver_native":
        status = _native_status(header)
    else:
        status = _header_status(header, bool(parsed.values))
    if timed_out and status.has_values:
        status = SolveStatus.FEASIBLE_GAP
    sol.status = status

    nodes = _search(adapter.log_patterns.get("nodes"), output) or header.get("nodes")
    sol.nodes = int(nodes) if nodes is not None else None
    root = _search(adapter.log_patterns.get("root_time"), output)
    sol.root_relax_time = float(root) if root is not None else None
    bound = header.get("bound") or _search(adapter.log_patterns.get("bound"), output)
    if bound is not None:
        try:
            b = float(bound)
            sol.best_bound = b if math.isfinite(b) else None
        except ValueError:
            pass
    if not status.has_values:
        return sol
    sol.values = parsed.values
    return _finish(model, sol)


def _text(data) -> str:
    if data is None:
        return ""
    return data.decode(errors="replace") if isinstance(data, bytes) else data
