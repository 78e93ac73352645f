"""Command-line MILP solver over HiGHS for the MPS files this package writes.

HiGHS does not read SOS sections, so each S2 set is replaced by segment
binaries: weight ``k`` may be positive only if segment ``k-1`` or ``k`` is
selected, and at most one segment is selected.  The solution is written as
``name value`` lines with ``# key value`` header comments.

    python -m ccgtuc.milp_io.highs_driver MODEL SOLUTION [--gap G] [--time-limit S]
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
import time

import highspy

from ccgtuc.milp_io.mps import split_sos_section

_STATUS = {
    "Optimal": "optimal",
    "Infeasible": "infeasible",
    "Unbounded or infeasible": "infeasible",
    "Unbounded": "error",
    "Time limit reached": "feasible_gap",
    "Iteration limit reached": "feasible_gap",
    "Solution limit reached": "feasible_gap",
    "Interrupted by user": "feasible_gap",
}


def _add_sos2(h: highspy.Highs, sets) -> int:
    lp = h.getLp()
    index = {name: j for j, name in enumerate(lp.col_names_)}
    inf = highspy.kHighsInf
    added = 0
    for set_name, members in sets:
        cols = [index[v] for v, _ in members]
        uppers = [lp.col_upper_[j] for j in cols]
        if any(not math.isfinite(u) for u in uppers):
            raise ValueError(f"SOS2 set {set_name} needs finite member upper bounds")
        n_seg = len(cols) - 1
        first = h.getNumCol()
        for _ in range(n_seg):
            h.addVar(0.0, 1.0)
        h.changeColsIntegrality(n_seg, list(range(first, first + n_seg)), [highspy.HighsVarType.kInteger] * n_seg)
        for k, (j, ub) in enumerate(zip(cols, uppers)):
            segs = [first + s for s in (k - 1, k) if 0 <= s < n_seg]
            h.addRow(-inf, 0.0, 1 + len(segs), [j] + segs, [1.0] + [-ub] * len(segs))
        h.addRow(-inf, 1.0, n_seg, list(range(first, first + n_seg)), [1.0] * n_seg)
        added += 1
    return added


def solve_file(model_path: str, solution_path: str, gap: float, time_limit: float, threads: int = 1) -> str:
    with open(model_path) as fh:
        text = fh.read()
    stripped, sets = split_sos_section(text)
    h = highspy.Highs()
    h.setOptionValue("output_flag", True)
    h.setOptionValue("log_to_console", True)
    h.setOptionValue("mip_rel_gap", float(gap))
    h.setOptionValue("mip_abs_gap", 1e-9)
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    h.setOptionValue("dual_feasibility_tolerance", 1e-9)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    h.setOptionValue("threads", int(threads))
    h.setOptionValue("random_seed", 0)
    if time_limit and time_limit > 0:
        h.setOptionValue("time_limit", float(time_limit))

    fd, tmp = tempfile.mkstemp(suffix=".mps")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(stripped)
        status = h.readModel(tmp)
    finally:
        os.unlink(tmp)
    if status == highspy.HighsStatus.kError:
        raise ValueError(f"HiGHS could not read {model_path}")
    n_orig = h.getNumCol()
    names = list(h.getLp().col_names_)
    _add_sos2(h, sets)

    start = time.perf_counter()
    h.run()
    elapsed = time.perf_counter() - start
    model_status = h.modelStatusToString(h.getModelStatus())
    info = h.getInfo()
    status_word = _STATUS.get(model_status, "error")
    has_solution = info.primal_solution_status == 2  # kSolutionStatusFeasible
    if status_word == "feasible_gap" and not has_solution:
        status_word = "error"

    lines = [f"# status {status_word}", f"# highs_status {model_status.replace(' ', '_')}"]
    if has_solution:
        lines.append(f"# objective {info.objective_function_value!r}")
        bound = info.mip_dual_bound if h.getLp().integrality_ else info.objective_function_value
        if math.isfinite(bound):
            lines.append(f"# bound {bound!r}")
        if info.mip_node_count >= 0:
            lines.append(f"# nodes {info.mip_node_count}")
    lines.append(f"# time {elapsed!r}")
    if has_solution:
        col_value = h.getSolution().col_value
        lines += [f"{names[j]} {col_value[j]!r}" for j in range(n_orig)]
    with open(solution_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return status_word


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ccgtuc-highs", description=__doc__.splitlines()[0])
    parser.add_argument("model")
    parser.add_argument("solution")
    parser.add_argument("--gap", type=float, default=1e-4)
    parser.add_argument("--time-limit", type=float, default=0.0)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args(argv)
    try:
        solve_file(args.model, args.solution, args.gap, args.time_limit, args.threads)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
