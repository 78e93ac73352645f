"""``ccgtuc`` command line.

Exit status is 0 on success, 2 when an instance or schedule fails
validation and 1 for every other failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

from ccgtuc.formulation.build import MarketContext
from ccgtuc.formulation.options import BuildOptions, Variant
from ccgtuc.harness.instance import InstanceError, SystemInstance, load_instance
from ccgtuc.harness.report import SolveReport, compare, emit_report, run_variant
from ccgtuc.harness.system import SystemSchedules, build_system, validate_system
from ccgtuc.milp_io.adapter import SOLVER_ENV, SolverAdapter, adapter_from_template, default_adapter
from ccgtuc.milp_io.mps import write_mps
from ccgtuc.oracle.oracle import OracleError, brute_force_optimal
from ccgtuc.oracle.schedule import CheckMode, Schedule

EXIT_OK, EXIT_ERROR, EXIT_INVALID = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_ERROR):
        super().__init__(message)
        self.code = code


def _load(path: str) -> SystemInstance:
    try:
        return load_instance(path)
    except InstanceError as exc:
        raise CliError(f"invalid instance {path}:\n{exc}", EXIT_INVALID) from None
    except OSError as exc:
        raise CliError(f"cannot read instance: {exc}") from None


def _adapter(args, instance: SystemInstance) -> SolverAdapter:
    """``--solver-cmd`` beats the environment, which beats the instance's solver block."""
    if getattr(args, "solver_cmd", None):
        return adapter_from_template(args.solver_cmd)
    if os.environ.get(SOLVER_ENV):
        return default_adapter()
    return instance.solver_adapter() or default_adapter()


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_schedules(path: str, instance: SystemInstance) -> SystemSchedules:
    with open(path) as fh:
        doc = json.load(fh)
    doc = doc.get("schedules", doc)
    plants = {d["plant"]: Schedule.from_json(d) for d in doc.get("plants", ())}
    units = {d["plant"]: Schedule.from_json(d) for d in doc.get("units", ())}
    missing = [p.name for p in instance.plants if p.name not in plants] + [
        u.id for u in instance.units if u.id not in units
    ]
    if missing:
        raise CliError(f"schedule file has no entry for {missing}", EXIT_INVALID)
    return SystemSchedules(plants, units, tuple(doc.get("shed", [0.0] * instance.horizon)))


def cmd_validate(args) -> int:
    instance = _load(args.instance)
    print(f"instance {instance.name}: {len(instance.plants)} plant(s), {len(instance.units)} unit(s), T={instance.horizon}")
    if args.schedule:
        violations = validate_system(instance, _read_schedules(args.schedule, instance), args.mode)
        for v in violations:
            print(v)
        if violations:
            raise CliError(f"{len(violations)} violation(s)", EXIT_INVALID)
        print("schedule ok")
    return EXIT_OK


def cmd_build(args) -> int:
    instance = _load(args.instance)
    model = build_system(instance, BuildOptions.preset(args.variant))
    _write(write_mps(model), args.out)
    if args.out:
        print(f"wrote {args.out}: {len(model.variables)} columns, {len(model.constraints)} rows")
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = _load(args.instance)
    run = run_variant(instance, args.variant, _adapter(args, instance), args.gap, args.time_limit)
    sol = run.solution
    doc = {
        "variant": run.variant.value,
        "status": sol.status.value,
        "objective": sol.objective,
        "best_bound": sol.best_bound,
        "lp_objective": run.lp_objective,
        "gap": sol.gap,
        "time": sol.wall_time,
        "nodes": sol.nodes,
        "violations": [str(v) for v in run.violations],
        "warnings": sol.warnings,
        "schedules": run.schedules.to_json() if run.schedules else None,
    }
    print(f"variant {doc['variant']}: status {doc['status']}, objective {doc['objective']}, LP bound {doc['lp_objective']}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
    if not sol.status.has_values:
        raise CliError("; ".join(sol.warnings) or f"solver status {sol.status.value}")
    if run.violations:
        for v in run.violations:
            print(v, file=sys.stderr)
        raise CliError("returned schedule fails validation", EXIT_INVALID)
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = _load(args.instance)
    if instance.units or len(instance.plants) != 1:
        raise CliError("the oracle handles instances with exactly one plant and no regular units")
    context = MarketContext(demand=instance.demand, value_of_lost_load=instance.value_of_lost_load)
    try:
        result = brute_force_optimal(instance.plants, context, mode=args.mode, dispatch_grid=args.grid)
    except OracleError as exc:
        raise CliError(str(exc)) from None
    if not result.feasible:
        raise CliError("no valid schedule exists")
    doc = {
        "cost": result.cost,
        "grid_step": result.grid_step,
        "grid_bound": result.grid_bound,
        "kernel": result.kernel,
        "schedules": {"plants": [s.to_json() for s in result.schedules.values()], "units": []},
    }
    print(f"oracle optimum {result.cost} (grid {result.grid_step} MW, error bound {result.grid_bound})")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
    return EXIT_OK


def cmd_compare(args) -> int:
    instance = _load(args.instance)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rows, runs = compare(instance, _adapter(args, instance), args.gap, args.time_limit, jobs=args.jobs)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _write(emit_report(rows, args.format), args.out)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.to_json() for r in rows], fh, indent=2)
    failed = [r.variant.value for r in runs if not r.solution.status.has_values]
    if failed:
        raise CliError(f"no solution for {failed}")
    if any(r.violations for r in runs):
        for r in runs:
            for v in r.violations:
                print(f"{r.variant.value}: {v}", file=sys.stderr)
        raise CliError("a returned schedule fails validation", EXIT_INVALID)
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        with open(args.input) as fh:
            rows = [SolveReport.from_json(d) for d in json.load(fh)]
    except (OSError, ValueError, TypeError) as exc:
        raise CliError(f"cannot read report rows: {exc}") from None
    _write(emit_report(rows, args.format), args.out)
    return EXIT_OK


def _variant(text: str) -> str:
    try:
        return Variant.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ccgtuc", description="CCGT unit commitment models and checks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, solver=False):
        p.add_argument("--instance", required=True, help="instance JSON file")
        p.add_argument("--out", help="output file (default: stdout)")
        if solver:
            p.add_argument("--gap", type=float, default=1e-3, help="relative MILP gap as a fraction")
            p.add_argument("--time-limit", type=float, default=300.0, help="seconds per solve")
            p.add_argument("--solver-cmd", help=f"solver command template, 'highs' or 'cbc' (env {SOLVER_ENV})")

    p = sub.add_parser("validate", help="check an instance and optionally a schedule file")
    common(p)
    p.add_argument("--schedule", help="schedule JSON (as written by solve --out)")
    p.add_argument("--mode", choices=[m.value for m in CheckMode], default="hybrid")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="write the MPS model of one variant")
    common(p)
    p.add_argument("--variant", type=_variant, default="F1")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="solve one variant and its LP relaxation")
    common(p, solver=True)
    p.add_argument("--variant", type=_variant, default="F1")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force optimum of a single-plant instance")
    common(p)
    p.add_argument("--grid", type=float, default=1.0, help="dispatch grid step in MW")
    p.add_argument("--mode", choices=[m.value for m in CheckMode], default="hybrid")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="solve every variant and report against CFBM")
    common(p, solver=True)
    p.add_argument("--format", choices=["csv", "text"], default="csv")
    p.add_argument("--json", help="also store the rows as JSON (input for 'report')")
    p.add_argument("--jobs", type=int, default=1, help="variants solved concurrently")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="render stored comparison rows")
    p.add_argument("--input", required=True, help="rows JSON written by compare --json")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "text"], default="text")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"ccgtuc: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, FileNotFoundError) as exc:
        print(f"ccgtuc: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
