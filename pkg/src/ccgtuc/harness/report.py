"""Variant comparison runs and their tabular reports."""

from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import Decimal

from ccgtuc.formulation.cfbm import WARMTH_RULE
from ccgtuc.formulation.options import BuildOptions, Variant
from ccgtuc.harness.instance import SystemInstance
from ccgtuc.harness.system import (
    SystemSchedules,
    build_system,
    check_mode_for,
    extract_schedules,
    validate_system,
)
from ccgtuc.milp_io.adapter import SolverAdapter, solve
from ccgtuc.milp_io.solution import Solution, SolveStatus
from ccgtuc.oracle.schedule import Violation, igap

__all__ = [
    "COLUMNS",
    "COMPARE_VARIANTS",
    "SolveReport",
    "VariantRun",
    "ReportError",
    "run_variant",
    "compare",
    "emit_report",
    "noisy_rows",
]

COLUMNS = ("Obj", "Saving", "Gap", "Time", "R", "Nodes", "Igap")
COMPARE_VARIANTS = (Variant.CFBM, Variant.HM1, Variant.F1, Variant.F2, Variant.F3, Variant.F4, Variant.F5)
BASELINE = Variant.CFBM.value


class ReportError(RuntimeError):
    pass


@dataclass
class SolveReport:
    """One table row.  ``gap`` is in percent; ``None`` fields print blank."""

    model: str
    objective: float | None
    saving: float | None = None
    gap: float | None = None
    time: float | None = None
    root_time: float | None = None
    nodes: int | None = None
    igap: Decimal | None = None
    violations: int = 0
    best_bound: float | None = None

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["igap"] = None if self.igap is None else str(self.igap)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "SolveReport":
        doc = dict(doc)
        if doc.get("igap") is not None:
            doc["igap"] = Decimal(doc["igap"])
        return cls(**doc)


@dataclass
class VariantRun:
    variant: Variant
    solution: Solution
    lp: Solution | None
    schedules: SystemSchedules | None
    violations: list[Violation] = field(default_factory=list)

    @property
    def lp_objective(self) -> float | None:
        if self.lp is None or self.lp.status is not SolveStatus.OPTIMAL:
            return None
        return self.lp.objective

    def report(self) -> SolveReport:
        sol = self.solution
        ig = None
        lp = self.lp_objective
        if sol.objective is not None and lp is not None and sol.objective > 0:
            ig = igap(sol.objective, lp)
        return SolveReport(
            self.variant.value,
            sol.objective,
            gap=None if sol.gap is None else 100.0 * sol.gap,
            time=sol.wall_time,
            root_time=sol.root_relax_time,
            nodes=sol.nodes,
            igap=ig,
            violations=len(self.violations),
            best_bound=sol.best_bound,
        )


def run_variant(
    instance: SystemInstance,
    variant: Variant | str,
    adapter: SolverAdapter | None = None,
    gap: float = 1e-3,
    time_limit: float = 300.0,
    with_lp: bool = True,
) -> VariantRun:
    """Solve one variant, solve its LP relaxation and re-validate the schedules."""
    variant = Variant.parse(variant) if isinstance(variant, str) else variant
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        options = BuildOptions.preset(variant)
    model = build_system(instance, options)
    sol = solve(model, adapter, gap, time_limit)
    lp = solve(model.relaxed(), adapter, gap, time_limit) if with_lp else None
    schedules, violations = None, []
    if sol.status.has_values:
        schedules = extract_schedules(instance, sol.values)
        violations = validate_system(instance, schedules, check_mode_for(variant))
    return VariantRun(variant, sol, lp, schedules, violations)


def compare(
    instance: SystemInstance,
    adapter: SolverAdapter | None = None,
    gap: float = 1e-3,
    time_limit: float = 300.0,
    variants=COMPARE_VARIANTS,
    jobs: int = 1,
) -> tuple[list[SolveReport], list[VariantRun]]:
    """One row per variant, savings measured against the CFBM row.

    Solves may run in parallel (each in its own solver process); rows come
    back in ``variants`` order either way.
    """
    variants = [Variant.parse(v) if isinstance(v, str) else v for v in variants]
    if Variant.F5 in variants:
        warnings.warn("F5 is identical to F1 in this package", stacklevel=2)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        runs = list(pool.map(lambda v: run_variant(instance, v, adapter, gap, time_limit), variants))
    rows = [run.report() for run in runs]
    base = next((r for r in rows if r.model == BASELINE), None)
    for row in rows:
        if base is not None and base.objective is not None and row.objective is not None:
            row.saving = base.objective - row.objective
    return rows, runs


def _abs_gap(row: SolveReport) -> float | None:
    if row.objective is None or row.best_bound is None:
        return None
    return max(0.0, row.objective - row.best_bound)


def noisy_rows(rows: list[SolveReport]) -> list[str]:
    """Models whose terminal-gap difference to the baseline exceeds their saving."""
    base = next((r for r in rows if r.model == BASELINE), None)
    if base is None or _abs_gap(base) is None:
        return []
    out = []
    for row in rows:
        g = _abs_gap(row)
        if row is base or g is None or row.saving is None:
            continue
        if abs(g - _abs_gap(base)) > abs(row.saving):
            out.append(row.model)
    return out


def _money(x: float | None) -> str:
    if x is None or not math.isfinite(x):
        return ""
    text = f"{x:.2f}"
    return "0.00" if text == "-0.00" else text


def _cells(row: SolveReport) -> list[str]:
    return [
        row.model,
        _money(row.objective),
        _money(row.saving),
        "" if row.gap is None else f"{row.gap:.4f}",
        "" if row.time is None else f"{row.time:.2f}",
        "" if row.root_time is None else f"{row.root_time:.2f}",
        "" if row.nodes is None else str(row.nodes),
        "" if row.igap is None else f"{Decimal(row.igap):.4f}",
    ]


def emit_report(rows: list[SolveReport], format: str = "csv") -> str:
    """CSV or aligned text with the columns Model + ``COLUMNS``.

    Currency prints with 2 decimals, Igap with 4, absent values as blanks.
    The text form adds footnotes for rows whose savings are within gap noise
    and for the CFBM warmth rule.
    """
    if not rows:
        raise ReportError("no rows to report")
    header = ["Model", *COLUMNS]
    body = [_cells(r) for r in rows]
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue()
    if format != "text":
        raise ReportError(f"unknown report format {format!r}")
    widths = [max(len(line[k]) for line in [header, *body]) for k in range(len(header))]
    lines = []
    for line in [header, *body]:
        cells = [line[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(line[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    for model in noisy_rows(rows):
        lines.append(f"* {model}: saving is smaller than the difference in terminal gaps")
    if any(r.model in (Variant.CFBM.value, Variant.HM1.value) for r in rows):
        lines.append(f"note: CFBM start warmth uses {WARMTH_RULE}")
    return "\n".join(lines) + "\n"
