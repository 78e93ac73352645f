"""Solver results and solution-file parsing."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

__all__ = [
    "SolveStatus",
    "Solution",
    "ParsedSolution",
    "SolutionParseError",
    "parse_solution",
]


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE_GAP = "feasible_gap"
    INFEASIBLE = "infeasible"
    ERROR = "error"

    @property
    def has_values(self) -> bool:
        return self in (SolveStatus.OPTIMAL, SolveStatus.FEASIBLE_GAP)


@dataclass
class Solution:
    status: SolveStatus
    objective: float | None = None
    best_bound: float | None = None
    values: dict[str, float] = field(default_factory=dict)
    nodes: int | None = None
    wall_time: float = 0.0
    root_relax_time: float | None = None
    warnings: list[str] = field(default_factory=list)
    output: str = ""

    @property
    def gap(self) -> float | None:
        """Relative gap between incumbent and bound, as a fraction."""
        if self.objective is None or self.best_bound is None:
            return None
        denom = max(abs(self.objective), 1e-10)
        return max(0.0, (self.objective - self.best_bound) / denom)


class SolutionParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, code: str = "MALFORMED_LINE"):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line
        self.code = code


@dataclass
class ParsedSolution:
    values: dict[str, float]
    warnings: list[str] = field(default_factory=list)
    # "# key value" header comments (name_value_lines) or the status line (solver_native)
    header: dict[str, str] = field(default_factory=dict)


def _number(text: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise SolutionParseError(f"bad number {text!r}", lineno) from None
    if math.isnan(value):
        raise SolutionParseError("NaN value", lineno)
    return value


def _store(values: dict, name: str, value: float, lineno: int):
    if name in values:
        raise SolutionParseError(f"variable {name!r} listed twice", lineno, code="DUPLICATE_VARIABLE")
    values[name] = value


def _parse_name_value(text: str) -> ParsedSolution:
    values: dict[str, float] = {}
    header: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if len(parts) == 2:
                header[parts[0].lower()] = parts[1].strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionParseError(f"expected 'name value', got {raw!r}", lineno)
        _store(values, parts[0], _number(parts[1], lineno), lineno)
    return ParsedSolution(values, header=header)


_CBC_ROW = re.compile(r"^\s*(\*\*)?\s*\d+\s")
_CBC_STATUS = re.compile(r"^(?P<status>[^-]*?)\s*-\s*objective value\s+(?P<obj>\S+)", re.IGNORECASE)


def _parse_cbc(text: str) -> ParsedSolution:
    """CBC ``-solu`` files: a status line, then ``index name value reduced-cost`` rows."""
    values: dict[str, float] = {}
    header: dict[str, str] = {}
    lines = text.splitlines()
    start = 0
    if lines and lines[0].strip() and not _CBC_ROW.match(lines[0]):
        first = lines[0].strip()
        header["status_line"] = first
        m = _CBC_STATUS.match(first)
        if m:
            header["status"] = m.group("status").strip()
            header["objective"] = m.group("obj")
        else:
            header["status"] = first
        start = 1
    for lineno, raw in enumerate(lines[start:], start=start + 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("**"):
            line = line[2:].strip()
        parts = line.split()
        if len(parts) < 3 or not parts[0].isdigit():
            raise SolutionParseError(f"expected 'index name value ...', got {raw!r}", lineno)
        _store(values, parts[1], _number(parts[2], lineno), lineno)
    return ParsedSolution(values, header=header)


def parse_solution(
    text: str,
    format: str = "name_value_lines",
    variables: Iterable[str] | None = None,
) -> ParsedSolution:
    """Parse a solution file.

    With ``variables`` given, names the file does not mention default to 0
    and each default is reported in ``warnings``; an empty file yields an
    all-zero map and a warning.
    """
    if format == "name_value_lines":
        parsed = _parse_name_value(text)
    elif format == "solver_native":
        parsed = _parse_cbc(text)
    else:
        raise ValueError(f"unknown solution format {format!r}")
    if not parsed.values:
        parsed.warnings.append("solution file lists no variables")
    if variables is not None:
        missing = [v for v in variables if v not in parsed.values]
        for v in missing:
            parsed.values[v] = 0.0
        if missing:
            preview = ", ".join(missing[:5]) + (" ..." if len(missing) > 5 else "")
            parsed.warnings.append(f"{len(missing)} variable(s) missing, set to 0: {preview}")
    return parsed

