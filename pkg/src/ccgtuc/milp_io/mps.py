"""Free-format MPS emission.

Output depends only on the model, so equal models give equal bytes.  Rows and
columns appear in declaration order and numbers use the shortest decimal that
round-trips to the same double.
"""

from __future__ import annotations

import math
from collections import defaultdict

from ccgtuc.formulation.model import Domain, MilpModel, Sense

__all__ = ["write_mps", "format_number", "split_sos_section", "MpsError", "OBJECTIVE_ROW", "MAX_NAME_LENGTH"]

OBJECTIVE_ROW = "OBJ"
MAX_NAME_LENGTH = 255
_ROW_TYPE = {Sense.LE: "L", Sense.EQ: "E", Sense.GE: "G"}


class MpsError(ValueError):
    pass


def format_number(x: float) -> str:
    """Shortest exact decimal; integral values print without a fraction."""
    x = float(x)
    if not math.isfinite(x):
        raise MpsError(f"cannot write non-finite number {x}")
    if x == 0:
        return "0"
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _check_name(name: str) -> str:
    if len(name) > MAX_NAME_LENGTH:
        raise MpsError(f"name longer than {MAX_NAME_LENGTH} characters: {name[:40]}...")
    if not name or any(ch.isspace() for ch in name):
        raise MpsError(f"name {name!r} is empty or contains whitespace")
    return name


def write_mps(model: MilpModel) -> str:
    name = _check_name(model.name or "model")
    lines = [f"NAME {name} FREE", "ROWS", f" N {OBJECTIVE_ROW}"]
    for row in model.constraints:
        lines.append(f" {_ROW_TYPE[row.sense]} {_check_name(row.name)}")

    entries: dict[str, list[tuple[str, float]]] = defaultdict(list)
    for var, coef in model.objective.items():
        entries[var].append((OBJECTIVE_ROW, coef))
    for row in model.constraints:
        for var, coef in row.terms:
            entries[var].append((row.name, coef))

    if model.variables:
        lines.append("COLUMNS")
        in_int = False
        marker = 0
        for var in model.variables.values():
            is_int = var.domain is Domain.BINARY
            if is_int != in_int:
                kind = "'INTORG'" if is_int else "'INTEND'"
                lines.append(f" MARKER{marker} 'MARKER' {kind}")
                marker += 1
                in_int = is_int
            col = _check_name(var.name)
            cells = entries.get(var.name) or [(OBJECTIVE_ROW, 0.0)]
            for row_name, coef in cells:
                lines.append(f" {col} {row_name} {format_number(coef)}")
        if in_int:
            lines.append(f" MARKER{marker} 'MARKER' 'INTEND'")

    rhs = [(row.name, row.rhs) for row in model.constraints if row.rhs != 0]
    if rhs:
        lines.append("RHS")
        lines += [f" RHS {r} {format_number(v)}" for r, v in rhs]

    bounds = []
    for var in model.variables.values():
        lo, hi = var.lo, var.hi
        if var.domain is Domain.BINARY:
            bounds.append(f" UP BND {var.name} 1")
            continue
        if lo == -math.inf and hi == math.inf:
            bounds.append(f" FR BND {var.name}")
            continue
        if lo == hi:
            bounds.append(f" FX BND {var.name} {format_number(lo)}")
            continue
        if lo == -math.inf:
            bounds.append(f" MI BND {var.name}")
        elif lo != 0:
            bounds.append(f" LO BND {var.name} {format_number(lo)}")
        if hi != math.inf:
            bounds.append(f" UP BND {var.name} {format_number(hi)}")
    if bounds:
        lines.append("BOUNDS")
        lines += bounds

    if model.sos2_sets:
        lines.append("SOS")
        for sos in model.sos2_sets:
            lines.append(f" S2 SOS {_check_name(sos.name)} 1")
            lines += [f" {v} {format_number(w)}" for v, w in sos.members]
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def split_sos_section(text: str) -> tuple[str, list[tuple[str, list[tuple[str, float]]]]]:
    """Remove the SOS section; returns the remaining text and the S2 sets it held."""
    kept, sets = [], []
    in_sos = False
    for line in text.splitlines():
        head = line.split()
        if not line.startswith(" ") and head:
            in_sos = head[0] == "SOS"
            if in_sos:
                continue
        if not in_sos:
            kept.append(line)
            continue
        if not head:
            continue
        if head[0] in ("S1", "S2") and len(head) >= 3 and head[1] == "SOS":
            if head[0] != "S2":
                raise MpsError("only S2 sets are supported")
            sets.append((head[2], []))
        elif sets and len(head) == 2:
            sets[-1][1].append((head[0], float(head[1])))
        else:
            raise MpsError(f"cannot read SOS line {line!r}")
    return "\n".join(kept) + "\n", sets
