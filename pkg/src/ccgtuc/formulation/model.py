"""Solver-neutral MILP container."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping


class Domain(str, Enum):
    BINARY = "binary"
    CONTINUOUS = "continuous"


class Sense(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


@dataclass(frozen=True)
class VariableRef:
    name: str
    domain: Domain
    lo: float = 0.0
    hi: float = math.inf


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    terms: tuple[tuple[str, float], ...]
    sense: Sense
    rhs: float
    family: str = ""

    def activity(self, values: Mapping[str, float]) -> float:
        return math.fsum(c * values.get(v, 0.0) for v, c in self.terms)

    def violation(self, values: Mapping[str, float]) -> float:
        lhs = self.activity(values)
        if self.sense is Sense.LE:
            return max(0.0, lhs - self.rhs)
        if self.sense is Sense.GE:
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


@dataclass(frozen=True)
class Sos2Set:
    """Interpolation weights of one piecewise cost curve.

    ``members`` pairs each weight variable with its breakpoint MW; ``output``
    names the variable the weights reproduce and ``costs`` the breakpoint
    costs they carry into the objective.
    """

    name: str
    members: tuple[tuple[str, float], ...]
    output: str = ""
    costs: tuple[float, ...] = ()


class ModelError(ValueError):
    pass


@dataclass
class MilpModel:
    name: str = "ccgtuc"
    variables: dict[str, VariableRef] = field(default_factory=dict)
    constraints: list[LinearConstraint] = field(default_factory=list)
    sos2_sets: list[Sos2Set] = field(default_factory=list)
    objective: dict[str, float] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    _row_names: set = field(default_factory=set, repr=False)

    def add_variable(self, name: str, domain: Domain | str = Domain.CONTINUOUS, lo: float = 0.0, hi: float = math.inf) -> str:
        domain = Domain(domain)
        if name in self.variables:
            raise ModelError(f"duplicate variable {name!r}")
        if domain is Domain.BINARY:
            lo, hi = 0.0, 1.0
        self.variables[name] = VariableRef(name, domain, float(lo), float(hi))
        return name

    def add_constraint(self, name: str, terms: Iterable[tuple[str, float]], sense: Sense | str, rhs: float, family: str = "") -> LinearConstraint:
        if name in self._row_names:
            raise ModelError(f"duplicate constraint {name!r}")
        merged: dict[str, float] = {}
        for var, coef in terms:
            if var not in self.variables:
                raise ModelError(f"constraint {name!r} uses undeclared variable {var!r}")
            if not math.isfinite(coef):
                raise ModelError(f"constraint {name!r} has non-finite coefficient on {var!r}")
            merged[var] = merged.get(var, 0.0) + coef
        row = LinearConstraint(
            name,
            tuple((v, c) for v, c in merged.items() if c != 0.0),
            Sense(sense),
            float(rhs),
            family,
        )
        self._row_names.add(name)
        self.constraints.append(row)
        return row

    def add_sos2(self, name: str, members: Iterable[tuple[str, float]], output: str = "", costs: Iterable[float] = ()) -> Sos2Set:
        members = tuple((v, float(w)) for v, w in members)
        if len(members) < 2:
            raise ModelError(f"SOS2 set {name!r} needs at least 2 members")
        if any(b[1] <= a[1] for a, b in zip(members, members[1:])):
            raise ModelError(f"SOS2 set {name!r} weights must be strictly increasing")
        for v, _ in members:
            if v not in self.variables:
                raise ModelError(f"SOS2 set {name!r} uses undeclared variable {v!r}")
        sos = Sos2Set(name, members, output, tuple(float(c) for c in costs))
        self.sos2_sets.append(sos)
        return sos

    def add_objective(self, var: str, coef: float):
        if var not in self.variables:
            raise ModelError(f"objective uses undeclared variable {var!r}")
        if coef:
            self.objective[var] = self.objective.get(var, 0.0) + float(coef)

    def objective_value(self, values: Mapping[str, float]) -> float:
        return math.fsum(c * values.get(v, 0.0) for v, c in self.objective.items())

    def max_violation(self, values: Mapping[str, float]) -> tuple[float, str | None]:
        """Largest absolute row or bound violation and the offender's name."""
        worst, where = 0.0, None
        for row in self.constraints:
            viol = row.violation(values)
            if viol > worst:
                worst, where = viol, row.name
        for var in self.variables.values():
            x = values.get(var.name, 0.0)
            viol = max(var.lo - x, x - var.hi, 0.0)
            if var.domain is Domain.BINARY:
                viol = max(viol, min(abs(x), abs(1 - x)))
            if viol > worst:
                worst, where = viol, var.name
        return worst, where

    def family_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for row in self.constraints:
            out[row.family] = out.get(row.family, 0) + 1
        return out

    @property
    def binaries(self) -> list[str]:
        return [v.name for v in self.variables.values() if v.domain is Domain.BINARY]

    def relaxed(self) -> "MilpModel":
        """Copy with every binary made continuous in [0, 1] and SOS sets dropped."""
        out = MilpModel(
            name=self.name,
            variables={
                n: VariableRef(n, Domain.CONTINUOUS, v.lo, v.hi) for n, v in self.variables.items()
            },
            constraints=list(self.constraints),
            sos2_sets=[],
            objective=dict(self.objective),
            metadata={**self.metadata, "relaxed": True},
        )
        out._row_names = set(self._row_names)
        return out
