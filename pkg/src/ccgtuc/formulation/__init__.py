"""MILP construction for CCGT plants: hybrid variants and the configuration baseline."""

from ccgtuc.formulation.build import MarketContext, build
from ccgtuc.formulation.model import (
    Domain,
    LinearConstraint,
    MilpModel,
    ModelError,
    Sense,
    Sos2Set,
    VariableRef,
)
from ccgtuc.formulation.options import BuildOptions, Variant

__all__ = [
    "BuildOptions",
    "Domain",
    "LinearConstraint",
    "MarketContext",
    "MilpModel",
    "ModelError",
    "Sense",
    "Sos2Set",
    "Variant",
    "VariableRef",
    "build",
]
