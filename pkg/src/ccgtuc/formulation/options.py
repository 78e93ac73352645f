"""Formulation variants and build switches."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from enum import Enum


class Variant(str, Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    CFBM = "CFBM"
    HM1 = "HM1"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        key = text.strip().upper().replace("-", "")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown variant {text!r}; choose from {[v.value for v in cls]}") from None


_PRESETS = {
    Variant.F1: dict(transition_logic="config", transition_vars="binary", startup_indicator_vars="binary"),
    Variant.F2: dict(transition_logic="turbine", transition_vars="binary", startup_indicator_vars="binary"),
    Variant.F3: dict(transition_logic="both", transition_vars="binary", startup_indicator_vars="binary"),
    Variant.F4: dict(transition_logic="config", transition_vars="continuous", startup_indicator_vars="binary"),
    Variant.F5: dict(transition_logic="config", transition_vars="binary", startup_indicator_vars="binary"),
    Variant.CFBM: dict(transition_logic="config", transition_vars="binary", startup_indicator_vars="binary"),
    Variant.HM1: dict(transition_logic="config", transition_vars="binary", startup_indicator_vars="binary"),
}


@dataclass(frozen=True)
class BuildOptions:
    variant: Variant = Variant.F1
    transition_logic: str = "config"  # config | turbine | both
    transition_vars: str = "binary"  # binary | continuous
    startup_indicator_vars: str = "binary"  # binary | continuous
    per_turbine_min_updown_selection: frozenset[str] | None = None
    include_daily_start_caps: bool = True

    def __post_init__(self):
        if self.transition_logic not in ("config", "turbine", "both"):
            raise ValueError(f"bad transition_logic {self.transition_logic!r}")
        for name in ("transition_vars", "startup_indicator_vars"):
            if getattr(self, name) not in ("binary", "continuous"):
                raise ValueError(f"bad {name} {getattr(self, name)!r}")

    @classmethod
    def preset(cls, variant: Variant | str, **overrides) -> "BuildOptions":
        variant = Variant.parse(variant) if isinstance(variant, str) else variant
        if variant is Variant.F5:
            warnings.warn(
                "F5 drops an extra tightening family that this package does not build; "
                "F5 is identical to F1",
                stacklevel=2,
            )
        return replace(cls(variant=variant, **_PRESETS[variant]), **overrides)

    @property
    def is_cfbm(self) -> bool:
        return self.variant in (Variant.CFBM, Variant.HM1)

    @property
    def pt_min_updown(self) -> bool:
        return self.variant is not Variant.CFBM

    def min_updown_turbines(self, plant) -> frozenset[str]:
        if self.per_turbine_min_updown_selection is None:
            return frozenset(x.id for x in plant.turbines)
        return frozenset(self.per_turbine_min_updown_selection)
