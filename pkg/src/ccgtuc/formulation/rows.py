"""Variable naming and row planning shared by the builder and the size counter."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from ccgtuc.plant import PhysicalTurbine, StartupTier


def u_name(plant: str, y: str, t: int) -> str:
    return f"u[{plant},{y},{t}]"


def v_name(plant: str, key: tuple[str, str], t: int, w: int | None = None) -> str:
    if w is None:
        return f"v[{plant},{key[0]},{key[1]},{t}]"
    return f"v[{plant},{key[0]},{key[1]},{t},{w}]"


def p_name(plant: str, y: str, t: int) -> str:
    return f"p[{plant},{y},{t}]"


def lambda_name(plant: str, y: str, t: int, k: int) -> str:
    return f"l[{plant},{y},{t},{k}]"


def delta_name(plant: str, x: str, t: int, w: int) -> str:
    return f"d[{plant},{x},{t},{w}]"


@dataclass(frozen=True)
class WarmthRow:
    """``indicator(t, w) <= sum of events at the window hours``; empty window pins it to 0."""

    t: int
    w: int
    window: tuple[int, ...]


def warmth_rows(
    tiers: Sequence[StartupTier],
    horizon: int,
    init_clock: int | None,
    has_events: bool,
) -> Iterator[WarmthRow]:
    """Rows restricting every tier except the coldest.

    A tier ``w`` start at hour ``t`` needs an event (shutdown, or plant status
    change for CFBM) exactly ``i`` hours earlier with ``i`` in
    ``[T_w, T_{w+1} - 1]``.  ``init_clock`` is the age at hour 0 of the
    pre-horizon event (None when there is none); a row whose band covers that
    event is omitted because the constant already satisfies it.
    """
    for t in range(1, horizon + 1):
        for w in range(1, len(tiers)):
            lo = tiers[w - 1].min_down_for_type
            hi = tiers[w].min_down_for_type - 1
            if init_clock is not None and lo <= t - 1 + init_clock <= hi:
                continue
            window = tuple(t - i for i in range(lo, hi + 1) if t - i >= 1) if has_events else ()
            yield WarmthRow(t, w, window)


def startup_type_rows(turbine: PhysicalTurbine, horizon: int, has_shutdowns: bool) -> Iterator[WarmthRow]:
    init_clock = None if turbine.init_on else turbine.init_off_hours
    return warmth_rows(turbine.startup_tiers, horizon, init_clock, has_shutdowns)
