"""Pure-Python depth-first path search; the compiled kernel mirrors it line for line."""

from __future__ import annotations

import math

import numpy as np


def _hottest(thr, n_tiers: int, hours, n_hours: int, t: int) -> int:
    for w in range(n_tiers - 1):
        lo = thr[w]
        hi = thr[w + 1] - 1
        for k in range(n_hours):
            d = t - hours[k]
            if lo <= d <= hi:
                return w
    return n_tiers - 1


def _threshold(best: float) -> float:
    """Costs must fall below this to count as a strict improvement."""
    if best == math.inf:
        return math.inf
    return best - 1e-9 * max(1.0, abs(best))


def enumerate_paths(tab) -> tuple[float, np.ndarray, int]:
    """Cheapest valid configuration path.

    Returns ``(cost, path, visited)``; ``path`` holds configuration indices
    for hours 1..T and ``cost`` is ``inf`` when no path is valid.  Paths are
    explored in lexicographic index order and replaced only on strict
    improvement, so ties resolve to the lexicographically smallest path.
    """
    T = int(tab.horizon)
    Y = int(tab.n_configs)
    X = int(tab.n_turbines)
    allowed = tab.allowed
    stint = tab.stint
    lb = tab.hour_lb_suffix
    on = tab.on_mask
    check_min = bool(tab.check_min_times)
    check_caps = bool(tab.check_caps)
    cfbm = bool(tab.cfbm_pricing)
    prune = bool(tab.prune)

    run = [int(v) for v in tab.init_hours]
    status = [int(v) for v in tab.init_on]
    sd_hours = [[0] * (T + 2) for _ in range(X)]
    sd_n = [0] * X
    for x in range(X):
        if not status[x]:
            sd_hours[x][0] = 1 - run[x]
            sd_n[x] = 1
    ev_hours = [0] * (T + 2)
    ev_hours[0] = 1 - int(tab.init_clock)
    ev_n = 1
    n_days = (T + 23) // 24
    starts = [[0] * n_days for _ in range(X)]

    path = [0] * (T + 1)
    best = [math.inf]
    best_path = np.full(T, -1, dtype=np.int64)
    visited = [0]

    def dfs(t: int, prev: int, a: int, closed: float):
        nonlocal ev_n
        for y in range(Y):
            if not allowed[prev, y]:
                continue
            visited[0] += 1
            add = 0.0
            new_a = a
            close = 0.0
            if t == 1:
                new_a = 1
            elif y != prev:
                close = stint[prev, a, t - 1]
                new_a = t
            if y != prev:
                if cfbm:
                    if tab.upward[prev, y]:
                        w = _hottest(tab.trans_thr[prev, y], int(tab.trans_n[prev, y]), ev_hours, ev_n, t)
                        add += tab.trans_cost[prev, y, w]
                else:
                    for x in range(X):
                        if on[y, x] and not on[prev, x]:
                            w = _hottest(tab.tier_thr[x], int(tab.tier_n[x]), sd_hours[x], sd_n[x], t)
                            add += tab.tier_cost[x, w]
            if not math.isfinite(stint[y, new_a, t]):
                continue
            total = closed + close + add
            if prune and total + lb[new_a] >= _threshold(best[0]):
                continue
            # turbine rules
            ok = True
            saved_run = run[:]
            saved_status = status[:]
            saved_sd = sd_n[:]
            saved_ev = ev_n
            day = (t - 1) // 24
            started = []
            for x in range(X):
                s = int(on[y, x])
                if s != status[x]:
                    if check_min:
                        need = tab.min_up[x] if status[x] else tab.min_down[x]
                        if run[x] < need:
                            ok = False
                            break
                    if s:
                        started.append(x)
                    else:
                        sd_hours[x][sd_n[x]] = t
                        sd_n[x] += 1
                    status[x] = s
                    run[x] = 1
                else:
                    run[x] += 1
            if ok and check_caps:
                for x in started:
                    if tab.caps[x] >= 0 and starts[x][day] + 1 > tab.caps[x]:
                        ok = False
                        break
            if ok:
                for x in started:
                    starts[x][day] += 1
                if tab.change[prev, y]:
                    ev_hours[ev_n] = t
                    ev_n += 1
                path[t] = y
                if t == T:
                    cost = total + stint[y, new_a, T]
                    if cost < _threshold(best[0]):
                        best[0] = cost
                        best_path[:] = path[1:]
                else:
                    dfs(t + 1, y, new_a, total)
                for x in started:
                    starts[x][day] -= 1
            run[:] = saved_run
            status[:] = saved_status
            sd_n[:] = saved_sd
            ev_n = saved_ev

    if T > 0:
        dfs(1, int(tab.init_index), 1, 0.0)
    else:
        best[0] = 0.0
    return best[0], best_path, visited[0]
