# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled depth-first path search; same algorithm as ``_enumerate_py``."""

import numpy as np

from libc.math cimport INFINITY, fabs, isfinite


cdef inline double _threshold(double best) noexcept:
    if best == INFINITY:
        return INFINITY
    return best - 1e-9 * (fabs(best) if fabs(best) > 1.0 else 1.0)


cdef inline int _hottest(const long long[:] thr, int n_tiers, const long long[:] hours, int n_hours, int t) noexcept:
    cdef int w, k
    cdef long long d, lo, hi
    for w in range(n_tiers - 1):
        lo = thr[w]
        hi = thr[w + 1] - 1
        for k in range(n_hours):
            d = t - hours[k]
            if lo <= d <= hi:
                return w
    return n_tiers - 1


cdef class _Search:
    cdef int T, Y, X, check_min, check_caps, cfbm, prune
    cdef const signed char[:, :] allowed
    cdef const double[:, :, :] stint
    cdef const double[:] lb
    cdef const signed char[:, :] on
    cdef const long long[:] min_up
    cdef const long long[:] min_down
    cdef const long long[:] caps
    cdef const long long[:, :] tier_thr
    cdef const double[:, :] tier_cost
    cdef const long long[:] tier_n
    cdef const signed char[:, :] upward
    cdef const signed char[:, :] change
    cdef const long long[:, :, :] trans_thr
    cdef const double[:, :, :] trans_cost
    cdef const long long[:, :] trans_n
    cdef long long[:] run
    cdef long long[:] status
    cdef long long[:, :] sd_hours
    cdef long long[:] sd_n
    cdef long long[:] ev_hours
    cdef int ev_n
    cdef long long[:, :] starts
    cdef long long[:] path
    cdef long long[:] best_path
    cdef long long[:, :] saved_run
    cdef long long[:, :] saved_status
    cdef long long[:, :] saved_sd
    cdef long long[:, :] started
    cdef double best
    cdef long long visited

    def __init__(self, tab):
        self.T = tab.horizon
        self.Y = tab.n_configs
        self.X = tab.n_turbines
        self.check_min = tab.check_min_times
        self.check_caps = tab.check_caps
        self.cfbm = tab.cfbm_pricing
        self.prune = tab.prune
        self.allowed = np.ascontiguousarray(tab.allowed, dtype=np.int8)
        self.stint = np.ascontiguousarray(tab.stint, dtype=np.float64)
        self.lb = np.ascontiguousarray(tab.hour_lb_suffix, dtype=np.float64)
        self.on = np.ascontiguousarray(tab.on_mask, dtype=np.int8)
        self.min_up = np.ascontiguousarray(tab.min_up, dtype=np.int64)
        self.min_down = np.ascontiguousarray(tab.min_down, dtype=np.int64)
        self.caps = np.ascontiguousarray(tab.caps, dtype=np.int64)
        self.tier_thr = np.ascontiguousarray(tab.tier_thr, dtype=np.int64)
        self.tier_cost = np.ascontiguousarray(tab.tier_cost, dtype=np.float64)
        self.tier_n = np.ascontiguousarray(tab.tier_n, dtype=np.int64)
        self.upward = np.ascontiguousarray(tab.upward, dtype=np.int8)
        self.change = np.ascontiguousarray(tab.change, dtype=np.int8)
        self.trans_thr = np.ascontiguousarray(tab.trans_thr, dtype=np.int64)
        self.trans_cost = np.ascontiguousarray(tab.trans_cost, dtype=np.float64)
        self.trans_n = np.ascontiguousarray(tab.trans_n, dtype=np.int64)

        T, X = self.T, self.X
        self.run = np.array(tab.init_hours, dtype=np.int64)
        self.status = np.array(tab.init_on, dtype=np.int64)
        self.sd_hours = np.zeros((max(X, 1), T + 2), dtype=np.int64)
        self.sd_n = np.zeros(max(X, 1), dtype=np.int64)
        for x in range(X):
            if not self.status[x]:
                self.sd_hours[x, 0] = 1 - self.run[x]
                self.sd_n[x] = 1
        self.ev_hours = np.zeros(T + 2, dtype=np.int64)
        self.ev_hours[0] = 1 - int(tab.init_clock)
        self.ev_n = 1
        self.starts = np.zeros((max(X, 1), (T + 23) // 24 + 1), dtype=np.int64)
        self.path = np.zeros(T + 1, dtype=np.int64)
        self.best_path = np.full(T, -1, dtype=np.int64)
        # per-depth scratch so recursion needs no allocation
        self.saved_run = np.zeros((T + 1, max(X, 1)), dtype=np.int64)
        self.saved_status = np.zeros((T + 1, max(X, 1)), dtype=np.int64)
        self.saved_sd = np.zeros((T + 1, max(X, 1)), dtype=np.int64)
        self.started = np.zeros((T + 1, max(X, 1) + 1), dtype=np.int64)
        self.best = INFINITY
        self.visited = 0

    cdef void dfs(self, int t, int prev, int a, double closed) noexcept:
        cdef int y, x, w, new_a, ok, s, n_started, day, k, saved_ev
        cdef double add, close, total, cost
        cdef long long need
        for y in range(self.Y):
            if not self.allowed[prev, y]:
                continue
            self.visited += 1
            add = 0.0
            new_a = a
            close = 0.0
            if t == 1:
                new_a = 1
            elif y != prev:
                close = self.stint[prev, a, t - 1]
                new_a = t
            if y != prev:
                if self.cfbm:
                    if self.upward[prev, y]:
                        w = _hottest(self.trans_thr[prev, y], <int>self.trans_n[prev, y], self.ev_hours, self.ev_n, t)
                        add += self.trans_cost[prev, y, w]
                else:
                    for x in range(self.X):
                        if self.on[y, x] and not self.on[prev, x]:
                            w = _hottest(self.tier_thr[x], <int>self.tier_n[x], self.sd_hours[x], <int>self.sd_n[x], t)
                            add += self.tier_cost[x, w]
            if not isfinite(self.stint[y, new_a, t]):
                continue
            total = closed + close + add
            if self.prune and total + self.lb[new_a] >= _threshold(self.best):
                continue
            ok = 1
            for x in range(self.X):
                self.saved_run[t, x] = self.run[x]
                self.saved_status[t, x] = self.status[x]
                self.saved_sd[t, x] = self.sd_n[x]
            saved_ev = self.ev_n
            day = (t - 1) // 24
            n_started = 0
            for x in range(self.X):
                s = self.on[y, x]
                if s != self.status[x]:
                    if self.check_min:
                        need = self.min_up[x] if self.status[x] else self.min_down[x]
                        if self.run[x] < need:
                            ok = 0
                            break
                    if s:
                        self.started[t, n_started] = x
                        n_started += 1
                    else:
                        self.sd_hours[x, self.sd_n[x]] = t
                        self.sd_n[x] += 1
                    self.status[x] = s
                    self.run[x] = 1
                else:
                    self.run[x] += 1
            if ok and self.check_caps:
                for k in range(n_started):
                    x = <int>self.started[t, k]
                    if self.caps[x] >= 0 and self.starts[x, day] + 1 > self.caps[x]:
                        ok = 0
                        break
            if ok:
                for k in range(n_started):
                    self.starts[self.started[t, k], day] += 1
                if self.change[prev, y]:
                    self.ev_hours[self.ev_n] = t
                    self.ev_n += 1
                self.path[t] = y
                if t == self.T:
                    cost = total + self.stint[y, new_a, self.T]
                    if cost < _threshold(self.best):
                        self.best = cost
                        for k in range(self.T):
                            self.best_path[k] = self.path[k + 1]
                else:
                    self.dfs(t + 1, y, new_a, total)
                for k in range(n_started):
                    self.starts[self.started[t, k], day] -= 1
            for x in range(self.X):
                self.run[x] = self.saved_run[t, x]
                self.status[x] = self.saved_status[t, x]
                self.sd_n[x] = self.saved_sd[t, x]
            self.ev_n = saved_ev


def enumerate_paths(tab):
    """``(cost, path indices, nodes visited)``; see the Python fallback for semantics."""
    cdef _Search search = _Search(tab)
    if search.T > 0:
        search.dfs(1, <int>tab.init_index, 1, 0.0)
    else:
        search.best = 0.0
    return search.best, np.asarray(search.best_path), int(search.visited)
