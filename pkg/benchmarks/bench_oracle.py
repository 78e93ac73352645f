"""Compiled vs pure-Python oracle kernel on random aggregate 2x1 instances.

    python benchmarks/bench_oracle.py --horizons 4 6 8 10 --seeds 5

Pruning is off so both kernels walk the full path tree and do the same work.
The oracle's path guard caps the aggregate plant at T = 10.
"""

from __future__ import annotations

import argparse
import statistics
import time

from ccgtuc.harness.fixtures import random_aggregate_instance
from ccgtuc.oracle import brute_force_optimal
from ccgtuc.oracle.kernel import compiled_available


def time_kernel(plant, context, pure_python: bool, repeat: int) -> tuple[float, object]:
    best, result = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        result = brute_force_optimal(plant, context, pure_python=pure_python, prune=False)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--horizons", type=int, nargs="+", default=[4, 6, 8, 10])
    parser.add_argument("--seeds", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3, help="best of N runs per kernel")
    args = parser.parse_args(argv)

    if not compiled_available():
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
        return 1

    print(f"{'T':>3} {'nodes':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for horizon in args.horizons:
        py_times, cy_times, visited = [], [], []
        for seed in range(args.seeds):
            plant, context = random_aggregate_instance(seed, horizon)
            t_py, r_py = time_kernel(plant, context, True, args.repeat)
            t_cy, r_cy = time_kernel(plant, context, False, args.repeat)
            if abs(r_py.cost - r_cy.cost) > 1e-9 * max(1.0, abs(r_py.cost)):
                raise SystemExit(f"kernels disagree on seed {seed}, T={horizon}: {r_py.cost} vs {r_cy.cost}")
            py_times.append(t_py)
            cy_times.append(t_cy)
            visited.append(r_cy.visited)
        py, cy = statistics.median(py_times), statistics.median(cy_times)
        print(f"{horizon:>3} {int(statistics.median(visited)):>10} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
