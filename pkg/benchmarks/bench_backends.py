#!/usr/bin/env python3
"""Benchmark the numba episode kernel against the pure-numpy fallback.

Both backends must produce bit-identical results; this script times them on
the same workloads and verifies equality. The numba column includes a warmup
call so JIT compilation is not billed to the measured runs.

Usage: python benchmarks/bench_backends.py [--trials N ...]
"""

import argparse
import time

from ng_greedy import SimConfig, StrategyParams, estimate
from ng_greedy._kernels import available_backends

POINTS = [
    (0.15, 0.5),  # light episodes, heavy truncation
    (0.30, 0.5),  # mid power, long boundary walks
    (0.45, 1.0),  # slow drift, longest episodes
]


def time_backend(config, backend):
    t0 = time.perf_counter()
    stats = estimate(config, backend=backend)
    return time.perf_counter() - t0, stats


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, nargs="*", default=[100_000, 1_000_000])
    args = parser.parse_args()

    backends = available_backends()
    if "numba" in backends:
        estimate(SimConfig(StrategyParams(0.3, 0.5), trials=1_000, master_seed=0), backend="numba")  # warmup

    print(f"{'alpha':>6} {'gamma':>6} {'trials':>9}  " + "  ".join(f"{b:>10}" for b in backends) + "   speedup  identical")
    for trials in args.trials:
        for alpha, gamma in POINTS:
            config = SimConfig(StrategyParams(alpha, gamma), trials=trials, master_seed=42)
            times, results = {}, {}
            for backend in backends:
                times[backend], results[backend] = time_backend(config, backend)
            values = list(results.values())
            identical = all(v == values[0] for v in values)
            speedup = times["numpy"] / times["numba"] if len(backends) == 2 else float("nan")
            cols = "  ".join(f"{times[b]:>9.3f}s" for b in backends)
            print(f"{alpha:>6.2f} {gamma:>6.2f} {trials:>9}  {cols}   {speedup:>6.1f}x  {identical}")
            if not identical:
                raise SystemExit("backend results diverged")


if __name__ == "__main__":
    main()
