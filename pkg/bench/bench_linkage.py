#!/usr/bin/env python3
"""Benchmark the compiled agglomeration kernel against the NumPy fallback.

Runs every linkage variant on random symmetric matrices (plus the 265-asset
benchmark matrix) with both backends, reports per-run times and the speedup,
and verifies the outputs agree exactly.
"""

import argparse
import time

import numpy as np

from hcbm.clustering import VARIANT_CODES, _lw_python
from hcbm.model import benchmark_hierarchy, build_correlation, correlation_to_distance

try:
    from hcbm.clustering import _lw_kernel
except ImportError:
    _lw_kernel = None


def random_distance(n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.random((n, n))
    d = (a + a.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return d


def time_backend(module, dist: np.ndarray, code: int, repeats: int) -> tuple[float, tuple]:
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = module.lw_agglomerate(dist, code)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 265, 500])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _lw_kernel is None:
        print("compiled kernel not available; nothing to compare")
        return 1

    rng = np.random.default_rng(args.seed)
    matrices = {f"random n={n}": random_distance(n, rng) for n in args.sizes}
    bench = correlation_to_distance(build_correlation(benchmark_hierarchy()))
    noise = rng.normal(0.0, 0.01, bench.shape)
    noise = (noise + noise.T) / 2.0
    np.fill_diagonal(noise, 0.0)
    matrices["benchmark265 + noise"] = bench + noise

    print(f"{'matrix':>22}  {'variant':>9}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
    mismatches = 0
    for label, dist in matrices.items():
        for name, code in VARIANT_CODES.items():
            t_c, r_c = time_backend(_lw_kernel, dist, code, args.repeats)
            t_p, r_p = time_backend(_lw_python, dist, code, args.repeats)
            same = all(np.array_equal(a, b) for a, b in zip(r_c, r_p))
            mismatches += not same
            flag = "" if same else "  MISMATCH"
            print(f"{label:>22}  {name:>9}  {t_c * 1e3:>8.2f}ms  {t_p * 1e3:>8.2f}ms  "
                  f"{t_p / t_c:>7.1f}x{flag}")
    if mismatches:
        print(f"\n{mismatches} variant(s) disagreed between backends")
        return 1
    print("\nall outputs identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
