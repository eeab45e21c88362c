"""Benchmark the compiled bucket-map kernel against the pure-Python fallback.

Builds the 3^m-expanded bucket map (m hash digits, l-infinity radius-1
neighbor offsets) for a grid of sizes with both backends, checks the maps
are identical, and prints a throughput table.

Usage: python3 benchmarks/bench_kernels.py [--repeats 3]
"""

import argparse
import itertools
import time

import numpy as np

from nnwfn.kernels import BACKEND, _python

try:
    from nnwfn.kernels import _fast
except ImportError:
    _fast = None

CASES = [
    # (n points, hash digits m)
    (2_000, 2),
    (2_000, 4),
    (20_000, 2),
    (20_000, 4),
    (5_000, 6),
    (50_000, 2),
]


def neighbor_offsets(m):
    return np.array(list(itertools.product((-1, 0, 1), repeat=m)), dtype=np.int32)


def run(module, digits, offsets, repeats):
    best = float("inf")
    buckets = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        buckets = module.build_buckets(digits, offsets)
        best = min(best, time.perf_counter() - t0)
    return buckets, best


def same_buckets(a, b):
    if a.keys() != b.keys():
        return False
    return all(np.array_equal(a[k], b[k]) for k in a)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"active backend at import: {BACKEND}")
    if _fast is None:
        print("compiled kernel unavailable; benchmarking pure Python only")
    header = f"{'n':>8} {'digits':>6} {'entries':>10} " \
             f"{'python (s)':>11} {'cython (s)':>11} {'speedup':>8}"
    print(header)
    print("-" * len(header))

    rng = np.random.default_rng(0)
    for n, m in CASES:
        digits = rng.integers(-50, 50, size=(n, m)).astype(np.int32)
        offsets = neighbor_offsets(m)
        entries = n * 3**m
        py_buckets, py_t = run(_python, digits, offsets, args.repeats)
        if _fast is not None:
            cy_buckets, cy_t = run(_fast, digits, offsets, args.repeats)
            assert same_buckets(py_buckets, cy_buckets), "backend outputs differ"
            print(f"{n:>8} {m:>6} {entries:>10} "
                  f"{py_t:>11.4f} {cy_t:>11.4f} {py_t / cy_t:>7.2f}x")
        else:
            print(f"{n:>8} {m:>6} {entries:>10} "
                  f"{py_t:>11.4f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
