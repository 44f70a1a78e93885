#!/usr/bin/env python3
"""Benchmark the compiled distance kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 1000,4000] [--dims 8]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from coresample._kernels import _pykernels

try:
    from coresample._kernels import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(sizes, dims, k, p):
    mode = _pykernels.mode_of(p)
    rng = np.random.default_rng(0)
    header = f"{'kernel':<16}{'n':>8}{'numpy':>12}{'cython':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        pts = rng.standard_normal((n, dims))
        queries = rng.standard_normal((max(n // 4, 1), dims))
        codes = rng.integers(0, 2, size=n).astype(np.int64)

        cases = [
            ("knn_mean_dists", lambda m=None: m.knn_mean_dists(pts, k, p, mode)),
            (
                "knn_label_votes",
                lambda m=None: m.knn_label_votes(pts, codes, 2, queries, k, p, mode),
            ),
        ]
        for name, call in cases:
            t_np = _time(lambda: call(m=_pykernels))
            if _ckernels is None:
                print(f"{name:<16}{n:>8}{t_np:>11.3f}s{'n/a':>12}{'n/a':>10}")
                continue
            t_cy = _time(lambda: call(m=_ckernels))
            ref = np.asarray(call(m=_ckernels))
            out = np.asarray(call(m=_pykernels))
            agree = np.allclose(ref, out, rtol=1e-12) if name == "knn_mean_dists" else (ref == out).all()
            flag = "" if agree else "  (MISMATCH)"
            print(f"{name:<16}{n:>8}{t_np:>11.3f}s{t_cy:>11.3f}s{t_np / t_cy:>9.1f}x{flag}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,4000", help="comma-separated row counts")
    parser.add_argument("--dims", type=int, default=8)
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--p", type=float, default=2.0)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels unavailable; timing the numpy fallback only\n")
    bench([int(s) for s in args.sizes.split(",")], args.dims, args.k, args.p)


if __name__ == "__main__":
    main()
