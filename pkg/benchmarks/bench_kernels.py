"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 200,500,1000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from eventgraph.kernels import _pykernels

try:
    from eventgraph.kernels import _ckernels
except ImportError:
    _ckernels = None


def timed(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_distance(impl, n, d=100, seed=1):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, d))
    u = x / np.linalg.norm(x, axis=1)[:, None]
    return timed(impl.cosine_distance_matrix, u)


def bench_dbscan(impl, n, seed=1):
    rng = np.random.default_rng(seed)
    centers = np.eye(4) * 10
    points = np.vstack([
        centers[i % 4] + rng.normal(scale=0.4, size=4) for i in range(n)
    ])
    u = points / np.linalg.norm(points, axis=1)[:, None]
    dist = _pykernels.cosine_distance_matrix(u)
    def grid_run(d):
        for eps in np.arange(0.01, 0.51, 0.01):
            impl.dbscan_labels(d, float(eps), 3)
    return timed(grid_run, dist, repeat=1)


def bench_edit_distance(impl, n_words, seed=1):
    rng = np.random.default_rng(seed)
    alphabet = np.array(list("abcdefghijklmnopqrstuvwxyz"))
    vocab = ["".join(rng.choice(alphabet, size=rng.integers(4, 12))) for _ in range(n_words)]
    def scan():
        query = b"wuhan"
        return sum(impl.bounded_edit_distance(query, w.encode(), 1) <= 1 for w in vocab)
    return timed(scan)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="200,500,1000",
                        help="comma-separated point counts")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    impls = [("python", _pykernels)]
    if _ckernels is not None:
        impls.append(("cython", _ckernels))
    else:
        print("note: compiled extension not built; showing fallback only")

    print(f"{'benchmark':<28} {'n':>6} " + " ".join(f"{name:>12}" for name, _ in impls)
          + ("      speedup" if len(impls) == 2 else ""))
    for n in sizes:
        rows = {
            f"cosine distance matrix": [bench_distance(impl, n)[0] for _, impl in impls],
            f"dbscan 50-eps grid": [bench_dbscan(impl, n)[0] for _, impl in impls],
        }
        for label, times in rows.items():
            cells = " ".join(f"{t * 1000:>10.1f}ms" for t in times)
            speedup = f"  {times[0] / times[1]:>9.1f}x" if len(times) == 2 else ""
            print(f"{label:<28} {n:>6} {cells}{speedup}")
    times = [bench_edit_distance(impl, 20000)[0] for _, impl in impls]
    cells = " ".join(f"{t * 1000:>10.1f}ms" for t in times)
    speedup = f"  {times[0] / times[1]:>9.1f}x" if len(times) == 2 else ""
    print(f"{'fuzzy vocab scan (20k words)':<28} {'-':>6} {cells}{speedup}")


if __name__ == "__main__":
    main()
