"""Time each hot kernel under numba and under the numpy fallback.

Both implementations are imported side by side, so one run compares them
regardless of GEOSKETCH_BACKEND.  Numba kernels are called once before
timing to exclude compilation.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from geosketch import kernels
from geosketch.polygon import bounding_body


def cases(rng):
    pts = rng.random((3025, 2))
    pts = np.ascontiguousarray(pts[np.argsort(pts[:, 0])])
    side = rng.uniform(0, 0.12, (2000, 2))
    lo = rng.random((2000, 2)) * (1 - side)
    hi = lo + side
    yield "mark_hits", (
        lambda f: f(pts, np.zeros(len(pts), np.bool_), lo, hi)
    ), kernels.mark_hits_nb, kernels.mark_hits_np

    counts = rng.integers(0, 50, 1000).astype(np.int64)
    n = int(counts.sum())
    yield "bucket_discrepancy", (lambda f: f(counts, 0.001, n)), kernels.bucket_discrepancy_nb, kernels.bucket_discrepancy_np

    ang = rng.uniform(0, 2 * math.pi, 500)
    normals = np.column_stack([np.cos(ang), np.sin(ang)])
    offsets = rng.uniform(0.3, 1.0, 500)
    poly = np.ascontiguousarray(bounding_body().vertices)
    yield "clip_many", (lambda f: f(poly, normals, offsets, 1e-12)), kernels.clip_many_nb, kernels.clip_many_np

    t = 2 * math.pi * np.arange(200) / 200
    circle = np.ascontiguousarray(0.8 * np.column_stack([np.cos(t), np.sin(t)]))
    yield "greedy_outer", (lambda f: f(circle, 1e-3, 0.0, 0.9 * math.pi)), kernels.greedy_outer_nb, kernels.greedy_outer_np

    k = 300
    ix = np.sort(rng.integers(0, 2 * k, (k, 2)), axis=1)
    iy = np.sort(rng.integers(0, 2 * k, (k, 2)), axis=1)
    ix[:, 1] += 1
    iy[:, 1] += 1
    dx = rng.random(2 * k + 1)
    dy = rng.random(2 * k + 1)
    yield "union_area_2d", (
        lambda f: f(ix[:, 0].copy(), ix[:, 1].copy(), iy[:, 0].copy(), iy[:, 1].copy(), dx, dy)
    ), kernels.union_area_2d_nb, kernels.union_area_2d_np


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, call, nb, npf in cases(rng):
        call(nb)
        t_nb = min(timeit.repeat(lambda: call(nb), number=1, repeat=args.repeat)) * 1e3
        t_np = min(timeit.repeat(lambda: call(npf), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<20}{t_nb:>12.3f}{t_np:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
