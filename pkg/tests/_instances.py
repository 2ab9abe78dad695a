"""Seeded random instance generators shared by the test modules."""

import math

import numpy as np

from geosketch.geometry import Color, Halfplane, HyperRect, LabeledPoint

# per-dimension side scale giving union volumes roughly in [0.2, 0.9] at n=200
SIDE_SCALE = {1: 0.007, 2: 0.12, 3: 0.30}


def random_rects(rng, n, d, scale=None):
    scale = SIDE_SCALE[d] if scale is None else scale
    side = rng.uniform(0.0, scale, (n, d))
    lo = rng.uniform(0.0, 1.0, (n, d)) * (1.0 - side)
    return [HyperRect(tuple(a), tuple(a + s)) for a, s in zip(lo, side)]


def random_fat_rects(rng, n, d, delta, spread=0.35):
    side = np.minimum(delta + rng.uniform(0.0, spread, (n, d)), 1.0)
    lo = rng.uniform(0.0, 1.0, (n, d)) * (1.0 - side)
    return [HyperRect(tuple(a), tuple(np.minimum(a + s, 1.0))) for a, s in zip(lo, side)]


def random_grid_rects(rng, n, d, N, max_side=None):
    max_side = N // 3 if max_side is None else max_side
    out = []
    for _ in range(n):
        side = rng.integers(1, max_side + 1, d)
        lo = np.array([rng.integers(0, N - s + 1) for s in side])
        out.append(HyperRect(tuple(float(v) for v in lo), tuple(float(v) for v in lo + side)))
    return out


def random_halfplanes(rng, n, c_lo=0.3, c_hi=1.0):
    ang = rng.uniform(0.0, 2.0 * math.pi, n)
    c = rng.uniform(c_lo, c_hi, n)
    return [Halfplane(math.cos(a), math.sin(a), float(v)) for a, v in zip(ang, c)]


def random_points(rng, n, style=None):
    style = rng.integers(0, 4) if style is None else style
    if style == 0:
        return rng.random(n)
    if style == 1:
        return rng.beta(0.5, 0.5, n)
    if style == 2:
        # heavy ties on a coarse grid
        return np.round(rng.random(n) * 7) / 7
    centre = rng.random()
    return np.clip(centre + 0.05 * rng.standard_normal(n), 0.0, 1.0)


def random_sorted_colored(rng, n, ties=False):
    x = np.sort(np.round(rng.random(n) * 20) / 20 if ties else rng.random(n))
    bias = rng.uniform(0.2, 0.8)
    return [LabeledPoint(float(v), Color.RED if rng.random() < bias else Color.BLUE) for v in x]


def bits(rng, n):
    return "".join(str(b) for b in rng.integers(0, 2, n))
