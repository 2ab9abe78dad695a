"""Hard-instance generators built from two-party disjointness and index inputs.

Each generator returns the materialised stream together with the value the
construction predicts; :func:`verify` recomputes that value with the exact
oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import IndexOutOfRange, LengthMismatch
from .geometry import Color, Halfplane, HyperRect, LabeledPoint

__all__ = [
    "GadgetInstance",
    "disj",
    "gen_colordisc_disj",
    "gen_convex_index",
    "gen_geodisc_disj",
    "gen_klee_disj",
    "parse_bits",
    "verify",
]

GADGETS = ("klee-disj", "geodisc", "colordisc", "convex-index")


@dataclass
class GadgetInstance:
    kind: str
    stream: list[Any]
    params: dict[str, Any]
    prediction: dict[str, Any]
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.meta["n"]


def parse_bits(bits) -> tuple[int, ...]:
    if isinstance(bits, str):
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        return tuple(int(b) for b in bits)
    out = tuple(int(b) for b in bits)
    if not out or set(out) - {0, 1}:
        raise ValueError("bit vectors must be non-empty 0/1 sequences")
    return out


def _bitstr(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def _pair(x, y) -> tuple[tuple[int, ...], tuple[int, ...]]:
    x, y = parse_bits(x), parse_bits(y)
    if len(x) != len(y):
        raise LengthMismatch(f"|x| = {len(x)} but |y| = {len(y)}")
    return x, y


def disj(x, y) -> int:
    """1 when no position has both bits set."""
    return int(not any(a and b for a, b in zip(x, y)))


def gen_klee_disj(x, y) -> GadgetInstance:
    x, y = _pair(x, y)
    n = len(x)
    stream = [HyperRect.interval((i - 1) / n, i / n) for i in range(1, n + 1) if x[i - 1]]
    stream += [HyperRect.interval((i - 1) / n, i / n) for i in range(1, n + 1) if y[i - 1]]
    l_a, l_b = sum(x) / n, sum(y) / n
    dj = disj(x, y)
    pred = {
        "disj": dj,
        "l_A": l_a,
        "l_B": l_b,
        "union_length": sum(a | b for a, b in zip(x, y)) / n,
        # disjoint inputs reach l_A + l_B; any overlap loses at least 1/n
        "union_max": l_a + l_b if dj else l_a + l_b - 1.0 / n,
    }
    return GadgetInstance("klee-disj", stream, {"x": _bitstr(x), "y": _bitstr(y)}, pred, {"n": n, "d": 1})


def gen_geodisc_disj(x, y) -> GadgetInstance:
    x, y = _pair(x, y)
    n = len(x)
    alice = [(4 * i - 3) / (4 * n) + (1 if x[i - 1] == 0 else -1) / (4 * n) for i in range(1, n + 1)]
    bob = [(4 * i - 1) / (4 * n) if y[i - 1] == 0 else (4 * i - 3) / (4 * n) - 1 / (8 * n) for i in range(1, n + 1)]
    dj = disj(x, y)
    eps = 1.0 / (32 * n)
    pred = {
        "disj": dj,
        # value of the sorted-coordinate closed form for anchored discrepancy
        "star": 1 / (2 * n) + 1 / (8 * n) if dj == 0 else None,
        "star_max": 1 / (2 * n) + 1 / (8 * n) if dj == 0 else 1 / (4 * n),
        "eps": eps,
        "report_max_if_disjoint": 17 * eps,
        "report_min_if_intersecting": 19 * eps,
    }
    return GadgetInstance("geodisc", alice + bob, {"x": _bitstr(x), "y": _bitstr(y)}, pred, {"n": n, "eps": eps})


def gen_colordisc_disj(x, y) -> GadgetInstance:
    x, y = _pair(x, y)
    n = len(x)
    R, B = Color.RED, Color.BLUE
    stream = []
    for i in range(1, n + 1):
        base = (i - 1) / n
        if x[i - 1]:
            stream += [LabeledPoint(base + 1 / (7 * n), R), LabeledPoint(i / n, B)]
        else:
            stream += [LabeledPoint(base + 2 / (7 * n), B), LabeledPoint(i / n, R)]
    for i in range(1, n + 1):
        if y[i - 1]:
            base = (i - 1) / n
            stream += [LabeledPoint(base + k / (7 * n), c) for k, c in ((3, R), (4, R), (5, B), (6, B))]
    dj = disj(x, y)
    pred = {"disj": dj, "star": 1 if dj else 3, "threshold": 12 / 5}
    return GadgetInstance("colordisc", stream, {"x": _bitstr(x), "y": _bitstr(y)}, pred, {"n": n})


def circle_points(n: int) -> np.ndarray:
    """``p_1..p_2n`` evenly on the circle of diameter 1 about the origin."""
    ang = 2.0 * math.pi * np.arange(2 * n) / (2 * n)
    return 0.5 * np.column_stack([np.cos(ang), np.sin(ang)])


def _chord(pts: np.ndarray, a: int, b: int) -> Halfplane:
    # 1-based, cyclic; the halfplane keeps the circle's centre
    pa, pb = pts[(a - 1) % len(pts)], pts[(b - 1) % len(pts)]
    mid = pa + pb
    u = mid / math.hypot(*mid)
    return Halfplane(float(u[0]), float(u[1]), float(u @ pa))


def gen_convex_index(x, j: int) -> GadgetInstance:
    x = parse_bits(x)
    n = len(x)
    if n < 3:
        raise LengthMismatch("the construction needs n >= 3 so no chord is a diameter")
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"index {j} outside 1..{n}")
    pts = circle_points(n)
    stream = []
    for i in range(1, n + 1):
        if x[i - 1]:
            stream += [_chord(pts, 2 * i - 1, 2 * i), _chord(pts, 2 * i, 2 * i + 1)]
        else:
            stream.append(_chord(pts, 2 * i - 1, 2 * i + 1))
    q = pts[2 * j - 1]
    pred = {
        "inside": bool(x[j - 1]),
        "distance": 0.0 if x[j - 1] else math.sin(math.pi / (2 * n)) ** 2,
        "query": [float(q[0]), float(q[1])],
    }
    return GadgetInstance("convex-index", stream, {"x": _bitstr(x), "index": j}, pred, {"n": n})


def generate(name: str, x, y=None, index: int | None = None) -> GadgetInstance:
    if name == "klee-disj":
        return gen_klee_disj(x, y)
    if name == "geodisc":
        return gen_geodisc_disj(x, y)
    if name == "colordisc":
        return gen_colordisc_disj(x, y)
    if name == "convex-index":
        return gen_convex_index(x, index)
    raise ValueError(f"unknown gadget {name!r}")


def verify(inst: GadgetInstance, tol: float = 1e-9) -> dict[str, Any]:
    """Check the prediction against the exact oracles.

    Returns the oracle values together with ``ok``.
    """
    from . import oracles
    from .discrepancy import star_geo_disc_exact

    p = inst.prediction
    if inst.kind == "klee-disj":
        v = oracles.klee_exact(inst.stream, d=1) if inst.stream else 0.0
        ok = abs(v - p["union_length"]) <= tol and v <= p["union_max"] + tol
        if p["disj"]:
            ok = ok and abs(v - (p["l_A"] + p["l_B"])) <= tol
        return {"union_length": v, "ok": ok}
    if inst.kind == "geodisc":
        star = star_geo_disc_exact(sorted(inst.stream))
        ok = star <= p["star_max"] + tol
        if p["star"] is not None:
            ok = ok and abs(star - p["star"]) <= tol
        return {"star": star, "ok": ok}
    if inst.kind == "colordisc":
        d_c, d_star = oracles.color_disc_exact(inst.stream)
        return {"D_c": d_c, "star": d_star, "ok": d_star == p["star"]}
    if inst.kind == "convex-index":
        body = oracles.exact_body(inst.stream)
        dist = oracles.point_distance(body, p["query"])
        ok = abs(dist - p["distance"]) <= tol
        return {"distance": dist, "ok": ok}
    raise ValueError(f"unknown gadget kind {inst.kind!r}")
