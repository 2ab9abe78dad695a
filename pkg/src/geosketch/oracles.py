"""Exact reference computations for small inputs.

Nothing here is used by the sketches.  The planar oracles lean on scipy
(linear programming, halfspace intersection) and shapely (distances) so the
ground truth for the convex module does not share code with the polygon
clipper under test.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import shapely
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from . import kernels
from .errors import BudgetExceeded, DataError, DimensionMismatch, EmptyInput, Infeasible
from .geometry import Halfplane, HyperRect, LabeledPoint, halfplanes_to_arrays
from .polygon import BOUNDING_SIDES

__all__ = [
    "OracleBudget",
    "bounding_constraints",
    "color_disc_exact",
    "exact_body",
    "geo_disc_exact",
    "klee_exact",
    "lp_exact",
    "point_distance",
    "star_geo_disc_sup",
]

ENV_BUDGET = "GEOSKETCH_ORACLE_BUDGET"

# per-oracle item limits used when the budget does not override them
_ITEM_LIMITS = {"klee1": 5000, "klee": 5000, "geo": 2000, "color": 2000, "lp": 10_000}


@dataclass(frozen=True)
class OracleBudget:
    """Input size limits; ``max_items=None`` keeps each oracle's default."""

    max_items: int | None = None
    max_cells: int = 10_000_000

    @classmethod
    def from_env(cls) -> "OracleBudget":
        raw = os.environ.get(ENV_BUDGET, "").strip()
        if not raw:
            return cls()
        fields = {}
        for part in raw.split(","):
            key, _, val = part.partition("=")
            key = key.strip()
            if key not in ("max_items", "max_cells"):
                raise ValueError(f"{ENV_BUDGET}: unknown key {key!r}")
            fields[key] = int(val)
        return cls(**fields)

    def items(self, oracle: str, n: int) -> None:
        limit = self.max_items if self.max_items is not None else _ITEM_LIMITS[oracle]
        if n > limit:
            raise BudgetExceeded(f"{n} items exceed the oracle limit {limit}")

    def cells(self, n: int) -> None:
        if n > self.max_cells:
            raise BudgetExceeded(f"{n} grid cells exceed the oracle limit {self.max_cells}")


def _budget(budget: OracleBudget | None) -> OracleBudget:
    return OracleBudget.from_env() if budget is None else budget


# ---------------------------------------------------------------------------
# Klee's measure


def klee_exact(rects: Sequence[HyperRect], d: int | None = None, budget: OracleBudget | None = None) -> float:
    """Exact volume of a union of boxes, d <= 3."""
    budget = _budget(budget)
    rects = list(rects)
    if not rects:
        return 0.0
    d = rects[0].d if d is None else d
    if any(r.d != d for r in rects):
        raise DimensionMismatch("boxes of mixed dimension")
    if d > 3:
        raise ValueError("klee_exact supports d <= 3")
    lo = np.array([r.lo for r in rects], dtype=np.float64)
    hi = np.array([r.hi for r in rects], dtype=np.float64)
    if d == 1:
        budget.items("klee1", len(rects))
        order = np.argsort(lo[:, 0], kind="stable")
        total, cur_lo, cur_hi = 0.0, None, None
        for a, b in zip(lo[order, 0], hi[order, 0]):
            if cur_hi is None or a > cur_hi:
                if cur_hi is not None:
                    total += cur_hi - cur_lo
                cur_lo, cur_hi = a, b
            elif b > cur_hi:
                cur_hi = b
        return float(total + (cur_hi - cur_lo))
    budget.items("klee", len(rects))
    coords, ilo, ihi, widths = [], [], [], []
    for axis in range(d):
        c = np.unique(np.concatenate([lo[:, axis], hi[:, axis]]))
        coords.append(c)
        ilo.append(np.searchsorted(c, lo[:, axis]).astype(np.int64))
        ihi.append(np.searchsorted(c, hi[:, axis]).astype(np.int64))
        widths.append(np.diff(c))
    # d = 3 sweeps slabs along z, so only the x-y grid is held at once
    budget.cells(len(widths[0]) * len(widths[1]))
    if d == 2:
        return float(kernels.union_area_2d(ilo[0], ihi[0], ilo[1], ihi[1], widths[0], widths[1]))
    return float(
        kernels.union_volume_3d(ilo[0], ihi[0], ilo[1], ihi[1], ilo[2], ihi[2], widths[0], widths[1], widths[2])
    )


# ---------------------------------------------------------------------------
# discrepancy


def _grouped(points) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray([p.x if isinstance(p, LabeledPoint) else p for p in points], dtype=np.float64)
    if x.size == 0:
        raise EmptyInput("no points")
    if x.min() < 0.0 or x.max() > 1.0:
        raise DataError("points must lie in [0, 1]")
    return np.unique(x, return_counts=True)


def geo_disc_exact(points, budget: OracleBudget | None = None) -> float:
    """Exact interval discrepancy ``sup |len(I) - #(P in I)/n|``.

    The supremum over sub-intervals of [0,1] is reached, or approached, by
    one of two families built on the distinct coordinates v_0 < ... < v_m
    (with 0 and 1 added as empty sentinels):

    * closed ``[v_i, v_j]`` for ``i <= j``: a surplus of points is largest
      when the interval is shrunk onto the outermost points it contains;
    * open ``(v_i, v_j)`` for ``i < j``: a deficit is largest when the
      interval is stretched until it almost reaches the next point (or the
      ends of [0,1]) on either side.

    Any other interval can be moved to one of these without decreasing its
    deviation, so the maximum over both families is the supremum.
    """
    _budget(budget).items("geo", len(points))
    v, mult = _grouped(points)
    n = int(mult.sum())
    if v[0] > 0.0:
        v, mult = np.concatenate(([0.0], v)), np.concatenate(([0], mult))
    if v[-1] < 1.0:
        v, mult = np.concatenate((v, [1.0])), np.concatenate((mult, [0]))
    s = np.concatenate(([0], np.cumsum(mult)))
    i, j = np.triu_indices(len(v))
    length = v[j] - v[i]
    over = ((s[j + 1] - s[i]) / n - length).max()
    k = i < j
    under = (length[k] - (s[j[k]] - s[i[k] + 1]) / n).max() if k.any() else 0.0
    return float(max(over, under))


def star_geo_disc_sup(points) -> float:
    """Exact anchored discrepancy ``sup_p |p - #(P in [0,p])/n|``."""
    x = np.sort(np.asarray([p.x if isinstance(p, LabeledPoint) else p for p in points], dtype=np.float64))
    if x.size == 0:
        raise EmptyInput("no points")
    n = x.size
    v, mult = np.unique(x, return_counts=True)
    after = np.cumsum(mult) / n
    before = after - mult / n
    # [0, v] closed counts through the group; [0, v) stops just before it
    return float(max(np.abs(v - after).max(), np.abs(v - before).max()))


def _color_groups(points: Sequence[LabeledPoint]) -> np.ndarray:
    if not points:
        raise EmptyInput("no points")
    x = np.array([p.x for p in points], dtype=np.float64)
    sign = np.array([p.sign for p in points], dtype=np.int64)
    if np.any(sign == 0):
        raise DataError("every point needs a red or blue label")
    order = np.argsort(x, kind="stable")
    x, sign = x[order], sign[order]
    v, start = np.unique(x, return_index=True)
    group = np.add.reduceat(sign, start)
    return np.concatenate(([0], np.cumsum(group)))


def color_disc_exact(points: Sequence[LabeledPoint], budget: OracleBudget | None = None) -> tuple[int, int]:
    """``(D_c, D*_c)`` by enumerating intervals between point coordinates.

    A closed interval between two distinct coordinates holds every point at
    those coordinates, so red-minus-blue of an interval is a difference of
    prefix sums taken at coordinate-group boundaries.
    """
    _budget(budget).items("color", len(points))
    pre = _color_groups(list(points))
    i, j = np.triu_indices(len(pre), k=1)
    d_c = int(np.abs(pre[j] - pre[i]).max())
    d_star = int(np.abs(pre[1:]).max())
    return d_c, d_star


# ---------------------------------------------------------------------------
# planar convex bodies


def bounding_constraints() -> tuple[np.ndarray, np.ndarray]:
    ang = (2.0 * np.arange(BOUNDING_SIDES) + 1.0) * math.pi / BOUNDING_SIDES
    return np.column_stack([np.cos(ang), np.sin(ang)]), np.ones(BOUNDING_SIDES)


def _system(halfplanes) -> tuple[np.ndarray, np.ndarray]:
    hs = list(halfplanes)
    if hs and not isinstance(hs[0], Halfplane):
        normals = np.asarray([h[:2] for h in hs], dtype=np.float64)
        offsets = np.asarray([h[2] for h in hs], dtype=np.float64)
    else:
        normals, offsets = halfplanes_to_arrays(hs)
    bn, bc = bounding_constraints()
    return np.vstack([normals, bn]), np.concatenate([offsets, bc])


def lp_exact(halfplanes, objective, budget: OracleBudget | None = None) -> tuple[float, np.ndarray]:
    """Maximise ``<objective, p>`` over the halfplanes intersected with B."""
    hs = list(halfplanes)
    _budget(budget).items("lp", len(hs))
    a, b = _system(hs)
    c = np.asarray(objective, dtype=np.float64)
    res = linprog(-c, A_ub=a, b_ub=b, bounds=[(None, None)] * 2, method="highs")
    if res.status == 2:
        raise Infeasible("halfplane system is infeasible")
    if res.status != 0:
        raise RuntimeError(f"linprog failed: {res.message}")
    return float(-res.fun), np.asarray(res.x)


def _chebyshev_center(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    norms = np.hypot(a[:, 0], a[:, 1])
    res = linprog(
        [0.0, 0.0, -1.0],
        A_ub=np.column_stack([a, norms]),
        b_ub=b,
        bounds=[(None, None), (None, None), (None, None)],
        method="highs",
    )
    if res.status == 2:
        raise Infeasible("halfplane system is infeasible")
    if res.status != 0:
        raise RuntimeError(f"linprog failed: {res.message}")
    return res.x[:2], float(res.x[2])


def exact_body(halfplanes, budget: OracleBudget | None = None) -> np.ndarray:
    """Counter-clockwise vertices of the intersection with B.

    Returns an empty ``(0, 2)`` array when the system is infeasible.  Bodies
    with empty interior are refused.
    """
    hs = list(halfplanes)
    _budget(budget).items("lp", len(hs))
    a, b = _system(hs)
    try:
        center, radius = _chebyshev_center(a, b)
    except Infeasible:
        return np.empty((0, 2))
    if radius < 0:
        return np.empty((0, 2))
    if radius < 1e-10:
        raise DataError("body has empty interior; the exact oracle needs an interior point")
    hsi = HalfspaceIntersection(np.column_stack([a, -b]), center)
    pts = hsi.intersections
    hull = ConvexHull(pts)
    return pts[hull.vertices]


def point_distance(vertices: np.ndarray, q) -> float:
    """Euclidean distance from ``q`` to the polygon (0 inside)."""
    return float(shapely.Polygon(vertices).distance(shapely.Point(q)))


def point_depth(vertices: np.ndarray, q) -> float:
    """Distance from ``q`` to the polygon's boundary."""
    return float(shapely.Polygon(vertices).exterior.distance(shapely.Point(q)))
