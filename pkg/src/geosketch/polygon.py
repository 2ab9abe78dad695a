"""Planar convex polygons: clipping, support values, distances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import EmptyInput
from .geometry import Halfplane, halfplanes_to_arrays

TOL = kernels.GEOM_TOL
BOUNDING_SIDES = 64


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Counter-clockwise vertex list; zero vertices means empty.

    One or two vertices describe a degenerate polygon (point or segment).
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 2)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def __len__(self) -> int:
        return len(self.vertices)

    def area(self) -> float:
        if len(self.vertices) < 3:
            return 0.0
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def edge_halfplanes(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit outward normals and offsets of the edges (needs >= 3 vertices)."""
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        normals = np.column_stack([e[:, 1], -e[:, 0]])
        normals /= np.hypot(normals[:, 0], normals[:, 1])[:, None]
        return normals, np.einsum("ij,ij->i", normals, v)

    def support(self, directions: np.ndarray) -> np.ndarray:
        """``max_v <u, v>`` for each row ``u`` of ``directions``."""
        if self.is_empty:
            raise EmptyInput("support of an empty polygon")
        return (np.atleast_2d(directions) @ self.vertices.T).max(axis=1)

    def contains(self, p, tol: float = TOL) -> bool:
        return bool(contains_points(self, np.atleast_2d(p), tol)[0])

    def distance(self, p) -> float:
        """Euclidean distance from ``p`` to the polygon (0 inside)."""
        return float(distance_to_polygon(self, np.atleast_2d(p))[0])

    def boundary_distance(self, p) -> float:
        """Distance from ``p`` to the polygon's boundary."""
        if self.is_empty:
            raise EmptyInput("empty polygon has no boundary")
        p = np.asarray(p, dtype=np.float64)
        # degenerate polygons are all boundary
        if len(self.vertices) < 3 or not self.contains(p, tol=0.0):
            return float(kernels._dist_to_polygon_np(p[None], self.vertices)[0])
        normals, offsets = self.edge_halfplanes()
        return float((offsets - normals @ p).min())


def bounding_body() -> ConvexPolygon:
    """Regular 64-gon circumscribing the unit disk, with a vertex on the +x axis."""
    k = np.arange(BOUNDING_SIDES)
    r = 1.0 / math.cos(math.pi / BOUNDING_SIDES)
    ang = 2.0 * math.pi * k / BOUNDING_SIDES
    return ConvexPolygon(np.column_stack([r * np.cos(ang), r * np.sin(ang)]))


def bounding_halfplanes() -> list[Halfplane]:
    ang = (2.0 * np.arange(BOUNDING_SIDES) + 1.0) * math.pi / BOUNDING_SIDES
    return [Halfplane(math.cos(a), math.sin(a), 1.0) for a in ang]


_B = bounding_body()


def clip(poly: ConvexPolygon, normals: np.ndarray, offsets: np.ndarray) -> ConvexPolygon:
    if poly.is_empty or len(offsets) == 0:
        return poly
    out = kernels.clip_many(
        np.ascontiguousarray(poly.vertices),
        np.ascontiguousarray(normals, dtype=np.float64),
        np.ascontiguousarray(offsets, dtype=np.float64),
        TOL,
    )
    return ConvexPolygon(out)


def halfplane_intersection(constraints: Iterable[Halfplane]) -> ConvexPolygon:
    """Exact intersection of ``constraints`` with the bounding 64-gon."""
    normals, offsets = halfplanes_to_arrays(list(constraints))
    return clip(_B, normals, offsets)


def intersect(a: ConvexPolygon, b: ConvexPolygon) -> ConvexPolygon:
    """Intersection of two convex polygons."""
    if a.is_empty or b.is_empty:
        return ConvexPolygon(np.empty((0, 2)))
    if len(b) < len(a):
        a, b = b, a
    if len(b) >= 3:
        return clip(a, *b.edge_halfplanes())
    if len(a) >= 3:
        return clip(b, *a.edge_halfplanes())
    # both degenerate: keep the points of one lying in the other
    keep = [p for p in a.vertices if b.distance(p) <= TOL]
    return ConvexPolygon(np.array(keep).reshape(-1, 2))


def contains_points(poly: ConvexPolygon, pts: np.ndarray, tol: float = TOL) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    if poly.is_empty:
        return np.zeros(len(pts), dtype=bool)
    if len(poly) < 3:
        return kernels._dist_to_polygon_np(pts, poly.vertices) <= tol
    normals, offsets = poly.edge_halfplanes()
    return np.all(pts @ normals.T <= offsets + tol, axis=1)


def distance_to_polygon(poly: ConvexPolygon, pts: np.ndarray) -> np.ndarray:
    if poly.is_empty:
        raise EmptyInput("distance to an empty polygon")
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    d = kernels._dist_to_polygon_np(pts, poly.vertices)
    if len(poly) >= 3:
        d[contains_points(poly, pts, tol=0.0)] = 0.0
    return d


def hausdorff_distance(p: ConvexPolygon, q: ConvexPolygon, ndirs: int = 4096) -> float:
    """Hausdorff distance between two convex polygons.

    Takes the largest support-function gap over ``ndirs`` evenly spaced
    directions and raises it to the exact vertex-to-set distances; for convex
    polygons the farthest point of one from the other is always a vertex, so
    the result is exact up to rounding.
    """
    if p.is_empty or q.is_empty:
        raise EmptyInput("Hausdorff distance needs two non-empty polygons")
    ang = 2.0 * np.pi * np.arange(ndirs) / ndirs
    u = np.column_stack([np.cos(ang), np.sin(ang)])
    sampled = float(np.abs(q.support(u) - p.support(u)).max())
    exact = max(
        float(distance_to_polygon(p, q.vertices).max()),
        float(distance_to_polygon(q, p.vertices).max()),
    )
    return max(sampled, exact)


def argmax(poly: ConvexPolygon, direction: Sequence[float]) -> tuple[np.ndarray, float]:
    if poly.is_empty:
        raise EmptyInput("argmax over an empty polygon")
    vals = poly.vertices @ np.asarray(direction, dtype=np.float64)
    i = int(np.argmax(vals))
    return poly.vertices[i].copy(), float(vals[i])


def erode(poly: ConvexPolygon, amount: float) -> ConvexPolygon:
    """Shift every edge inward by ``amount`` (Minkowski erosion by a disk)."""
    if len(poly) < 3:
        return ConvexPolygon(np.empty((0, 2)))
    normals, offsets = poly.edge_halfplanes()
    return clip(poly, normals, offsets - amount)
