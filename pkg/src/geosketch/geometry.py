"""Stream item types shared by the sketches, oracles and generators."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DataError(f"interval lo > hi: [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class HyperRect:
    """Closed axis-parallel box ``prod [lo[k], hi[k]]``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or not self.lo:
            raise DataError("lo and hi must be non-empty and of equal length")
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        for a, b in zip(self.lo, self.hi):
            if not a <= b:
                raise DataError(f"side with lo > hi: [{a}, {b}]")

    @classmethod
    def from_sides(cls, sides: Sequence[tuple[float, float] | Interval]) -> "HyperRect":
        lo, hi = [], []
        for s in sides:
            if isinstance(s, Interval):
                lo.append(s.lo)
                hi.append(s.hi)
            else:
                lo.append(s[0])
                hi.append(s[1])
        return cls(tuple(lo), tuple(hi))

    @classmethod
    def interval(cls, lo: float, hi: float) -> "HyperRect":
        return cls((lo,), (hi,))

    @property
    def d(self) -> int:
        return len(self.lo)

    @property
    def sides(self) -> tuple[Interval, ...]:
        return tuple(Interval(a, b) for a, b in zip(self.lo, self.hi))

    @property
    def volume(self) -> float:
        return math.prod(b - a for a, b in zip(self.lo, self.hi))


def rects_to_arrays(rects: Sequence[HyperRect]) -> tuple[np.ndarray, np.ndarray]:
    """Stack boxes into ``(n, d)`` lower/upper corner arrays."""
    if not rects:
        return np.zeros((0, 0)), np.zeros((0, 0))
    lo = np.array([r.lo for r in rects], dtype=np.float64)
    hi = np.array([r.hi for r in rects], dtype=np.float64)
    return lo, hi


@dataclass(frozen=True)
class Halfplane:
    """The closed halfplane ``{p : nx*px + ny*py <= c}`` with a unit normal."""

    nx: float
    ny: float
    c: float

    def __post_init__(self):
        norm = math.hypot(self.nx, self.ny)
        if abs(norm - 1.0) > UNIT_TOL:
            raise DataError(f"halfplane normal is not unit length (|n| = {norm})")

    @classmethod
    def from_coefficients(cls, a: float, b: float, c: float) -> "Halfplane":
        """Normalise ``a*x + b*y <= c`` to unit normal form."""
        norm = math.hypot(a, b)
        if norm == 0.0:
            raise DataError("halfplane with zero normal")
        return cls(a / norm, b / norm, c / norm)

    @property
    def normal(self) -> tuple[float, float]:
        return (self.nx, self.ny)

    def contains(self, p, tol: float = 0.0) -> bool:
        return self.nx * p[0] + self.ny * p[1] <= self.c + tol


def halfplanes_to_arrays(hs: Sequence[Halfplane]) -> tuple[np.ndarray, np.ndarray]:
    if not hs:
        return np.zeros((0, 2)), np.zeros(0)
    normals = np.array([(h.nx, h.ny) for h in hs], dtype=np.float64)
    offsets = np.array([h.c for h in hs], dtype=np.float64)
    return normals, offsets


class Color(enum.Enum):
    RED = "R"
    BLUE = "B"
    NONE = "-"


@dataclass(frozen=True)
class LabeledPoint:
    x: float
    color: Color = Color.NONE

    def __post_init__(self):
        if not 0.0 <= self.x <= 1.0:
            raise DataError(f"point {self.x} outside [0, 1]")

    @property
    def sign(self) -> int:
        """+1 for red, -1 for blue, 0 for uncoloured."""
        if self.color is Color.RED:
            return 1
        if self.color is Color.BLUE:
            return -1
        return 0
