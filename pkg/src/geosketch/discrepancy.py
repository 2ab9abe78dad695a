"""One-pass discrepancy estimators on [0, 1]."""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from . import kernels
from .errors import DataError, EmptyInput, EmptyStream, NotSorted, RangeError, UnsortedInput
from .geometry import Color, LabeledPoint

__all__ = [
    "BucketSketch",
    "ColorPrefixSketch",
    "color_disc_sorted",
    "geo_disc_estimate",
    "star_geo_disc_exact",
]


class BucketSketch:
    """Point counts in ``ceil(1/eps)`` buckets of width ``eps``.

    Bucket ``i`` is ``[i eps, (i+1) eps)``; the last one is closed on the right
    and absorbs ``x = 1``.  Two sketches with the same ``eps`` merge by adding
    counters.
    """

    def __init__(self, eps: float):
        if not 0.0 < eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        self.eps = eps
        self.m = math.ceil(1.0 / eps - 1e-9)
        self.counts = np.zeros(self.m, dtype=np.int64)
        self.n = 0

    def bucket(self, x: float) -> int:
        return min(int(x // self.eps), self.m - 1)

    def update(self, x) -> None:
        x = float(x.x if isinstance(x, LabeledPoint) else x)
        if not 0.0 <= x <= 1.0:
            raise RangeError(f"point {x} outside [0, 1]")
        self.counts[self.bucket(x)] += 1
        self.n += 1

    def merge(self, other: "BucketSketch") -> "BucketSketch":
        if other.eps != self.eps:
            raise ValueError("cannot merge sketches with different eps")
        out = BucketSketch(self.eps)
        out.counts = self.counts + other.counts
        out.n = self.n + other.n
        return out

    def estimate(self) -> float:
        """Largest deviation any interval could have given the counts.

        For buckets ``i <= j`` an interval running from inside bucket ``i``
        to inside bucket ``j`` holds between ``C[j-1] - C[i]`` and
        ``C[j] - C[i-1]`` points, and its length is within ``eps`` of the
        distance between the bucket centres; both count extremes are scored.
        """
        if self.n == 0:
            raise EmptyStream("no points seen")
        return float(kernels.bucket_discrepancy(self.counts, self.eps, self.n))

    def space(self) -> dict[str, int]:
        return {"buckets": self.m, "counters": self.m + 1}


def geo_disc_estimate(stream: Iterable[float], eps: float) -> float:
    sk = BucketSketch(eps)
    for x in stream:
        sk.update(x)
    return sk.estimate()


class ColorPrefixSketch:
    """Running red-minus-blue count over a sorted stream.

    Only prefixes that end after a complete group of equal coordinates are
    scored, since no interval can split such a group.  The virtual empty
    prefix 0 is scored from the start.
    """

    def __init__(self, require_sorted: bool = True):
        self.require_sorted = require_sorted
        self.prefix = 0
        self.max_prefix = 0
        self.min_prefix = 0
        self.n = 0
        self._last = None

    def update(self, p: LabeledPoint) -> None:
        if p.color is Color.NONE:
            raise DataError("color discrepancy needs red or blue labels")
        if self._last is not None and p.x != self._last:
            if self.require_sorted and p.x < self._last:
                raise UnsortedInput(self.n)
            self._commit()
        self.prefix += p.sign
        self._last = p.x
        self.n += 1

    def _commit(self) -> None:
        if self.prefix > self.max_prefix:
            self.max_prefix = self.prefix
        elif self.prefix < self.min_prefix:
            self.min_prefix = self.prefix

    def estimate(self) -> int:
        self._commit()
        return self.max_prefix - self.min_prefix

    def space(self) -> dict[str, int]:
        return {"integers": 3}


def color_disc_sorted(stream: Iterable[LabeledPoint], require_sorted: bool = True) -> int:
    sk = ColorPrefixSketch(require_sorted)
    for p in stream:
        sk.update(p)
    if sk.n == 0:
        raise EmptyStream("no points seen")
    return sk.estimate()


def star_geo_disc_exact(points) -> float:
    """``max_i |x_i - (2i-1)/(2n)|`` over sorted coordinates.

    This is the closed form for anchored discrepancy up to the constant
    ``1/(2n)``; the exact supremum is this value plus ``1/(2n)``.
    """
    x = np.asarray([p.x if isinstance(p, LabeledPoint) else p for p in points], dtype=np.float64)
    if x.size == 0:
        raise EmptyInput("no points")
    if np.any(np.diff(x) < 0):
        raise NotSorted("coordinates must be sorted ascending")
    if x[0] < 0.0 or x[-1] > 1.0:
        raise RangeError("coordinates must lie in [0, 1]")
    n = x.size
    return float(np.abs(x - (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)).max())
