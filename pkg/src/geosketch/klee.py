"""One-pass estimators for the volume of a union of boxes in [0,1]^d."""

from __future__ import annotations

import itertools
import math
from typing import Iterable

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    FatnessViolation,
    NonIntegerCorner,
    RangeError,
    UniverseTooLarge,
)
from .geometry import HyperRect, rects_to_arrays

FAT_TOL = 1e-12
GRID_CELL_LIMIT = 2**24
F0_CONSTANT = 4.0

__all__ = [
    "FatKleeSketch",
    "GridF0Sketch",
    "SamplerSketch",
    "klee_fat_estimate",
    "klee_grid_f0_estimate",
    "klee_sample_estimate",
    "sample_size",
]


def _check_rect(rect: HyperRect, d: int) -> None:
    if rect.d != d:
        raise DimensionMismatch(f"expected a {d}-dimensional box, got d={rect.d}")
    if min(rect.lo) < 0.0 or max(rect.hi) > 1.0:
        raise RangeError(f"box {rect.lo}..{rect.hi} leaves the unit cube")


def sample_size(eps: float, rho: float) -> int:
    return math.ceil((2.0 + eps) / eps**2 * math.log(2.0 / rho))


class SamplerSketch:
    """Fixed random sample of the unit cube with a hit flag per point.

    The estimate is the fraction of sample points covered by some box.

    Updates are buffered and flushed in batches through the hit kernel;
    the flag state after a flush is the same as after item-by-item updates.
    """

    batch = 512

    def __init__(self, d: int, eps: float, rho: float, seed: int = 0):
        if d < 1:
            raise ValueError("d must be >= 1")
        if not 0.0 < eps < 1.0 or not 0.0 < rho < 1.0:
            raise ValueError("eps and rho must lie in (0, 1)")
        self.d, self.eps, self.rho, self.seed = d, eps, rho, seed
        self.m = sample_size(eps, rho)
        pts = np.random.default_rng(seed).random((self.m, d))
        # sorted along the first axis for the hit kernel; the sample set is unchanged
        self.points = np.ascontiguousarray(pts[np.argsort(pts[:, 0], kind="stable")])
        self.flags = np.zeros(self.m, dtype=np.bool_)
        self.n = 0
        self._lo: list[tuple[float, ...]] = []
        self._hi: list[tuple[float, ...]] = []

    def update(self, rect: HyperRect) -> None:
        _check_rect(rect, self.d)
        self._lo.append(rect.lo)
        self._hi.append(rect.hi)
        self.n += 1
        if len(self._lo) >= self.batch:
            self._flush()

    def update_arrays(self, lo: np.ndarray, hi: np.ndarray) -> None:
        """Feed a block of boxes given as ``(k, d)`` corner arrays."""
        lo = np.ascontiguousarray(lo, dtype=np.float64).reshape(-1, self.d)
        hi = np.ascontiguousarray(hi, dtype=np.float64).reshape(-1, self.d)
        if lo.size and (lo.min() < 0.0 or hi.max() > 1.0 or (lo > hi).any()):
            raise RangeError("boxes must satisfy 0 <= lo <= hi <= 1")
        self._flush()
        kernels.mark_hits(self.points, self.flags, lo, hi)
        self.n += len(lo)

    def _flush(self) -> None:
        if self._lo:
            lo = np.array(self._lo, dtype=np.float64)
            hi = np.array(self._hi, dtype=np.float64)
            self._lo.clear()
            self._hi.clear()
            kernels.mark_hits(self.points, self.flags, lo, hi)

    def estimate(self) -> float:
        self._flush()
        return float(np.count_nonzero(self.flags)) / self.m

    def space(self) -> dict[str, int]:
        return {"sample_points": self.m}


def klee_sample_estimate(stream: Iterable[HyperRect], d: int, eps: float, rho: float, seed: int = 0) -> float:
    sk = SamplerSketch(d, eps, rho, seed)
    if isinstance(stream, (list, tuple)):
        if any(r.d != d for r in stream):
            raise DimensionMismatch(f"expected {d}-dimensional boxes")
        if stream:
            sk.update_arrays(*rects_to_arrays(stream))
    else:
        for r in stream:
            sk.update(r)
    return sk.estimate()


class FatKleeSketch:
    """Deterministic under-estimator for unions of delta-fat boxes.

    The cube is cut into ``ceil(1/delta)`` cells per axis.  Inside a cell every
    clipped piece contains a cell corner, so the union is an anchored one:
    axes ``1..d-1`` are cut into ``S`` strips each and only strips fully
    spanned by a piece are credited; along axis 0 each strip cell keeps the
    farthest reach from the left face and from the right face, and credits
    ``min(left + right, 1)``.
    """

    def __init__(self, d: int, eps: float, delta: float):
        if d < 1:
            raise ValueError("d must be >= 1")
        if not 0.0 < eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        if not 0.0 < delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        self.d, self.eps, self.delta = d, eps, delta
        self.m = math.ceil(1.0 / delta - 1e-9)
        edges = np.minimum(np.arange(self.m + 1) * delta, 1.0)
        edges[-1] = 1.0
        self.edges = edges
        self.widths = np.diff(edges)
        self.strips = math.ceil(2.0 ** (d + 1) / eps)
        shape = (self.m,) * d + (self.strips,) * (d - 1) + (2,)
        self.state = np.zeros(shape, dtype=np.float64)
        self.n = 0

    def _cells(self, lo: float, hi: float) -> range:
        # cells with positive overlap; zero-width contacts carry no volume
        first = int(np.searchsorted(self.edges, lo, side="right")) - 1
        last = int(np.searchsorted(self.edges, hi, side="left")) - 1
        return range(max(first, 0), min(last, self.m - 1) + 1)

    def update(self, rect: HyperRect) -> None:
        _check_rect(rect, self.d)
        for side in rect.sides:
            if side.length < self.delta - FAT_TOL:
                raise FatnessViolation(f"side {side.length} shorter than delta={self.delta}")
        self.n += 1
        for cell in itertools.product(*(self._cells(a, b) for a, b in zip(rect.lo, rect.hi))):
            self._feed(cell, rect)

    def _local(self, cell, rect) -> tuple[list[float], list[float]]:
        ls, hs = [], []
        for axis, k in enumerate(cell):
            e0, w = self.edges[k], self.widths[k]
            snap = FAT_TOL / w
            l = max(rect.lo[axis] - e0, 0.0) / w
            h = 1.0 if rect.hi[axis] >= self.edges[k + 1] else (rect.hi[axis] - e0) / w
            if l <= snap:
                l = 0.0
            if h >= 1.0 - snap:
                h = 1.0
            if l > 0.0 and h < 1.0:
                raise AssertionError(f"clipped piece in cell {cell} touches no corner")
            ls.append(l)
            hs.append(min(h, 1.0))
        return ls, hs

    def _feed(self, cell, rect) -> None:
        ls, hs = self._local(cell, rect)
        s = self.strips
        index = list(cell)
        for axis in range(1, self.d):
            l, h = ls[axis], hs[axis]
            if l == 0.0:
                # anchored at the low face: strips entirely below h
                p = math.floor(h * s)
                if p / s > h:
                    p -= 1
                index.append(slice(0, p))
            else:
                start = math.ceil(l * s)
                if start / s < l:
                    start += 1
                index.append(slice(start, s))
        if ls[0] == 0.0:
            index.append(0)
            reach = hs[0]
        else:
            index.append(1)
            reach = 1.0 - ls[0]
        view = self.state[tuple(index)]
        if np.ndim(view):
            np.maximum(view, reach, out=view)
        elif reach > view:
            self.state[tuple(index)] = reach

    def cell_estimates(self) -> np.ndarray:
        covered = np.minimum(self.state[..., 0] + self.state[..., 1], 1.0)
        strip_axes = tuple(range(self.d, 2 * self.d - 1))
        if strip_axes:
            return covered.sum(axis=strip_axes) / float(self.strips) ** (self.d - 1)
        return covered

    def estimate(self) -> float:
        vol = self.widths
        for _ in range(self.d - 1):
            vol = np.multiply.outer(vol, self.widths)
        return float((vol * self.cell_estimates()).sum())

    def space(self) -> dict[str, int]:
        return {"cells": self.m**self.d, "state_scalars": int(self.state.size)}


def klee_fat_estimate(stream: Iterable[HyperRect], d: int, eps: float, delta: float) -> float:
    sk = FatKleeSketch(d, eps, delta)
    for r in stream:
        sk.update(r)
    return sk.estimate()


def _seed_salt(seed: int) -> np.uint64:
    return np.uint64(kernels._splitmix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF)))


class GridF0Sketch:
    """Distinct count of covered unit cells via the k smallest hash values.

    Each box with integer corners in ``[0, N]^d`` is expanded into its unit
    cells; the hash is a bijection on 64-bit words, so distinct cells never
    collide and the count is exact while fewer than ``k`` values are held.
    """

    def __init__(self, N: int, d: int, eps: float, seed: int = 0):
        if N < 1 or d < 1:
            raise ValueError("N and d must be positive")
        if not 0.0 < eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        if N**d > GRID_CELL_LIMIT:
            raise UniverseTooLarge(f"N^d = {N**d} exceeds {GRID_CELL_LIMIT}")
        self.N, self.d, self.eps, self.seed = N, d, eps, seed
        self.k = math.ceil(F0_CONSTANT / eps**2)
        self.salt = _seed_salt(seed)
        self.registers = np.zeros(0, dtype=np.uint64)
        self.n = 0

    def _corners(self, rect: HyperRect) -> tuple[np.ndarray, np.ndarray]:
        if rect.d != self.d:
            raise DimensionMismatch(f"expected a {self.d}-dimensional box, got d={rect.d}")
        for v in rect.lo + rect.hi:
            if not float(v).is_integer():
                raise NonIntegerCorner(f"corner coordinate {v} is not an integer")
            if not 0 <= v <= self.N:
                raise RangeError(f"corner coordinate {v} outside [0, {self.N}]")
        return np.array(rect.lo, dtype=np.int64), np.array(rect.hi, dtype=np.int64)

    def update(self, rect: HyperRect) -> None:
        lo, hi = self._corners(rect)
        self.n += 1
        if np.any(hi <= lo):
            return
        hashes = kernels.cell_hashes(lo, hi, self.N, self.salt)
        if len(self.registers) >= self.k:
            hashes = hashes[hashes < self.registers[-1]]
        if hashes.size:
            self.registers = np.union1d(self.registers, hashes)[: self.k]

    def estimate(self) -> float:
        if len(self.registers) < self.k:
            return float(len(self.registers))
        kth = float(self.registers[self.k - 1]) / 2.0**64
        return (self.k - 1) / kth

    def space(self) -> dict[str, int]:
        return {"registers": int(len(self.registers)), "k": self.k}


def klee_grid_f0_estimate(stream: Iterable[HyperRect], N: int, d: int, eps: float, seed: int = 0) -> float:
    sk = GridF0Sketch(N, d, eps, seed)
    for r in stream:
        sk.update(r)
    return sk.estimate()
