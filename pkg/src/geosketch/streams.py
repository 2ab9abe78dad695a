"""Stream sources, the text stream format, and the multipass driver."""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Protocol, Sequence

from .errors import DataError, ParseError, PassBudgetExceeded, RangeError
from .geometry import Color, Halfplane, HyperRect, LabeledPoint

DEFAULT_MAX_PASSES = 40


class StreamKind(enum.Enum):
    INTERVALS = "intervals"
    RECTS = "rects"
    POINTS = "points"
    LABELED_POINTS = "labeled-points"
    HALFPLANES = "halfplanes"


class StreamSource:
    """A finite item sequence that can be read once per pass.

    Lists, tuples and file paths are replayable; a bare iterator can be read
    exactly once.
    """

    def __init__(self, origin, kind: StreamKind | None = None, d: int | None = None):
        self.kind = kind
        self.d = d
        if isinstance(origin, (str, os.PathLike)):
            if kind is None:
                raise ValueError("file sources need a stream kind")
            self._path = os.fspath(origin)
            self._items = None
            self._iter = None
        elif isinstance(origin, (list, tuple)):
            self._path = None
            self._items = tuple(origin)
            self._iter = None
        else:
            self._path = None
            self._items = None
            self._iter = iter(origin)
        self.passes = 0

    @property
    def replayable(self) -> bool:
        return self._iter is None

    @property
    def origin(self):
        return self._path if self._path is not None else self._items

    def __iter__(self) -> Iterator[Any]:
        if self._iter is not None:
            if self.passes:
                raise RuntimeError("one-shot stream already consumed")
            self.passes += 1
            return self._iter
        self.passes += 1
        if self._items is not None:
            return iter(self._items)
        return _read_items(self._path, self.kind, self.d)


def _fields(path: str) -> Iterator[tuple[int, list[str]]]:
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def _floats(lineno: int, parts: Sequence[str]) -> list[float]:
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ParseError(lineno, f"not a number in {' '.join(parts)!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise ParseError(lineno, "non-finite coordinate")
    return vals


def _parse_line(lineno: int, parts: list[str], kind: StreamKind, d: int | None):
    if kind is StreamKind.INTERVALS:
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 2 fields, got {len(parts)}")
        lo, hi = _floats(lineno, parts)
        if lo > hi:
            raise ParseError(lineno, "lo > hi")
        return HyperRect.interval(lo, hi)
    if kind is StreamKind.RECTS:
        if len(parts) % 2 or not parts:
            raise ParseError(lineno, "rectangle needs an even number of fields")
        if d is not None and len(parts) != 2 * d:
            raise ParseError(lineno, f"expected {2 * d} fields for d={d}, got {len(parts)}")
        vals = _floats(lineno, parts)
        lo, hi = vals[0::2], vals[1::2]
        if any(a > b for a, b in zip(lo, hi)):
            raise ParseError(lineno, "lo > hi")
        return HyperRect(tuple(lo), tuple(hi))
    if kind is StreamKind.POINTS:
        if len(parts) != 1:
            raise ParseError(lineno, f"expected 1 field, got {len(parts)}")
        (x,) = _floats(lineno, parts)
        if not 0.0 <= x <= 1.0:
            raise RangeError(f"line {lineno}: point {x} outside [0, 1]")
        return x
    if kind is StreamKind.LABELED_POINTS:
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 2 fields, got {len(parts)}")
        (x,) = _floats(lineno, parts[:1])
        if parts[1] not in ("R", "B"):
            raise ParseError(lineno, f"color must be R or B, got {parts[1]!r}")
        if not 0.0 <= x <= 1.0:
            raise RangeError(f"line {lineno}: point {x} outside [0, 1]")
        return LabeledPoint(x, Color(parts[1]))
    if kind is StreamKind.HALFPLANES:
        if len(parts) != 3:
            raise ParseError(lineno, f"expected 3 fields, got {len(parts)}")
        a, b, c = _floats(lineno, parts)
        try:
            return Halfplane.from_coefficients(a, b, c)
        except DataError as exc:
            raise ParseError(lineno, str(exc)) from None
    raise ValueError(f"unknown stream kind {kind}")


def _read_items(path: str, kind: StreamKind, d: int | None) -> Iterator[Any]:
    for lineno, parts in _fields(path):
        yield _parse_line(lineno, parts, kind, d)


def parse_stream(path, kind: StreamKind | str, d: int | None = None) -> StreamSource:
    """Replayable source over a stream file.

    The whole file is validated up front so format errors surface before any
    sketch sees an item; later passes re-read the file lazily.
    """
    kind = StreamKind(kind) if isinstance(kind, str) else kind
    for _ in _read_items(os.fspath(path), kind, d):
        pass
    return StreamSource(path, kind, d)


def format_item(item) -> str:
    """Inverse of the line grammar."""
    if isinstance(item, HyperRect):
        return " ".join(f"{a!r} {b!r}" for a, b in zip(item.lo, item.hi))
    if isinstance(item, LabeledPoint):
        return f"{item.x!r} {item.color.value}"
    if isinstance(item, Halfplane):
        return f"{item.nx!r} {item.ny!r} {item.c!r}"
    return repr(float(item))


def write_stream(path, items: Iterable[Any], header: str | None = None) -> int:
    n = 0
    with open(path, "w", encoding="ascii") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for item in items:
            fh.write(format_item(item) + "\n")
            n += 1
    return n


class OnePassSolver(Protocol):
    def update(self, item: Any) -> None: ...

    def estimate(self) -> float: ...


@dataclass
class AdditiveSolverFactory:
    """Builds one-pass solvers with a given additive tolerance."""

    build: Callable[[float], OnePassSolver]
    name: str = "solver"

    def __call__(self, eps: float) -> OnePassSolver:
        return self.build(eps)


@dataclass
class MultipassResult:
    estimate: float
    passes: int
    history: list[tuple[float, float]]

    def __float__(self) -> float:
        return self.estimate


def pass_bound(opt: float, eps: float) -> int:
    """Worst-case number of passes for optimum ``opt``."""
    return max(1, math.ceil(math.log2((1.0 + 2.0 * eps) / opt)))


def multipass_multiplicative(
    factory: AdditiveSolverFactory | Callable[[float], OnePassSolver],
    source: StreamSource,
    eps: float,
    max_passes: int = DEFAULT_MAX_PASSES,
) -> MultipassResult:
    """Turn an additive one-pass solver into a multiplicative one.

    Pass ``k`` runs a fresh solver at tolerance ``eps / 2**k`` and stops as
    soon as its answer clears ``2**-k + eps / 2**k``; at that point the
    answer is also at least half the true optimum, so the additive error is
    within ``eps`` times the optimum.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if max_passes < 1:
        raise ValueError("max_passes must be positive")
    if not isinstance(source, StreamSource):
        source = StreamSource(source)
    if not source.replayable:
        raise ValueError("multipass needs a replayable source")
    history = []
    for k in range(1, max_passes + 1):
        eps_k = eps / 2.0**k
        solver = factory(eps_k)
        for item in source:
            solver.update(item)
        o_k = float(solver.estimate())
        history.append((eps_k, o_k))
        if o_k >= 2.0**-k + eps_k:
            return MultipassResult(o_k, k, history)
    raise PassBudgetExceeded(max_passes)
