"""Command-line driver: one sketch, one pass, one JSON report."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import oracles
from .convex import ConvexStreamSketch, lp_maximize, membership_test
from .discrepancy import BucketSketch, ColorPrefixSketch
from .errors import BudgetExceeded, DataError, GeoSketchError
from .gadgets import GADGETS, generate
from .klee import FatKleeSketch, GridF0Sketch, SamplerSketch
from .polygon import ConvexPolygon, hausdorff_distance
from .streams import AdditiveSolverFactory, StreamKind, multipass_multiplicative, parse_stream, write_stream

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BUDGET = 0, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    params: dict[str, Any]
    estimate: Any = None
    oracle_value: Any = None
    abs_error: float | None = None
    items_processed: int = 0
    space_counters: dict[str, int] = field(default_factory=dict)
    elapsed_ms: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "command": self.command,
            "params": self.params,
            "estimate": self.estimate,
        }
        if self.oracle_value is not None:
            out["oracle_value"] = self.oracle_value
            out["abs_error"] = self.abs_error
        out["items_processed"] = self.items_processed
        out["space_counters"] = self.space_counters
        if self.details:
            out["details"] = self.details
        out["elapsed_ms"] = self.elapsed_ms
        return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _unit_open(name):
    def conv(text):
        v = float(text)
        if not 0.0 < v < 1.0:
            raise argparse.ArgumentTypeError(f"{name} must lie in (0, 1), got {text}")
        return v

    return conv


def _delta(text):
    v = float(text)
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError(f"delta must lie in (0, 1], got {text}")
    return v


def _u64(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


SOLVERS = ("klee-rand", "klee-fat", "disc-geo")
PROBLEMS = ("klee", "disc-geo", "disc-color", "lp", "convex")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="geosketch", description="Streaming geometry sketches with exact oracles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, eps=0.05, needs_in=True):
        sp.add_argument("--in", dest="path", required=needs_in, help="stream file")
        sp.add_argument("--epsilon", type=_unit_open("epsilon"), default=eps)
        sp.add_argument("--oracle", action="store_true", help="also run the exact oracle")
        sp.add_argument("--pretty", action="store_true", help="indent the JSON report")

    sp = sub.add_parser("klee-rand", help="sampling estimate of a union volume")
    common(sp)
    sp.add_argument("--rho", type=_unit_open("rho"), default=0.05)
    sp.add_argument("--d", type=_positive, default=1)
    sp.add_argument("--seed", type=_u64, default=0)

    sp = sub.add_parser("klee-fat", help="deterministic estimate for delta-fat boxes")
    common(sp, eps=0.1)
    sp.add_argument("--delta", type=_delta, required=True)
    sp.add_argument("--d", type=_positive, default=1)

    sp = sub.add_parser("klee-grid-f0", help="distinct-count estimate over an integer grid")
    common(sp, eps=0.1)
    sp.add_argument("--grid", type=_positive, required=True, help="per-axis grid size N")
    sp.add_argument("--d", type=_positive, default=2)
    sp.add_argument("--seed", type=_u64, default=0)

    sp = sub.add_parser("convex-approx", help="outer approximation of a halfplane intersection")
    common(sp)

    sp = sub.add_parser("lp", help="linear objective over the sketched body")
    common(sp)
    sp.add_argument("--objective", type=float, nargs=2, metavar=("X", "Y"), required=True)
    sp.add_argument("--feasible", action="store_true")

    sp = sub.add_parser("membership", help="point membership against the sketched body")
    common(sp)
    sp.add_argument("--query", type=float, nargs=2, metavar=("X", "Y"), required=True)

    sp = sub.add_parser("disc-geo", help="bucketed interval discrepancy")
    common(sp)

    sp = sub.add_parser("disc-color-sorted", help="color discrepancy of a sorted stream")
    common(sp)

    sp = sub.add_parser("multipass", help="relative-error estimate by repeated passes")
    common(sp, eps=0.1)
    sp.add_argument("--solver", choices=SOLVERS, required=True)
    sp.add_argument("--rho", type=_unit_open("rho"), default=0.05)
    sp.add_argument("--delta", type=_delta, default=None)
    sp.add_argument("--d", type=_positive, default=1)
    sp.add_argument("--seed", type=_u64, default=0)

    sp = sub.add_parser("gen", help="write a gadget stream and its prediction")
    sp.add_argument("--gadget", choices=GADGETS, required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", default=None)
    sp.add_argument("--index", type=int, default=None)
    sp.add_argument("--out", required=True)
    sp.add_argument("--pretty", action="store_true")

    sp = sub.add_parser("oracle", help="exact value for a stream file")
    sp.add_argument("--in", dest="path", required=True)
    sp.add_argument("--problem", choices=PROBLEMS, required=True)
    sp.add_argument("--d", type=_positive, default=1)
    sp.add_argument("--objective", type=float, nargs=2, metavar=("X", "Y"), default=None)
    sp.add_argument("--pretty", action="store_true")
    return p


def _rect_source(args):
    if args.d == 1:
        return parse_stream(args.path, StreamKind.INTERVALS)
    return parse_stream(args.path, StreamKind.RECTS, d=args.d)


def _feed(sketch, source) -> int:
    n = 0
    for item in source:
        sketch.update(item)
        n += 1
    return n


def _unit_vector(v, name):
    norm = math.hypot(*v)
    if norm == 0.0:
        raise UsageError(f"--{name} must be non-zero")
    return [v[0] / norm, v[1] / norm]


def _convex(args) -> tuple[ConvexStreamSketch, list, int]:
    source = parse_stream(args.path, StreamKind.HALFPLANES)
    hs = list(source)
    sk = ConvexStreamSketch(args.epsilon)
    for h in hs:
        sk.update(h)
    return sk, hs, len(hs)


def _run(args, report: RunReport) -> None:
    cmd = args.command
    if cmd == "klee-rand":
        report.params.update(epsilon=args.epsilon, rho=args.rho, d=args.d, seed=args.seed)
        source = _rect_source(args)
        sk = SamplerSketch(args.d, args.epsilon, args.rho, args.seed)
        report.items_processed = _feed(sk, source)
        report.estimate = sk.estimate()
        report.space_counters = sk.space()
        if args.oracle:
            report.oracle_value = oracles.klee_exact(list(source), d=args.d)
    elif cmd == "klee-fat":
        report.params.update(epsilon=args.epsilon, delta=args.delta, d=args.d)
        source = _rect_source(args)
        sk = FatKleeSketch(args.d, args.epsilon, args.delta)
        report.items_processed = _feed(sk, source)
        report.estimate = sk.estimate()
        report.space_counters = sk.space()
        if args.oracle:
            report.oracle_value = oracles.klee_exact(list(source), d=args.d)
    elif cmd == "klee-grid-f0":
        report.params.update(epsilon=args.epsilon, d=args.d, seed=args.seed, grid=args.grid)
        source = _rect_source(args)
        sk = GridF0Sketch(args.grid, args.d, args.epsilon, args.seed)
        report.items_processed = _feed(sk, source)
        report.estimate = sk.estimate()
        report.space_counters = sk.space()
        if args.oracle:
            report.oracle_value = oracles.klee_exact(list(source), d=args.d)
    elif cmd == "convex-approx":
        report.params.update(epsilon=args.epsilon)
        sk, hs, report.items_processed = _convex(args)
        body = sk.query()
        report.estimate = {"vertices": body.vertices.tolist(), "area": body.area()}
        report.space_counters = {"facets": sk.stored_facets, "cells": len(sk.cells)}
        if args.oracle:
            exact = oracles.exact_body(hs)
            report.oracle_value = {"vertices": exact.tolist()}
            if len(exact) and not body.is_empty:
                report.abs_error = hausdorff_distance(ConvexPolygon(exact), body)
            else:
                report.abs_error = 0.0 if (len(exact) == 0) == body.is_empty else math.inf
    elif cmd == "lp":
        objective = _unit_vector(args.objective, "objective")
        report.params.update(epsilon=args.epsilon, objective=objective, feasible=args.feasible)
        sk, hs, report.items_processed = _convex(args)
        point, value = lp_maximize(sk, objective, feasible=args.feasible)
        report.estimate = value
        report.details = {"point": point.tolist()}
        report.space_counters = {"facets": sk.stored_facets, "cells": len(sk.cells)}
        if args.oracle:
            report.oracle_value = oracles.lp_exact(hs, objective)[0]
    elif cmd == "membership":
        report.params.update(epsilon=args.epsilon, query=list(args.query))
        sk, hs, report.items_processed = _convex(args)
        answer = membership_test(sk, args.query)
        report.estimate = answer.value
        report.space_counters = {"facets": sk.stored_facets, "cells": len(sk.cells)}
        if args.oracle:
            exact = oracles.exact_body(hs)
            dist = oracles.point_distance(exact, args.query) if len(exact) else math.inf
            truth = "outside" if dist > 0.0 else "inside"
            report.oracle_value = truth
            # mismatch indicator: an unknown answer is never counted as wrong
            report.abs_error = 0.0 if answer.value in (truth, "unknown") else 1.0
    elif cmd == "disc-geo":
        report.params.update(epsilon=args.epsilon)
        source = parse_stream(args.path, StreamKind.POINTS)
        sk = BucketSketch(args.epsilon)
        report.items_processed = _feed(sk, source)
        report.estimate = sk.estimate()
        report.space_counters = sk.space()
        if args.oracle:
            report.oracle_value = oracles.geo_disc_exact(list(source))
    elif cmd == "disc-color-sorted":
        source = parse_stream(args.path, StreamKind.LABELED_POINTS)
        sk = ColorPrefixSketch(require_sorted=True)
        report.items_processed = _feed(sk, source)
        if report.items_processed == 0:
            raise DataError("empty stream")
        report.estimate = sk.estimate()
        report.space_counters = sk.space()
        if args.oracle:
            report.oracle_value = oracles.color_disc_exact(list(source))[0]
    elif cmd == "multipass":
        _multipass(args, report)
    elif cmd == "gen":
        try:
            inst = generate(args.gadget, args.x, args.y, args.index)
        except DataError:
            raise
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
        report.params.update(inst.params)
        report.items_processed = write_stream(args.out, inst.stream, header=f"gadget {inst.kind} {inst.params}")
        sidecar = f"{args.out}.json"
        with open(sidecar, "w", encoding="utf-8") as fh:
            json.dump({"prediction": inst.prediction, "params": {**inst.params, **inst.meta}}, fh, indent=2)
            fh.write("\n")
        report.details = {"out": args.out, "sidecar": sidecar, "prediction": inst.prediction}
    elif cmd == "oracle":
        _oracle(args, report)


def _multipass(args, report: RunReport) -> None:
    report.params.update(epsilon=args.epsilon, solver=args.solver, d=args.d)
    last: dict[str, Any] = {}
    if args.solver == "klee-rand":
        report.params.update(rho=args.rho, seed=args.seed)
        source = _rect_source(args)

        def build(e):
            last["sk"] = SamplerSketch(args.d, e, args.rho, args.seed)
            return last["sk"]

    elif args.solver == "klee-fat":
        if args.delta is None:
            raise UsageError("--delta is required with --solver klee-fat")
        report.params.update(delta=args.delta)
        source = _rect_source(args)

        def build(e):
            last["sk"] = FatKleeSketch(args.d, e, args.delta)
            return last["sk"]

    else:
        source = parse_stream(args.path, StreamKind.POINTS)

        def build(e):
            last["sk"] = BucketSketch(e)
            return last["sk"]

    result = multipass_multiplicative(AdditiveSolverFactory(build, args.solver), source, args.epsilon)
    report.estimate = result.estimate
    report.items_processed = last["sk"].n
    report.space_counters = last["sk"].space()
    report.details = {"passes": result.passes}
    if args.oracle:
        items = list(source)
        if args.solver == "disc-geo":
            report.oracle_value = oracles.geo_disc_exact(items)
        else:
            report.oracle_value = oracles.klee_exact(items, d=args.d)


def _oracle(args, report: RunReport) -> None:
    report.params.update(problem=args.problem)
    if args.problem == "klee":
        report.params.update(d=args.d)
        items = list(_rect_source(args))
        report.estimate = oracles.klee_exact(items, d=args.d)
    elif args.problem == "disc-geo":
        items = list(parse_stream(args.path, StreamKind.POINTS))
        report.estimate = oracles.geo_disc_exact(items)
        report.details = {"star": oracles.star_geo_disc_sup(items)}
    elif args.problem == "disc-color":
        items = list(parse_stream(args.path, StreamKind.LABELED_POINTS))
        d_c, d_star = oracles.color_disc_exact(items)
        report.estimate = d_c
        report.details = {"star": d_star}
    elif args.problem == "lp":
        if args.objective is None:
            raise UsageError("--objective is required for --problem lp")
        objective = _unit_vector(args.objective, "objective")
        report.params.update(objective=objective)
        items = list(parse_stream(args.path, StreamKind.HALFPLANES))
        value, point = oracles.lp_exact(items, objective)
        report.estimate = value
        report.details = {"point": point.tolist()}
    else:
        items = list(parse_stream(args.path, StreamKind.HALFPLANES))
        report.estimate = {"vertices": oracles.exact_body(items).tolist()}
    report.items_processed = len(items)


def _emit(payload: dict[str, Any], pretty: bool, stream=None) -> None:
    stream = sys.stdout if stream is None else stream
    stream.write(json.dumps(payload, indent=2 if pretty else None, allow_nan=True) + "\n")


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)}, False)
        return EXIT_USAGE
    report = RunReport(command=args.command, params={})
    t0 = time.perf_counter()
    try:
        _run(args, report)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)}, False)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _emit({"error": "budget", "message": str(exc)}, False)
        return EXIT_BUDGET
    except (DataError, GeoSketchError, OSError, ValueError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, False)
        return EXIT_DATA
    if report.oracle_value is not None and report.abs_error is None:
        report.abs_error = abs(float(report.estimate) - float(report.oracle_value))
    report.elapsed_ms = round((time.perf_counter() - t0) * 1000.0, 3)
    _emit(report.to_dict(), args.pretty)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
