import itertools
import math

import numpy as np
import pytest

from geosketch import oracles
from geosketch.errors import BudgetExceeded, DataError, DimensionMismatch, Infeasible
from geosketch.geometry import Color, Halfplane, HyperRect, LabeledPoint
from geosketch.oracles import OracleBudget

from _instances import random_rects


def test_klee_small_cases():
    assert oracles.klee_exact([]) == 0.0
    assert oracles.klee_exact([HyperRect.interval(0.1, 0.4), HyperRect.interval(0.3, 0.5)]) == pytest.approx(0.4)
    sq = [HyperRect((0.0, 0.0), (0.5, 0.5)), HyperRect((0.25, 0.25), (0.75, 0.75))]
    assert oracles.klee_exact(sq) == pytest.approx(0.4375)
    cubes = [HyperRect((0.0,) * 3, (0.5,) * 3), HyperRect((0.5,) * 3, (1.0,) * 3)]
    assert oracles.klee_exact(cubes) == pytest.approx(0.25)


def test_klee_inclusion_exclusion_agrees():
    rng = np.random.default_rng(0)
    for d in (2, 3):
        rects = random_rects(rng, 4, d, 0.5)
        total = 0.0
        for k in range(1, 5):
            for sub in itertools.combinations(rects, k):
                lo = np.max([r.lo for r in sub], axis=0)
                hi = np.min([r.hi for r in sub], axis=0)
                total += (-1) ** (k + 1) * np.prod(np.clip(hi - lo, 0.0, None))
        assert oracles.klee_exact(rects) == pytest.approx(total)


def test_klee_mixed_dimensions():
    with pytest.raises(DimensionMismatch):
        oracles.klee_exact([HyperRect.interval(0, 1), HyperRect((0, 0), (1, 1))])


def _geo_brute(pts):
    n = len(pts)
    ends = {0.0, 1.0}
    for v in pts:
        ends |= {v, v - 1e-9, v + 1e-9}
    ends = sorted(e for e in ends if 0.0 <= e <= 1.0)
    best = 0.0
    for a, b in itertools.combinations_with_replacement(ends, 2):
        inside = sum(a <= x <= b for x in pts)
        best = max(best, abs(b - a - inside / n))
    return best


def test_geo_disc_matches_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(60):
        n = int(rng.integers(1, 13))
        # rational points with ties
        pts = list(rng.integers(0, 9, n) / 8)
        assert oracles.geo_disc_exact(pts) == pytest.approx(_geo_brute(pts), abs=1e-8)


def test_geo_disc_examples():
    assert oracles.geo_disc_exact([0.5]) == pytest.approx(1.0)
    assert oracles.geo_disc_exact([0.25, 0.75]) == pytest.approx(0.5)


def test_color_disc_examples():
    pts = [LabeledPoint(0.1, Color.BLUE), LabeledPoint(0.2, Color.RED)]
    assert oracles.color_disc_exact(pts) == (1, 1)
    pts = [LabeledPoint(0.1, Color.RED), LabeledPoint(0.2, Color.RED), LabeledPoint(0.3, Color.BLUE)]
    assert oracles.color_disc_exact(pts) == (2, 2)
    with pytest.raises(DataError):
        oracles.color_disc_exact([LabeledPoint(0.1)])


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv(oracles.ENV_BUDGET, "max_items=3,max_cells=10")
    b = OracleBudget.from_env()
    assert b == OracleBudget(3, 10)
    with pytest.raises(BudgetExceeded):
        oracles.geo_disc_exact([0.1, 0.2, 0.3, 0.4])
    rects = [HyperRect((0.1 * i, 0.1 * i), (0.1 * i + 0.05, 0.1 * i + 0.05)) for i in range(3)]
    with pytest.raises(BudgetExceeded):
        oracles.klee_exact(rects)
    monkeypatch.setenv(oracles.ENV_BUDGET, "bogus=1")
    with pytest.raises(ValueError):
        OracleBudget.from_env()


def test_budget_defaults():
    with pytest.raises(BudgetExceeded):
        oracles.color_disc_exact([LabeledPoint(0.5, Color.RED)] * 2001, budget=OracleBudget())


def test_lp_exact():
    box = [Halfplane(1, 0, 0.5), Halfplane(-1, 0, 0.5), Halfplane(0, 1, 0.5), Halfplane(0, -1, 0.5)]
    v, p = oracles.lp_exact(box, [math.sqrt(0.5), math.sqrt(0.5)])
    assert v == pytest.approx(math.sqrt(0.5))
    assert p == pytest.approx([0.5, 0.5])
    # the bounding 64-gon alone
    v, _ = oracles.lp_exact([], [1.0, 0.0])
    assert v == pytest.approx(1.0 / math.cos(math.pi / 64))
    with pytest.raises(Infeasible):
        oracles.lp_exact([Halfplane(1, 0, -0.5), Halfplane(-1, 0, -0.6)], [1.0, 0.0])


def test_exact_body_and_distances():
    box = [Halfplane(1, 0, 0.5), Halfplane(-1, 0, 0.5), Halfplane(0, 1, 0.5), Halfplane(0, -1, 0.5)]
    body = oracles.exact_body(box)
    assert len(body) == 4
    assert oracles.point_distance(body, [1.0, 0.0]) == pytest.approx(0.5)
    assert oracles.point_distance(body, [0.0, 0.0]) == 0.0
    assert oracles.point_depth(body, [0.0, 0.0]) == pytest.approx(0.5)
    assert oracles.exact_body([Halfplane(1, 0, -0.5), Halfplane(-1, 0, -0.6)]).shape == (0, 2)
    with pytest.raises(DataError):
        oracles.exact_body([Halfplane(1, 0, 0.2), Halfplane(-1, 0, -0.2)])
