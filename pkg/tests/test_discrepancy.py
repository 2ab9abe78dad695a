import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geosketch import oracles
from geosketch.discrepancy import (
    BucketSketch,
    ColorPrefixSketch,
    color_disc_sorted,
    geo_disc_estimate,
    star_geo_disc_exact,
)
from geosketch.errors import DataError, EmptyInput, EmptyStream, NotSorted, RangeError, UnsortedInput
from geosketch.geometry import Color, LabeledPoint

from _instances import random_points, random_sorted_colored

R, B = Color.RED, Color.BLUE


def lp(*pairs):
    return [LabeledPoint(x, c) for x, c in pairs]


def test_bucket_layout():
    sk = BucketSketch(0.25)
    assert sk.m == 4
    assert [sk.bucket(x) for x in (0.0, 0.2499, 0.25, 0.99, 1.0)] == [0, 0, 1, 3, 3]
    assert sk.space() == {"buckets": 4, "counters": 5}


def test_bucket_errors():
    with pytest.raises(EmptyStream):
        BucketSketch(0.1).estimate()
    with pytest.raises(RangeError):
        BucketSketch(0.1).update(1.2)
    with pytest.raises(ValueError):
        BucketSketch(0.1).merge(BucketSketch(0.2))


def test_uniform_grid_is_small():
    pts = (np.arange(1000) + 0.5) / 1000
    assert geo_disc_estimate(pts, 0.01) <= oracles.geo_disc_exact(pts) + 0.01


def test_clustered_points_are_large():
    est = geo_disc_estimate([0.5] * 100, 0.01)
    assert est == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("eps", [0.1, 0.03, 0.01])
def test_estimate_within_eps(eps):
    rng = np.random.default_rng(int(eps * 1000))
    for _ in range(30):
        pts = random_points(rng, int(rng.integers(1, 500)))
        assert abs(geo_disc_estimate(pts, eps) - oracles.geo_disc_exact(pts)) <= eps + 1e-12


def test_merge_equals_concatenation():
    rng = np.random.default_rng(3)
    a, b = rng.random(200), rng.random(300)
    sa, sb, sab = BucketSketch(0.05), BucketSketch(0.05), BucketSketch(0.05)
    for x in a:
        sa.update(x)
        sab.update(x)
    for x in b:
        sb.update(x)
        sab.update(x)
    m = sa.merge(sb)
    assert (m.counts == sab.counts).all() and m.estimate() == sab.estimate()


def test_order_does_not_matter():
    pts = np.random.default_rng(4).random(300)
    assert geo_disc_estimate(pts, 0.02) == geo_disc_estimate(pts[::-1], 0.02)


def test_color_examples():
    assert color_disc_sorted(lp((0.1, B), (0.2, R))) == 1
    assert color_disc_sorted(lp((0.1, R), (0.2, R), (0.3, B))) == 2
    # R R B B R R: best interval takes either red pair
    assert color_disc_sorted(lp(*((x / 10, c) for x, c in zip(range(1, 7), [R, R, B, B, R, R])))) == 2
    # a tie group cannot be split
    assert color_disc_sorted(lp((0.5, R), (0.5, B))) == 0


def test_color_errors():
    with pytest.raises(UnsortedInput) as info:
        color_disc_sorted(lp((0.3, R), (0.2, B)))
    assert info.value.position == 1
    with pytest.raises(EmptyStream):
        color_disc_sorted([])
    with pytest.raises(DataError):
        ColorPrefixSketch().update(LabeledPoint(0.1))
    assert ColorPrefixSketch().space() == {"integers": 3}


@pytest.mark.parametrize("ties", [False, True])
def test_color_matches_oracle(ties):
    rng = np.random.default_rng(int(ties))
    for _ in range(50):
        pts = random_sorted_colored(rng, int(rng.integers(1, 300)), ties)
        assert color_disc_sorted(pts) == oracles.color_disc_exact(pts)[0]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 10), st.booleans()), min_size=1, max_size=40))
def test_prefix_range_equals_best_interval(items):
    pts = sorted((LabeledPoint(x / 10, R if red else B) for x, red in items), key=lambda p: p.x)
    assert color_disc_sorted(pts) == oracles.color_disc_exact(pts)[0]


def test_star_closed_form():
    assert star_geo_disc_exact([0.5]) == 0.0
    assert star_geo_disc_exact([0.25, 0.75]) == 0.0
    assert star_geo_disc_exact([0.0, 1.0]) == pytest.approx(0.25)
    # the true supremum adds 1/(2n)
    pts = sorted(np.random.default_rng(5).random(50))
    assert oracles.star_geo_disc_sup(pts) == pytest.approx(star_geo_disc_exact(pts) + 1 / 100)


def test_star_errors():
    with pytest.raises(EmptyInput):
        star_geo_disc_exact([])
    with pytest.raises(NotSorted):
        star_geo_disc_exact([0.4, 0.2])
    with pytest.raises(RangeError):
        star_geo_disc_exact([-0.1, 0.2])
