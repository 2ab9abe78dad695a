"""Exit criteria, one test per criterion.

Each test prints a single ``CRITERION k: PASS|FAIL`` line with the measured
numbers, straight to the terminal, so ``pytest -v`` shows every verdict.
Run directly with ``python tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest

from _instances import (
    bits,
    random_fat_rects,
    random_grid_rects,
    random_halfplanes,
    random_points,
    random_rects,
    random_sorted_colored,
)
from geosketch import gadgets, oracles
from geosketch.convex import ConvexStreamSketch, Membership, facet_budget, lp_maximize, membership_test
from geosketch.discrepancy import BucketSketch, color_disc_sorted, geo_disc_estimate
from geosketch.geometry import Color, LabeledPoint
from geosketch.klee import klee_fat_estimate, klee_grid_f0_estimate, klee_sample_estimate, sample_size
from geosketch.polygon import ConvexPolygon, contains_points, hausdorff_distance
from geosketch.streams import AdditiveSolverFactory, StreamSource, multipass_multiplicative, pass_bound

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'}  {detail}")

    return emit


def test_criterion_1_sampling_klee(verdict):
    eps = rho = 0.05
    t0 = time.perf_counter()
    worst = {}
    for d in (1, 2, 3):
        rng = np.random.default_rng(1000 + d)
        rates = []
        for _ in range(50):
            rects = random_rects(rng, 200, d)
            exact = oracles.klee_exact(rects, d=d)
            hits = sum(abs(klee_sample_estimate(rects, d, eps, rho, seed) - exact) <= eps for seed in range(200))
            rates.append(hits / 200)
        worst[d] = min(rates)
    elapsed = time.perf_counter() - t0
    ok = all(r >= 0.95 for r in worst.values()) and elapsed < 60.0
    verdict(1, ok, f"M={sample_size(eps, rho)} worst per-instance success {worst} in {elapsed:.1f}s (<60s)")
    assert ok


def test_criterion_2_fat_klee(verdict):
    eps, delta = 0.1, 0.25
    rng = np.random.default_rng(2)
    worst_gap, over = 0.0, 0
    for _ in range(100):
        rects = random_fat_rects(rng, int(rng.integers(1, 501)), 2, delta)
        exact = oracles.klee_exact(rects, d=2)
        est = klee_fat_estimate(rects, 2, eps, delta)
        over += est > exact
        worst_gap = max(worst_gap, exact - est)
    base_err = 0.0
    for _ in range(100):
        rects = random_fat_rects(rng, int(rng.integers(1, 60)), 1, delta)
        base_err = max(base_err, abs(klee_fat_estimate(rects, 1, eps, delta) - oracles.klee_exact(rects, d=1)))
    ok = over == 0 and worst_gap <= eps and base_err <= 1e-12
    verdict(2, ok, f"d=2 overshoots={over}, max(V-est)={worst_gap:.4f} (<= {eps}); d=1 max |err|={base_err:.1e}")
    assert ok


def test_criterion_3_grid_f0(verdict):
    N, d, eps = 32, 2, 0.1
    good = 0
    for trial in range(100):
        rng = np.random.default_rng(3000 + trial)
        # sides up to N/2 keep the covered-cell count above k = 400
        rects = random_grid_rects(rng, 20, d, N, max_side=N // 2)
        exact = oracles.klee_exact(rects, d=d)
        est = klee_grid_f0_estimate(rects, N, d, eps, seed=trial)
        good += abs(est - exact) <= eps * exact
    ok = good >= 67
    verdict(3, ok, f"{good}/100 trials within 10% (need >= 67)")
    assert ok


def test_criterion_4_convex_sketch(verdict):
    rng = np.random.default_rng(4)
    violations, worst_ratio, worst_facets = 0, 0.0, 0.0
    for n in (100, 1000, 10000):
        hs = random_halfplanes(rng, n)
        exact = ConvexPolygon(oracles.exact_body(hs))
        for eps in (0.1, 0.05, 0.01):
            sk = ConvexStreamSketch(eps)
            for h in hs:
                sk.update(h)
            approx = sk.query()
            violations += int((~contains_points(approx, exact.vertices)).sum())
            worst_ratio = max(worst_ratio, hausdorff_distance(exact, approx, 4096) / eps)
            worst_facets = max(worst_facets, sk.stored_facets / facet_budget(n, eps))
    ok = violations == 0 and worst_ratio <= 1.0 and worst_facets <= 1.0
    verdict(
        4,
        ok,
        f"containment violations={violations}, max d_H/eps={worst_ratio:.3f}, max facets/budget={worst_facets:.3f}",
    )
    assert ok


def test_criterion_5_lp(verdict):
    rng = np.random.default_rng(5)
    worst_sup, worst_feas, bad_points, below = 0.0, 0.0, 0, 0
    for _ in range(100):
        eps = float(rng.choice([0.1, 0.05, 0.02]))
        hs = random_halfplanes(rng, int(rng.integers(10, 300)))
        ang = rng.uniform(0, 2 * math.pi)
        obj = (math.cos(ang), math.sin(ang))
        opt, _ = oracles.lp_exact(hs, obj)
        sk = ConvexStreamSketch(eps)
        for h in hs:
            sk.update(h)
        _, val = lp_maximize(sk, obj, feasible=False)
        worst_sup = max(worst_sup, (val - opt) / eps)
        below += val < opt - 1e-9
        point, fval = lp_maximize(sk, obj, feasible=True)
        a = np.array([(h.nx, h.ny) for h in hs])
        c = np.array([h.c for h in hs])
        bad_points += bool(np.any(a @ point > c + 1e-9))
        worst_feas = max(worst_feas, (opt - fval) / (2 * eps))
    ok = worst_sup <= 1.0 and below == 0 and worst_feas <= 1.0 and bad_points == 0
    verdict(
        5,
        ok,
        f"superset max (val-opt)/eps={worst_sup:.3f}, below opt={below}; feasible infeasible points={bad_points}, "
        f"max (opt-val)/2eps={worst_feas:.3f}",
    )
    assert ok


def test_criterion_6_membership(verdict):
    rng = np.random.default_rng(6)
    wrong, unknown_promised, promised = 0, 0, 0
    for _ in range(500):
        n = int(rng.integers(3, 13))
        x = bits(rng, n)
        j = int(rng.integers(1, n + 1))
        inst = gadgets.gen_convex_index(x, j)
        gap = math.sin(math.pi / (2 * n)) ** 2
        eps = 0.4 * gap
        sk = ConvexStreamSketch(eps)
        for h in inst.stream:
            sk.update(h)
        ans = membership_test(sk, inst.prediction["query"], eps)
        inside = inst.prediction["inside"]
        if inside:
            # the query sits on the boundary of K: outside the promise band
            wrong += ans is Membership.OUTSIDE
        else:
            promised += 1
            wrong += ans is Membership.INSIDE
            unknown_promised += ans is Membership.UNKNOWN
    ok = wrong == 0 and unknown_promised == 0
    verdict(6, ok, f"incorrect={wrong}/500, unknown under the 2eps promise={unknown_promised}/{promised}")
    assert ok


def test_criterion_7_geometric_discrepancy(verdict):
    rng = np.random.default_rng(7)
    worst, over, bracket_bad, count = 0.0, 0, 0, 0

    def check(pts, eps):
        nonlocal worst, over, bracket_bad, count
        exact = oracles.geo_disc_exact(pts)
        err = abs(geo_disc_estimate(pts, eps) - exact)
        # binary64 slack: gadget coordinates sit exactly on bucket edges
        over += err > eps + 1e-12
        worst = max(worst, err / eps)
        star = oracles.star_geo_disc_sup(pts)
        bracket_bad += not (star <= exact + 1e-12 and exact <= 2 * star + 1e-12)
        count += 1

    for t in range(200):
        pts = random_points(rng, int(rng.integers(1, 2001)))
        check(pts, (0.1, 0.01)[t % 2])
    for _ in range(100):
        n = int(rng.integers(1, 12))
        inst = gadgets.gen_geodisc_disj(bits(rng, n), bits(rng, n))
        for eps in (0.1, 0.01, inst.meta["eps"]):
            check(inst.stream, eps)
    ok = over == 0 and bracket_bad == 0
    verdict(7, ok, f"{count} runs: over eps={over}, max |est-exact|/eps={worst:.3f}, star bracket violations={bracket_bad}")
    assert ok


def test_criterion_8_color_discrepancy(verdict):
    rng = np.random.default_rng(8)
    mismatches = 0
    for t in range(200):
        pts = random_sorted_colored(rng, int(rng.integers(1, 501)), ties=t % 4 == 0)
        mismatches += color_disc_sorted(pts) != oracles.color_disc_exact(pts)[0]
    br = [LabeledPoint(0.1, Color.BLUE), LabeledPoint(0.2, Color.RED)]
    br_val, br_oracle = color_disc_sorted(br), oracles.color_disc_exact(br)[0]
    ok = mismatches == 0 and br_val == br_oracle == 1
    verdict(8, ok, f"mismatches={mismatches}/200; B,R -> sketch {br_val}, oracle {br_oracle}")
    assert ok


class _ExactKlee:
    def __init__(self):
        self.items = []

    def update(self, item):
        self.items.append(item)

    def estimate(self):
        return oracles.klee_exact(self.items, d=1)


def test_criterion_9_multipass(verdict):
    rng = np.random.default_rng(9)
    fails = {"bucket": 0, "oracle": 0}
    done = {"bucket": 0, "oracle": 0}
    while min(done.values()) < 100:
        eps = float(rng.choice([0.05, 0.1, 0.2, 0.3]))
        if done["bucket"] < 100:
            pts = random_points(rng, int(rng.integers(1, 80)))
            opt = oracles.geo_disc_exact(pts)
            if opt >= 0.1:
                res = multipass_multiplicative(AdditiveSolverFactory(BucketSketch), StreamSource(list(pts)), eps)
                fails["bucket"] += not (abs(res.estimate - opt) <= eps * opt and res.passes <= pass_bound(opt, eps))
                done["bucket"] += 1
        if done["oracle"] < 100:
            rects = random_rects(rng, int(rng.integers(1, 40)), 1, scale=rng.uniform(0.005, 0.05))
            opt = oracles.klee_exact(rects, d=1)
            if opt >= 0.1:
                res = multipass_multiplicative(lambda e: _ExactKlee(), StreamSource(rects), eps)
                fails["oracle"] += not (abs(res.estimate - opt) <= eps * opt and res.passes <= pass_bound(opt, eps))
                done["oracle"] += 1
    ok = fails["bucket"] == 0 and fails["oracle"] == 0
    verdict(9, ok, f"failures: bucketing {fails['bucket']}/100, exact solver {fails['oracle']}/100")
    assert ok


def test_criterion_10_gadget_predictions(verdict):
    rng = np.random.default_rng(10)
    bad = {}
    for name in gadgets.GADGETS:
        bad[name] = 0
        for _ in range(500):
            n = int(rng.integers(3, 12))
            x, y = bits(rng, n), bits(rng, n)
            inst = gadgets.generate(name, x, y, int(rng.integers(1, n + 1)))
            bad[name] += not gadgets.verify(inst)["ok"]
    ok = not any(bad.values())
    verdict("10a", ok, f"prediction mismatches per gadget over 500 draws: {bad}")
    assert ok


def test_criterion_10_geodisc_threshold_separation(verdict):
    """Bucketing at eps = 1/(32n) should report <= 17 eps iff the sets are disjoint."""
    rng = np.random.default_rng(11)
    errors, hi_disjoint, lo_intersecting = 0, 0.0, math.inf
    for _ in range(500):
        n = int(rng.integers(1, 12))
        inst = gadgets.gen_geodisc_disj(bits(rng, n), bits(rng, n))
        eps = inst.meta["eps"]
        ratio = geo_disc_estimate(inst.stream, eps) / eps
        if inst.prediction["disj"]:
            hi_disjoint = max(hi_disjoint, ratio)
            errors += ratio > 17 + 1e-9
        else:
            lo_intersecting = min(lo_intersecting, ratio)
            errors += ratio < 19 - 1e-9
    ok = errors == 0
    verdict(
        "10b",
        ok,
        f"misclassified {errors}/500; DISJ=1 max est/eps={hi_disjoint:.2f} (need <= 17), "
        f"DISJ=0 min est/eps={lo_intersecting:.2f} (need >= 19)",
    )
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
