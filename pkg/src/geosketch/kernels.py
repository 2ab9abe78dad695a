"""Numeric inner loops, each with a numba and a numpy implementation.

The public name binds to whichever backend :mod:`geosketch._backend` selected;
the ``*_nb`` / ``*_np`` variants stay importable so tests and the benchmark
can compare them directly.
"""

from __future__ import annotations

import numpy as np

from ._backend import njit, pick

GEOM_TOL = 1e-9

# ---------------------------------------------------------------------------
# sampling sketch: flag sample points covered by a batch of boxes


@njit(cache=True)
def mark_hits_nb(points, flags, lo, hi):
    # points are sorted by their first coordinate, so each box only scans
    # the run of points inside its first-axis extent
    m, d = points.shape
    first = points[:, 0].copy()
    for r in range(lo.shape[0]):
        i0 = np.searchsorted(first, lo[r, 0], side="left")
        i1 = np.searchsorted(first, hi[r, 0], side="right")
        for j in range(i0, i1):
            # branch-free test: the outcome is close to a coin flip
            inside = True
            for a in range(1, d):
                x = points[j, a]
                inside &= (x >= lo[r, a]) & (x <= hi[r, a])
            flags[j] |= inside


def mark_hits_np(points, flags, lo, hi):
    first = points[:, 0]
    i0 = np.searchsorted(first, lo[:, 0], side="left")
    i1 = np.searchsorted(first, hi[:, 0], side="right")
    for r in range(lo.shape[0]):
        sub = points[i0[r]:i1[r], 1:]
        inside = np.all((sub >= lo[r, 1:]) & (sub <= hi[r, 1:]), axis=1)
        flags[i0[r]:i1[r]] |= inside


# ---------------------------------------------------------------------------
# bucketed interval discrepancy, evaluated once at end of stream


@njit(cache=True)
def bucket_discrepancy_nb(counts, eps, n):
    m = counts.shape[0]
    prefix = np.zeros(m + 1, dtype=np.int64)
    for i in range(m):
        prefix[i + 1] = prefix[i] + counts[i]
    best = 0.0
    for i in range(m):
        for j in range(i, m):
            length = (j - i) * eps
            hi = prefix[j + 1] - prefix[i]
            lo = 0
            if j > i:
                lo = prefix[j] - prefix[i + 1]
            v1 = abs(length - lo / n)
            v2 = abs(length - hi / n)
            if v1 > best:
                best = v1
            if v2 > best:
                best = v2
    return best


def bucket_discrepancy_np(counts, eps, n):
    counts = np.asarray(counts, dtype=np.int64)
    m = counts.shape[0]
    prefix = np.concatenate(([0], np.cumsum(counts)))
    i, j = np.triu_indices(m)
    length = (j - i) * eps
    hi = prefix[j + 1] - prefix[i]
    lo = np.where(j > i, prefix[j] - prefix[np.minimum(i + 1, m)], 0)
    return float(max(np.abs(length - lo / n).max(), np.abs(length - hi / n).max()))


# ---------------------------------------------------------------------------
# 64-bit mixing hash for unit-cell identifiers

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_M2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _splitmix64(z):
    z = z + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def cell_hashes_nb(lo, hi, universe, salt):
    d = lo.shape[0]
    total = 1
    for a in range(d):
        total *= hi[a] - lo[a]
    out = np.empty(total, dtype=np.uint64)
    idx = lo.copy()
    for t in range(total):
        cid = 0
        stride = 1
        for a in range(d):
            cid += idx[a] * stride
            stride *= universe
        out[t] = _splitmix64(np.uint64(cid) ^ salt)
        for a in range(d):
            idx[a] += 1
            if idx[a] < hi[a]:
                break
            idx[a] = lo[a]
    return out


def cell_hashes_np(lo, hi, universe, salt):
    axes = [np.arange(a, b, dtype=np.uint64) for a, b in zip(lo, hi)]
    if any(ax.size == 0 for ax in axes):
        return np.zeros(0, dtype=np.uint64)
    grids = np.meshgrid(*axes, indexing="ij")
    cid = np.zeros(grids[0].shape, dtype=np.uint64)
    stride = np.uint64(1)
    for g in grids:
        cid += g * stride
        stride *= np.uint64(universe)
    z = cid.ravel(order="F") ^ np.uint64(salt)
    with np.errstate(over="ignore"):
        z = z + _SM_GAMMA
        z = (z ^ (z >> np.uint64(30))) * _SM_M1
        z = (z ^ (z >> np.uint64(27))) * _SM_M2
    return z ^ (z >> np.uint64(31))


# ---------------------------------------------------------------------------
# exact union volume on a coordinate-compressed grid (oracle side)


@njit(cache=True)
def union_area_2d_nb(ix_lo, ix_hi, iy_lo, iy_hi, dx, dy):
    covered = np.zeros((dx.shape[0], dy.shape[0]), dtype=np.bool_)
    for r in range(ix_lo.shape[0]):
        for a in range(ix_lo[r], ix_hi[r]):
            for b in range(iy_lo[r], iy_hi[r]):
                covered[a, b] = True
    total = 0.0
    for a in range(dx.shape[0]):
        row = 0.0
        for b in range(dy.shape[0]):
            if covered[a, b]:
                row += dy[b]
        total += row * dx[a]
    return total


def union_area_2d_np(ix_lo, ix_hi, iy_lo, iy_hi, dx, dy):
    covered = np.zeros((dx.shape[0], dy.shape[0]), dtype=bool)
    for r in range(ix_lo.shape[0]):
        covered[ix_lo[r]:ix_hi[r], iy_lo[r]:iy_hi[r]] = True
    return float(dx @ (covered @ dy))


@njit(cache=True)
def union_volume_3d_nb(ix_lo, ix_hi, iy_lo, iy_hi, iz_lo, iz_hi, dx, dy, dz):
    nx, ny, nz = dx.shape[0], dy.shape[0], dz.shape[0]
    count = np.zeros((nx, ny), dtype=np.int32)
    n = ix_lo.shape[0]
    order_start = np.argsort(iz_lo)
    order_end = np.argsort(iz_hi)
    ps = 0
    pe = 0
    total = 0.0
    for k in range(nz):
        while pe < n and iz_hi[order_end[pe]] <= k:
            r = order_end[pe]
            if iz_lo[r] < iz_hi[r]:
                for a in range(ix_lo[r], ix_hi[r]):
                    for b in range(iy_lo[r], iy_hi[r]):
                        count[a, b] -= 1
            pe += 1
        while ps < n and iz_lo[order_start[ps]] <= k:
            r = order_start[ps]
            if iz_lo[r] < iz_hi[r]:
                for a in range(ix_lo[r], ix_hi[r]):
                    for b in range(iy_lo[r], iy_hi[r]):
                        count[a, b] += 1
            ps += 1
        area = 0.0
        for a in range(nx):
            row = 0.0
            for b in range(ny):
                if count[a, b] > 0:
                    row += dy[b]
            area += row * dx[a]
        total += area * dz[k]
    return total


def union_volume_3d_np(ix_lo, ix_hi, iy_lo, iy_hi, iz_lo, iz_hi, dx, dy, dz):
    total = 0.0
    for k in range(dz.shape[0]):
        active = np.flatnonzero((iz_lo <= k) & (iz_hi > k))
        if active.size == 0:
            continue
        covered = np.zeros((dx.shape[0], dy.shape[0]), dtype=bool)
        for r in active:
            covered[ix_lo[r]:ix_hi[r], iy_lo[r]:iy_hi[r]] = True
        total += float(dx @ (covered @ dy)) * dz[k]
    return total


# ---------------------------------------------------------------------------
# convex polygon clipping (Sutherland-Hodgman against one halfplane at a time)


@njit(cache=True)
def _prune_nb(xs, ys, m, tol):
    # drop near-duplicate and collinear vertices of a CCW polygon
    keep_x = np.empty(m, dtype=np.float64)
    keep_y = np.empty(m, dtype=np.float64)
    k = 0
    for i in range(m):
        if k > 0 and abs(xs[i] - keep_x[k - 1]) <= tol and abs(ys[i] - keep_y[k - 1]) <= tol:
            continue
        keep_x[k] = xs[i]
        keep_y[k] = ys[i]
        k += 1
    while k > 1 and abs(keep_x[0] - keep_x[k - 1]) <= tol and abs(keep_y[0] - keep_y[k - 1]) <= tol:
        k -= 1
    changed = True
    while changed and k > 2:
        changed = False
        for i in range(k):
            ip = (i - 1 + k) % k
            inx = (i + 1) % k
            ax = keep_x[inx] - keep_x[ip]
            ay = keep_y[inx] - keep_y[ip]
            norm = np.sqrt(ax * ax + ay * ay)
            bx = keep_x[i] - keep_x[ip]
            by = keep_y[i] - keep_y[ip]
            cross = bx * ay - by * ax
            if norm <= tol or cross <= tol * norm:
                for t in range(i, k - 1):
                    keep_x[t] = keep_x[t + 1]
                    keep_y[t] = keep_y[t + 1]
                k -= 1
                changed = True
                break
    out = np.empty((k, 2), dtype=np.float64)
    for i in range(k):
        out[i, 0] = keep_x[i]
        out[i, 1] = keep_y[i]
    return out


@njit(cache=True)
def clip_many_nb(poly, normals, offsets, tol):
    cur = poly.copy()
    for h in range(normals.shape[0]):
        m = cur.shape[0]
        if m == 0:
            return cur
        nx = normals[h, 0]
        ny = normals[h, 1]
        c = offsets[h]
        s = np.empty(m, dtype=np.float64)
        all_in = True
        any_in = False
        for i in range(m):
            s[i] = nx * cur[i, 0] + ny * cur[i, 1] - c
            if s[i] > tol:
                all_in = False
            else:
                any_in = True
        if all_in:
            continue
        if not any_in:
            return np.empty((0, 2), dtype=np.float64)
        xs = np.empty(2 * m, dtype=np.float64)
        ys = np.empty(2 * m, dtype=np.float64)
        k = 0
        for i in range(m):
            j = (i + 1) % m
            in_i = s[i] <= tol
            in_j = s[j] <= tol
            if in_i:
                xs[k] = cur[i, 0]
                ys[k] = cur[i, 1]
                k += 1
            if in_i != in_j:
                t = s[i] / (s[i] - s[j])
                xs[k] = cur[i, 0] + t * (cur[j, 0] - cur[i, 0])
                ys[k] = cur[i, 1] + t * (cur[j, 1] - cur[i, 1])
                k += 1
        cur = _prune_nb(xs, ys, k, tol)
    return cur


def _prune_np(pts, tol):
    if len(pts) == 0:
        return pts.reshape(0, 2)
    diff = np.abs(np.diff(pts, axis=0)).max(axis=1)
    pts = pts[np.concatenate(([True], diff > tol))]
    while len(pts) > 1 and np.abs(pts[0] - pts[-1]).max() <= tol:
        pts = pts[:-1]
    while len(pts) > 2:
        prev = np.roll(pts, 1, axis=0)
        nxt = np.roll(pts, -1, axis=0)
        a = nxt - prev
        b = pts - prev
        norm = np.hypot(a[:, 0], a[:, 1])
        cross = b[:, 0] * a[:, 1] - b[:, 1] * a[:, 0]
        bad = np.flatnonzero((norm <= tol) | (cross <= tol * norm))
        if bad.size == 0:
            break
        pts = np.delete(pts, bad[0], axis=0)
    return pts


def clip_many_np(poly, normals, offsets, tol):
    cur = np.asarray(poly, dtype=np.float64)
    for h in range(normals.shape[0]):
        if len(cur) == 0:
            return cur.reshape(0, 2)
        s = cur @ normals[h] - offsets[h]
        inside = s <= tol
        if inside.all():
            continue
        if not inside.any():
            return np.empty((0, 2))
        nxt = np.roll(cur, -1, axis=0)
        s_next = np.roll(s, -1)
        crossing = inside != np.roll(inside, -1)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(crossing, s / (s - s_next), 0.0)
        cut = cur + t[:, None] * (nxt - cur)
        pairs = np.stack([cur, cut], axis=1).reshape(-1, 2)
        mask = np.stack([inside, crossing], axis=1).reshape(-1)
        cur = _prune_np(pairs[mask], tol)
    return cur


# ---------------------------------------------------------------------------
# outer polygon approximation: greedy choice among candidate support lines


@njit(cache=True)
def _dist_to_polygon_nb(px, py, poly):
    m = poly.shape[0]
    if m == 1:
        return np.hypot(px - poly[0, 0], py - poly[0, 1])
    best = np.inf
    for i in range(m):
        ax = poly[i, 0]
        ay = poly[i, 1]
        bx = poly[(i + 1) % m, 0]
        by = poly[(i + 1) % m, 1]
        ex = bx - ax
        ey = by - ay
        ll = ex * ex + ey * ey
        t = 0.0
        if ll > 0.0:
            t = ((px - ax) * ex + (py - ay) * ey) / ll
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        qx = ax + t * ex - px
        qy = ay + t * ey - py
        dd = np.sqrt(qx * qx + qy * qy)
        if dd < best:
            best = dd
    return best


@njit(cache=True)
def _support_nb(poly, theta):
    c = np.cos(theta)
    s = np.sin(theta)
    best = -np.inf
    for i in range(poly.shape[0]):
        v = c * poly[i, 0] + s * poly[i, 1]
        if v > best:
            best = v
    return best


@njit(cache=True)
def _corner_error_nb(ta, ha, tb, hb, poly):
    sa = np.sin(ta)
    ca = np.cos(ta)
    sb = np.sin(tb)
    cb = np.cos(tb)
    det = ca * sb - sa * cb
    x = (ha * sb - hb * sa) / det
    y = (ca * hb - cb * ha) / det
    return _dist_to_polygon_nb(x, y, poly)


@njit(cache=True)
def greedy_outer_nb(poly, tol, theta0, max_turn):
    # walk the normal angle from theta0 around the circle, each time jumping
    # to the farthest supporting line whose corner with the current one stays
    # within tol of the polygon; the corner error grows monotonically with
    # the jump, so bisection finds the largest admissible jump
    goal = theta0 + 2.0 * np.pi
    out_t = np.empty(64, dtype=np.float64)
    out_h = np.empty(64, dtype=np.float64)
    n = 0
    ta = theta0
    ha = _support_nb(poly, ta)
    while True:
        if n == out_t.shape[0]:
            out_t = np.concatenate((out_t, np.empty(n, dtype=np.float64)))
            out_h = np.concatenate((out_h, np.empty(n, dtype=np.float64)))
        out_t[n] = ta
        out_h[n] = ha
        n += 1
        reach = min(max_turn, goal - ta)
        tb = ta + reach
        if _corner_error_nb(ta, ha, tb, _support_nb(poly, tb), poly) <= tol:
            if tb >= goal:
                break
            ta = tb
            ha = _support_nb(poly, ta)
            continue
        lo = 0.0
        hi = reach
        while hi - lo > 1e-11:
            mid = 0.5 * (lo + hi)
            tm = ta + mid
            if _corner_error_nb(ta, ha, tm, _support_nb(poly, tm), poly) <= tol:
                lo = mid
            else:
                hi = mid
        if lo <= 0.0:
            # no admissible jump at double precision: step by the resolution
            lo = hi
        ta = ta + lo
        ha = _support_nb(poly, ta)
    return out_t[:n], out_h[:n]


def _dist_to_polygon_np(points, poly):
    points = np.atleast_2d(points)
    if len(poly) == 1:
        return np.hypot(*(points - poly[0]).T)
    a = poly
    e = np.roll(poly, -1, axis=0) - poly
    ll = (e * e).sum(axis=1)
    rel = points[:, None, :] - a[None, :, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(ll > 0, (rel * e[None]).sum(axis=2) / ll, 0.0)
    t = np.clip(t, 0.0, 1.0)
    q = rel - t[..., None] * e[None]
    return np.hypot(q[..., 0], q[..., 1]).min(axis=1)


def _jump_errors_np(poly, ta, ha, tb):
    hb = (np.column_stack([np.cos(tb), np.sin(tb)]) @ poly.T).max(axis=1)
    det = np.sin(tb - ta)
    x = (ha * np.sin(tb) - hb * np.sin(ta)) / det
    y = (np.cos(ta) * hb - np.cos(tb) * ha) / det
    return _dist_to_polygon_np(np.column_stack([x, y]), poly)


def greedy_outer_np(poly, tol, theta0, max_turn, grid=64, rounds=8):
    goal = theta0 + 2.0 * np.pi
    ts, hs = [], []
    ta = theta0
    ha = float((poly @ [np.cos(ta), np.sin(ta)]).max())
    while True:
        ts.append(ta)
        hs.append(ha)
        reach = min(max_turn, goal - ta)
        lo, hi = 0.0, reach
        if _jump_errors_np(poly, ta, ha, np.array([ta + reach]))[0] <= tol:
            lo = hi
        else:
            # bracket the largest admissible jump on successively finer grids
            for _ in range(rounds):
                steps = np.linspace(lo, hi, grid + 1)[1:]
                ok = _jump_errors_np(poly, ta, ha, ta + steps) <= tol
                below = np.flatnonzero(ok)
                k = below[-1] if below.size else -1
                new_lo = steps[k] if k >= 0 else lo
                hi = steps[k + 1] if k + 1 < grid else hi
                lo = new_lo
            if lo <= 0.0:
                lo = hi
        if lo >= reach and ta + lo >= goal:
            break
        ta = ta + lo
        ha = float((poly @ [np.cos(ta), np.sin(ta)]).max())
    return np.array(ts), np.array(hs)


mark_hits = pick(mark_hits_nb, mark_hits_np)
bucket_discrepancy = pick(bucket_discrepancy_nb, bucket_discrepancy_np)
cell_hashes = pick(cell_hashes_nb, cell_hashes_np)
union_area_2d = pick(union_area_2d_nb, union_area_2d_np)
union_volume_3d = pick(union_volume_3d_nb, union_volume_3d_np)
clip_many = pick(clip_many_nb, clip_many_np)
greedy_outer = pick(greedy_outer_nb, greedy_outer_np)
