"""Bottleneck dynamic programs over monotone couplings of two sequences.

A coupling walks from cell ``(0, 0)`` to ``(p-1, q-1)`` with steps
``(1, 0)``, ``(0, 1)`` or ``(1, 1)``; its cost is the largest ``cost[i, j]``
visited.  Cells with ``dt[i, j] > alpha`` are forbidden.
"""

import numpy as np
from numba import njit

INF = np.inf


@njit(cache=True)
def bottleneck_value(dt, cost, alpha):
    p, q = cost.shape
    prev = np.full(q, INF)
    cur = np.full(q, INF)
    for i in range(p):
        for j in range(q):
            if dt[i, j] > alpha:
                cur[j] = INF
                continue
            if i == 0 and j == 0:
                best = -INF
            else:
                best = INF
                if i > 0 and j > 0 and prev[j - 1] < best:
                    best = prev[j - 1]
                if i > 0 and prev[j] < best:
                    best = prev[j]
                if j > 0 and cur[j - 1] < best:
                    best = cur[j - 1]
            c = cost[i, j]
            cur[j] = c if c > best else best
        prev, cur = cur, prev
    return prev[q - 1]


@njit(cache=True)
def bottleneck_table(dt, cost, alpha):
    p, q = cost.shape
    D = np.full((p, q), INF)
    for i in range(p):
        for j in range(q):
            if dt[i, j] > alpha:
                continue
            if i == 0 and j == 0:
                best = -INF
            else:
                best = INF
                if i > 0 and j > 0 and D[i - 1, j - 1] < best:
                    best = D[i - 1, j - 1]
                if i > 0 and D[i - 1, j] < best:
                    best = D[i - 1, j]
                if j > 0 and D[i, j - 1] < best:
                    best = D[i, j - 1]
            c = cost[i, j]
            D[i, j] = c if c > best else best
    return D


@njit(cache=True)
def masked_bottleneck_table(cost, ok_down, ok_diag):
    """Bottleneck table where ``(i-1, j) -> (i, j)`` needs ``ok_down[i, j]`` and
    ``(i-1, j-1) -> (i, j)`` needs ``ok_diag[i, j]``; ``(i, j-1) -> (i, j)`` is free."""
    p, q = cost.shape
    D = np.full((p, q), INF)
    for i in range(p):
        for j in range(q):
            if i == 0 and j == 0:
                best = -INF
            else:
                best = INF
                if i > 0 and j > 0 and ok_diag[i, j] and D[i - 1, j - 1] < best:
                    best = D[i - 1, j - 1]
                if i > 0 and ok_down[i, j] and D[i - 1, j] < best:
                    best = D[i - 1, j]
                if j > 0 and D[i, j - 1] < best:
                    best = D[i, j - 1]
            if best == INF:
                continue
            c = cost[i, j]
            D[i, j] = c if c > best else best
    return D


def traceback(D, ok_down=None, ok_diag=None):
    """Recover a coupling realizing ``D[-1, -1]``; prefers diagonal, then down, then right."""
    i, j = D.shape[0] - 1, D.shape[1] - 1
    if not np.isfinite(D[i, j]):
        raise ValueError("no admissible coupling")
    pairs = [(i, j)]
    while i > 0 or j > 0:
        level = D[i, j]
        if i > 0 and j > 0 and (ok_diag is None or ok_diag[i, j]) and D[i - 1, j - 1] <= level:
            i, j = i - 1, j - 1
        elif i > 0 and (ok_down is None or ok_down[i, j]) and D[i - 1, j] <= level:
            i -= 1
        elif j > 0 and D[i, j - 1] <= level:
            j -= 1
        else:  # pragma: no cover - D is consistent by construction
            raise RuntimeError("inconsistent bottleneck table")
        pairs.append((i, j))
    return np.array(pairs[::-1], dtype=np.int64)


def threshold_search(dt, cost):
    """Minimize ``alpha + U(alpha)`` over candidate thresholds ``alpha``.

    ``U(alpha)`` is the bottleneck cost over couplings restricted to cells
    with ``dt <= alpha``.  The optimum sits at some entry of ``dt``; the
    candidate list is searched by bisection with interval pruning, which is
    exact because ``U`` is nonincreasing.  Returns ``(value, alpha, U(alpha), n_evals)``.
    """
    dt = np.ascontiguousarray(dt, dtype=float)
    cost = np.ascontiguousarray(cost, dtype=float)
    cands = np.unique(dt)
    floor = max(dt[0, 0], dt[-1, -1])
    lo = int(np.searchsorted(cands, floor))
    cache = {}

    def U(k):
        if k not in cache:
            cache[k] = bottleneck_value(dt, cost, cands[k])
        return cache[k]

    hi_all = cands.size - 1
    # first feasible candidate
    if not np.isfinite(U(hi_all)):
        raise ValueError("no admissible coupling")
    a, b = lo, hi_all
    while a < b:
        mid = (a + b) // 2
        if np.isfinite(U(mid)):
            b = mid
        else:
            a = mid + 1
    lo = a
    best = [cands[lo] + U(lo), lo]

    def consider(k):
        val = cands[k] + U(k)
        if val < best[0]:
            best[0], best[1] = val, k

    hi = int(np.searchsorted(cands, best[0], side="left")) - 1
    hi = max(hi, lo)
    consider(hi)
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        if b - a <= 1:
            continue
        if U(a) == U(b):
            continue
        if cands[a + 1] + U(b) >= best[0]:
            continue
        mid = (a + b) // 2
        consider(mid)
        stack.append((mid, b))
        stack.append((a, mid))
    k = best[1]
    return float(best[0]), float(cands[k]), float(U(k)), len(cache)


# --------------------------------------------------------------------------
# continuous free-space decision for two polylines in the (t, z) plane


@njit(cache=True)
def _free_interval(ct, dt, cz, dz, alpha, beta):
    """Parameters ``s`` in [0, 1] with ``|ct - s dt| <= alpha`` and ``|cz - s dz| <= beta``."""
    lo, hi = 0.0, 1.0
    for c, d, r in ((ct, dt, alpha), (cz, dz, beta)):
        if d == 0.0:
            if abs(c) > r:
                return 1.0, 0.0
        else:
            a = (c - r) / d
            b = (c + r) / d
            if a > b:
                a, b = b, a
            if a > lo:
                lo = a
            if b < hi:
                hi = b
    return lo, hi


@njit(cache=True)
def polyline_decide(tp, zp, tq, zq, alpha, beta):
    """Is there a monotone joint parametrization of two polylines keeping
    the time gap within ``alpha`` and the value gap within ``beta``?

    Every cell of the free space is convex (an intersection of two slabs), so
    reachable intervals propagate edge by edge.
    """
    p = tp.size
    q = tq.size
    if abs(tp[0] - tq[0]) > alpha or abs(zp[0] - zq[0]) > beta:
        return False
    if abs(tp[p - 1] - tq[q - 1]) > alpha or abs(zp[p - 1] - zq[q - 1]) > beta:
        return False
    # reachable intervals: left edges (P vertex k, Q segment l), bottom edges (P segment k, Q vertex l)
    L = np.empty((p, max(q - 1, 1), 2))
    B = np.empty((max(p - 1, 1), q, 2))
    L[:, :, 0] = 1.0
    L[:, :, 1] = 0.0
    B[:, :, 0] = 1.0
    B[:, :, 1] = 0.0
    ok = True
    for l in range(q - 1):
        lo, hi = _free_interval(tp[0] - tq[l], tq[l + 1] - tq[l], zp[0] - zq[l], zq[l + 1] - zq[l], alpha, beta)
        if not ok or lo > 0.0 or lo > hi:
            break
        L[0, l, 0], L[0, l, 1] = 0.0, hi
        ok = hi >= 1.0
    ok = True
    for k in range(p - 1):
        lo, hi = _free_interval(tq[0] - tp[k], tp[k + 1] - tp[k], zq[0] - zp[k], zp[k + 1] - zp[k], alpha, beta)
        if not ok or lo > 0.0 or lo > hi:
            break
        B[k, 0, 0], B[k, 0, 1] = 0.0, hi
        ok = hi >= 1.0
    for k in range(p - 1):
        for l in range(q - 1):
            has_l = L[k, l, 0] <= L[k, l, 1]
            has_b = B[k, l, 0] <= B[k, l, 1]
            if not (has_l or has_b):
                continue
            # top edge: P segment k against Q vertex l + 1
            lo, hi = _free_interval(tq[l + 1] - tp[k], tp[k + 1] - tp[k], zq[l + 1] - zp[k], zp[k + 1] - zp[k],
                                    alpha, beta)
            if not has_l and B[k, l, 0] > lo:
                lo = B[k, l, 0]
            if lo <= hi:
                B[k, l + 1, 0], B[k, l + 1, 1] = lo, hi
            # right edge: P vertex k + 1 against Q segment l
            lo, hi = _free_interval(tp[k + 1] - tq[l], tq[l + 1] - tq[l], zp[k + 1] - zq[l], zq[l + 1] - zq[l],
                                    alpha, beta)
            if not has_b and L[k, l, 0] > lo:
                lo = L[k, l, 0]
            if lo <= hi:
                L[k + 1, l, 0], L[k + 1, l, 1] = lo, hi
    if p == 1 and q == 1:
        return True
    if p == 1:
        return L[0, q - 2, 1] >= 1.0
    if q == 1:
        return B[p - 2, 0, 1] >= 1.0
    return L[p - 1, q - 2, 1] >= 1.0 and L[p - 1, q - 2, 0] <= L[p - 1, q - 2, 1] or (
        B[p - 2, q - 1, 1] >= 1.0 and B[p - 2, q - 1, 0] <= B[p - 2, q - 1, 1]
    )


# --------------------------------------------------------------------------
# window scans for the moduli
#
# A window is the sequence [pre], first, ev[i0:i1], last, [post]; ``pre`` and
# ``post`` are skipped when NaN.


@njit(cache=True)
def _gather(ev, pre, first, i0, i1, last, post, buf):
    m = 0
    if not np.isnan(pre):
        buf[m] = pre
        m += 1
    buf[m] = first
    m += 1
    for i in range(i0, i1):
        buf[m] = ev[i]
        m += 1
    buf[m] = last
    m += 1
    if not np.isnan(post):
        buf[m] = post
        m += 1
    return m


@njit(cache=True)
def window_ranges(ev, pre, first, i0, i1, last, post):
    out = np.empty(first.size)
    buf = np.empty(ev.size + 4)
    for w in range(first.size):
        m = _gather(ev, pre[w], first[w], i0[w], i1[w], last[w], post[w], buf)
        lo = buf[0]
        hi = buf[0]
        for i in range(1, m):
            if buf[i] < lo:
                lo = buf[i]
            if buf[i] > hi:
                hi = buf[i]
        out[w] = hi - lo
    return out


@njit(cache=True)
def window_m1_osc(ev, pre, first, i0, i1, last, post):
    """Largest distance from a middle entry to the interval spanned by an earlier and a later one."""
    out = np.empty(first.size)
    buf = np.empty(ev.size + 4)
    smin = np.empty(ev.size + 4)
    smax = np.empty(ev.size + 4)
    for w in range(first.size):
        m = _gather(ev, pre[w], first[w], i0[w], i1[w], last[w], post[w], buf)
        best = 0.0
        if m >= 3:
            smin[m - 1] = buf[m - 1]
            smax[m - 1] = buf[m - 1]
            for i in range(m - 2, -1, -1):
                smin[i] = min(smin[i + 1], buf[i])
                smax[i] = max(smax[i + 1], buf[i])
            pmin = buf[0]
            pmax = buf[0]
            for j in range(1, m - 1):
                v = buf[j]
                up = v - max(pmin, smin[j + 1])
                down = min(pmax, smax[j + 1]) - v
                if up > best:
                    best = up
                if down > best:
                    best = down
                pmin = min(pmin, v)
                pmax = max(pmax, v)
        out[w] = best
    return out


@njit(cache=True)
def partition_dp(entries, where, cands, delta, bound):
    """Smallest largest cell range over partitions cut at ``cands`` with cells longer than ``delta``.

    ``entries`` interleaves values and left limits on a grid; cut ``c`` sits at
    grid index ``where[c]``.  ``bound`` is the value of some admissible
    partition; partial chains that reach it are dropped.
    """
    n = cands.size
    best = np.full(n, INF)
    best[0] = 0.0
    best[n - 1] = bound
    for a in range(n - 1):
        if best[a] >= best[n - 1]:
            continue
        e = 2 * where[a]
        lo = entries[e]
        hi = entries[e]
        for b in range(a + 1, n):
            stop = 2 * where[b] - 1
            while e < stop:
                e += 1
                if entries[e] < lo:
                    lo = entries[e]
                if entries[e] > hi:
                    hi = entries[e]
            v = max(best[a], hi - lo)
            if v >= best[n - 1]:
                break
            if cands[b] - cands[a] > delta and v < best[b]:
                best[b] = v
    return best[n - 1]
