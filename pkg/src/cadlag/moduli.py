"""Moduli of continuity.

``omega``               largest oscillation over windows of width ``delta``
``omega_prime``         càdlàg modulus: best partition with mesh ``> delta``
``w_osc``               M1 oscillation around a single time
``omega_double_prime``  largest ``w_osc`` over all times

Paths are linear between nodes, so every supremum is taken over node
values, left limits and window edges.  Windows move continuously; the
critical window positions are those where an edge crosses a node, plus
(for the M1 oscillation on linear pieces) the positions where both window
edges carry the same value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .metrics import ground_metric
from .paths import TOL, CadlagPath, _left_rows, _rows

KINDS = ("omega", "omega_prime", "omega_double_prime")

# step paths with at most this many jumps get the exact cut candidates in omega_prime
CHAIN_LIMIT = 24


def _check_delta(delta):
    delta = float(delta)
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    return delta


def _scalar(path):
    if path.dim != 1:
        raise ValueError("this modulus is defined for scalar paths only")


def _diameter(rows, metric):
    if rows.shape[0] < 2:
        return 0.0
    if rows.shape[1] == 1 and metric.func is None:
        return float(np.ptp(rows[:, 0]))
    return float(metric(rows[:, None, :], rows[None, :, :]).max())


def _window(path, lo, hi, with_left=False, with_right=False):
    """Rows met on ``[lo, hi)`` in time order, ending with the left limit at ``hi``.

    ``with_left`` prepends ``f(lo-)``; ``with_right`` appends ``f(hi)``.
    """
    t = path.times
    inner = t[(t > lo) & (t < hi)]
    k = path.dim
    mid = np.empty((2 * inner.size, k))
    mid[0::2] = _left_rows(path, inner)
    mid[1::2] = _rows(path, inner)
    parts = []
    if with_left and lo > 0:
        parts.append(_left_rows(path, [lo]))
    parts += [_rows(path, [lo]), mid, _left_rows(path, [hi])]
    if with_right:
        parts.append(_rows(path, [hi]))
    return np.vstack(parts)


def _scan(f, lo, hi, with_left, with_right, kernel):
    """Run a window kernel over the windows ``[lo[w], hi[w])`` of a scalar path.

    ``with_left`` / ``with_right`` are boolean arrays adding ``f(lo-)`` in front
    or ``f(hi)`` at the back of each window.
    """
    t, v, lf = f.times, f.values[:, 0], f.lefts[:, 0]
    ev = np.empty(2 * t.size - 1)
    ev[0] = v[0]
    ev[1::2] = lf[1:]
    ev[2::2] = v[1:]
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    a = np.searchsorted(t, lo, side="right")
    b = np.searchsorted(t, hi, side="left")
    i0 = 2 * a - 1
    i1 = np.maximum(2 * b - 1, i0)
    first = np.atleast_1d(f.evaluate(lo)).astype(float)
    last = np.atleast_1d(f.left_limit(hi)).astype(float)
    use_pre = np.asarray(with_left) & (lo > 0)
    pre = np.full(lo.size, np.nan)
    if use_pre.any():
        pre[use_pre] = f.left_limit(lo[use_pre])
    use_post = np.broadcast_to(np.asarray(with_right), lo.shape)
    post = np.full(lo.size, np.nan)
    if use_post.any():
        post[use_post] = f.evaluate(hi[use_post])
    return kernel(ev, pre, first, i0, i1, last, post)


def _starts(path, width):
    """Window starts where an edge meets a node, clipped to ``[0, T - width]``."""
    T = path.horizon
    top = T - width
    s = np.concatenate([path.times, path.times - width, [0.0, top]])
    return np.unique(s[(s >= 0) & (s <= top)])


# --------------------------------------------------------------------------
# omega


def omega(f: CadlagPath, delta, d_E=None) -> float:
    """``sup_{|t-s| < delta} d_E(f(t), f(s))``, exact."""
    delta = _check_delta(delta)
    metric = ground_metric(d_E)
    T = f.horizon
    if delta >= T:
        rows = np.vstack([f.values, f.lefts[1:]])
        return _diameter(rows, metric)
    starts = _starts(f, delta)
    variants = ((False, False), (True, False), (False, True))
    if f.dim == 1 and metric.func is None:
        hi = starts + delta
        return float(max(_scan(f, starts, hi, wl, wr, _kernels.window_ranges).max() for wl, wr in variants))
    best = 0.0
    for c in starts:
        for wl, wr in variants:
            best = max(best, _diameter(_window(f, c, c + delta, wl, wr), metric))
    return best


# --------------------------------------------------------------------------
# omega_prime


def _cut_candidates(f: CadlagPath, deltas):
    T = f.horizon
    jumps = f.jump_times()
    jumps = jumps[jumps < T]
    parts = [[0.0, T], jumps]
    for d in deltas:
        if d >= T:
            continue
        parts.append(np.arange(0.0, T, d / 4.0))
        if f.is_step and jumps.size <= CHAIN_LIMIT:
            # leftmost placements of an optimal partition: chains of (almost) minimal
            # intervals starting at 0, at a jump, or just after a jump
            eta = 1e-9 * T
            origins = np.concatenate([[0.0], jumps, jumps + eta])
            k = np.arange(1, int(T / d) + 2)
            parts.append((origins[:, None] + k[None, :] * (d + eta)).ravel())
    c = np.unique(np.concatenate(parts))
    return c[(c >= 0) & (c <= T)]


def _jump_partition(f, delta, cands, entries, where):
    """Value of the greedy partition cut at jump times (a feasible upper bound)."""
    T = f.horizon
    keep = np.isin(cands, f.jump_times()) & (cands > 0) & (cands < T)
    cuts = [0]
    for c in np.flatnonzero(keep):
        if cands[c] - cands[cuts[-1]] > delta and T - cands[c] > delta:
            cuts.append(c)
    cuts.append(cands.size - 1)
    worst = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        cell = entries[2 * where[a] : 2 * where[b]]
        worst = max(worst, float(cell.max() - cell.min()))
    return worst


def _omega_prime_on(f: CadlagPath, delta, cands, metric):
    T = f.horizon
    grid = np.union1d(cands, f.times)
    entries = np.empty((2 * grid.size - 1, f.dim))
    entries[0::2] = _rows(f, grid)
    entries[1::2] = _left_rows(f, grid[1:])
    where = np.searchsorted(grid, cands)
    if f.dim == 1 and metric.func is None:
        bound = _jump_partition(f, delta, cands, entries[:, 0], where)
        if bound == 0.0:
            return 0.0
        return float(_kernels.partition_dp(entries[:, 0], where, cands, delta, bound))
    best = np.full(cands.size, np.inf)
    best[0] = 0.0
    for a in range(cands.size - 1):
        if not np.isfinite(best[a]):
            continue
        ok = np.flatnonzero(cands[a + 1 :] - cands[a] > delta) + a + 1
        if ok.size == 0:
            continue
        seg = entries[2 * where[a] :]
        D = metric(seg[:, None, :], seg[None, :, :])
        run = np.maximum.accumulate(np.tril(D).max(axis=1))
        # [c_a, c_b) ends with the left limit at c_b
        osc = run[2 * (where[ok] - where[a]) - 1]
        best[ok] = np.minimum(best[ok], np.maximum(best[a], osc))
    return float(best[-1])


def omega_prime(f: CadlagPath, delta, d_E=None, candidates=None) -> float:
    """``inf`` over partitions ``0 = t_0 < ... < t_k = T`` with all ``t_i - t_{i-1} > delta``
    of the largest oscillation of ``f`` on a cell ``[t_{i-1}, t_i)``.

    Cuts are searched among the jump times, a grid of pitch ``delta / 4`` and,
    for step paths with few jumps, the chains that make the result exact.
    ``candidates`` overrides the cut set (0 and ``T`` are always added).
    """
    delta = _check_delta(delta)
    T = f.horizon
    if delta >= T:
        raise ValueError(f"no partition of [0, {T:g}] has mesh above {delta:g}")
    metric = ground_metric(d_E)
    if candidates is None:
        cands = _cut_candidates(f, [delta])
    else:
        c = np.asarray(candidates, dtype=float)
        cands = np.union1d(c[(c >= 0) & (c <= T)], [0.0, T])
    return _omega_prime_on(f, delta, cands, metric)


# --------------------------------------------------------------------------
# M1 oscillation


def w_osc(f: CadlagPath, t, delta) -> float:
    """``sup d(f(t2), [f(t1), f(t3)])`` over ``t1 < t2 < t3`` in the open window
    ``(t - delta, t + delta)`` clipped to ``[0, T]``."""
    delta = _check_delta(delta)
    _scalar(f)
    T = f.horizon
    t = float(t)
    if not 0 <= t <= T:
        raise ValueError(f"time {t:g} outside [0, {T:g}]")
    lo, hi = max(0.0, t - delta), min(T, t + delta)
    return float(_scan(f, [lo], [hi], False, False, _kernels.window_m1_osc)[0])


def _crossings(f, starts, width):
    """Window starts inside linear stretches where both window edges carry the same value."""
    if f.is_step or starts.size < 2:
        return np.empty(0)
    s0, s1 = starts[:-1], starts[1:]
    keep = s1 - s0 > TOL
    s0, s1 = s0[keep], s1[keep]
    l0, l1 = f.evaluate(s0), f.left_limit(s1)
    r0, r1 = f.evaluate(s0 + width), f.left_limit(s1 + width)
    h = s1 - s0
    rate = ((l1 - l0) - (r1 - r0)) / h
    with np.errstate(divide="ignore", invalid="ignore"):
        x = s0 + (r0 - l0) / rate
    ok = np.isfinite(x) & (x > s0) & (x < s1)
    return x[ok]


def omega_double_prime(f: CadlagPath, delta) -> float:
    """``sup_t w_osc(f, t, delta)``, exact over the critical window positions."""
    delta = _check_delta(delta)
    _scalar(f)
    T = f.horizon
    width = 2.0 * delta
    osc = _kernels.window_m1_osc
    if width >= T:
        return float(_scan(f, [0.0], [T], False, False, osc)[0])
    starts = _starts(f, width)
    hi = starts + width
    best = max(
        _scan(f, starts, hi, False, False, osc).max(),
        _scan(f, starts, hi, True, False, osc).max(),
        _scan(f, starts, hi, False, hi < T, osc).max(),
    )
    cross = _crossings(f, starts, width)
    if cross.size:
        best = max(best, _scan(f, cross, cross + width, False, False, osc).max())
    return float(best)


def endpoint_oscillations(f: CadlagPath, delta, d_E=None):
    """``(d(f(delta), f(0)), d(f(T-), f(T - delta)))``."""
    delta = _check_delta(delta)
    T = f.horizon
    if delta >= T:
        raise ValueError(f"delta must be below the horizon {T:g}")
    metric = ground_metric(d_E)
    first = metric(_rows(f, [delta]), _rows(f, [0.0]))[0]
    last = metric(_left_rows(f, [T]), _rows(f, [T - delta]))[0]
    return float(first), float(last)


# --------------------------------------------------------------------------
# ladders


@dataclass(frozen=True)
class ModulusCurve:
    kind: str
    deltas: np.ndarray
    values: np.ndarray

    def is_monotone(self, tol=1e-12) -> bool:
        order = np.argsort(self.deltas)
        return bool(np.all(np.diff(self.values[order]) >= -tol))

    def to_rows(self):
        return [(float(d), float(v)) for d, v in zip(self.deltas, self.values)]


def _kind(kind):
    aliases = {"omegaprime": "omega_prime", "omegadoubleprime": "omega_double_prime"}
    kind = aliases.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown modulus {kind!r}; use one of {KINDS}")
    return kind


def modulus_ladder(f: CadlagPath, deltas, kind="omega", d_E=None) -> ModulusCurve:
    """Evaluate a modulus along a ladder of ``delta`` values.

    ``omega_prime`` uses one cut set for the whole ladder, so the curve is
    monotone in ``delta`` by construction.
    """
    kind = _kind(kind)
    deltas = np.array([_check_delta(d) for d in deltas])
    if kind == "omega":
        vals = [omega(f, d, d_E) for d in deltas]
    elif kind == "omega_double_prime":
        vals = [omega_double_prime(f, d) for d in deltas]
    else:
        metric = ground_metric(d_E)
        cands = _cut_candidates(f, deltas)
        vals = [_omega_prime_on(f, d, cands, metric) if d < f.horizon else np.nan for d in deltas]
    return ModulusCurve(kind, deltas, np.asarray(vals, dtype=float))


def modulus(f: CadlagPath, delta, kind="omega", d_E=None) -> float:
    kind = _kind(kind)
    if kind == "omega":
        return omega(f, delta, d_E)
    if kind == "omega_prime":
        return omega_prime(f, delta, d_E)
    return omega_double_prime(f, delta)
