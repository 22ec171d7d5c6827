"""Distances between càdlàg paths.

Every distance returns a :class:`DistanceReport` carrying the value, a
witness (a :class:`~cadlag.paths.TimeChange` for J1, a graph coupling for
M1), the method used and an error bound.

J1 between step paths is computed exactly.  Both paths are constant between
jumps, so the objective only depends on how the jumps of ``f`` are
interleaved with the jumps of ``g`` after the time change.  For a given time
budget ``alpha`` the best interleaving is a bottleneck path through the grid
of level pairs; the optimum is attained at one of the values ``|a_i - b_j|``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .paths import (
    SCHEMA_VERSION,
    TOL,
    CadlagPath,
    CompletedGraph,
    TimeChange,
    _left_rows,
    _rows,
    apply_time_change,
    completed_graph,
    coordinates,
    log_slope_norm,
    restrict,
    sup_deviation,
)

PENALTIES = ("absolute", "log_slope")


# --------------------------------------------------------------------------
# ground metrics and reports


@dataclass(frozen=True)
class GroundMetric:
    """Distance on the range space, applied row-wise to arrays of shape (..., k).

    ``name`` is one of ``"abs"``, ``"euclidean"``, ``"max"``; a custom
    ``func(x, y) -> float`` on 1-D vectors may be supplied instead.
    """

    name: str = "abs"
    func: Callable | None = None

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.func is not None:
            x, y = np.broadcast_arrays(x, y)
            k = x.shape[-1]
            flat = [self.func(u, v) for u, v in zip(x.reshape(-1, k), y.reshape(-1, k))]
            return np.asarray(flat, dtype=float).reshape(x.shape[:-1])
        diff = x - y
        if self.name == "max":
            return np.abs(diff).max(axis=-1)
        return np.sqrt(np.square(diff).sum(axis=-1))

    def spot_check(self, dim=1, n=30, seed=0, tol=1e-9) -> bool:
        """Check symmetry, positivity, identity and the triangle inequality on random triples."""
        rng = np.random.default_rng(seed)
        x, y, z = rng.normal(size=(3, n, dim))
        dxy, dyx = self(x, y), self(y, x)
        return bool(
            np.all(np.abs(dxy - dyx) <= tol)
            and np.all(dxy >= 0)
            and np.all(np.abs(self(x, x)) <= tol)
            and np.all(self(x, z) <= dxy + self(y, z) + tol)
        )


def ground_metric(spec=None) -> GroundMetric:
    if spec is None:
        return GroundMetric("abs")
    if isinstance(spec, GroundMetric):
        return spec
    if callable(spec):
        return GroundMetric(getattr(spec, "__name__", "custom"), spec)
    if spec not in ("abs", "euclidean", "max"):
        raise ValueError(f"unknown ground metric {spec!r}")
    return GroundMetric(spec)


@dataclass(frozen=True)
class GraphCoupling:
    """Monotone coupling of the vertices of two (densified) completed graphs."""

    left: CompletedGraph
    right: CompletedGraph
    pairs: np.ndarray

    def gaps(self):
        i, j = self.pairs[:, 0], self.pairs[:, 1]
        dt = np.abs(self.left.t[i] - self.right.t[j])
        dz = np.abs(self.left.z[i] - self.right.z[j])
        return dt, dz

    def objective(self) -> float:
        dt, dz = self.gaps()
        return float(dt.max() + dz.max())

    def to_dict(self):
        return {"pairs": self.pairs.tolist(), "left_vertices": self.left.vertices().tolist(),
                "right_vertices": self.right.vertices().tolist()}


@dataclass(frozen=True)
class DistanceReport:
    value: float
    witness: object = None
    method: str = "exact"
    error_bound: float = 0.0
    metric: str = ""
    details: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        w = self.witness
        if isinstance(w, tuple):
            w = [x.to_dict() for x in w]
        elif w is not None:
            w = w.to_dict()
        details = {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in self.details.items()}
        return {
            "schema_version": SCHEMA_VERSION,
            "metric": self.metric,
            "value": float(self.value),
            "method": self.method,
            "error_bound": float(self.error_bound),
            "witness": w,
            "details": details,
        }


def _check_pair(f: CadlagPath, g: CadlagPath):
    if f.horizon != g.horizon:
        raise ValueError(f"horizon mismatch: {f.horizon:g} vs {g.horizon:g}")
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")


def _penalty(name):
    if name in ("absolute", "abs", "j1"):
        return "absolute"
    if name in ("log_slope", "log", "j1log"):
        return "log_slope"
    raise ValueError(f"unknown penalty {name!r}; use one of {PENALTIES}")


def _penalty_value(lam: TimeChange, penalty: str) -> float:
    return sup_deviation(lam) if penalty == "absolute" else log_slope_norm(lam)


# --------------------------------------------------------------------------
# uniform


def _sup_gap(f, g, metric):
    s = np.union1d(f.times, g.times)
    d = float(metric(_rows(f, s), _rows(g, s)).max())
    if s.size > 1:
        d = max(d, float(metric(_left_rows(f, s[1:]), _left_rows(g, s[1:])).max()))
    return d


def uniform_distance(f: CadlagPath, g: CadlagPath, d_E=None) -> DistanceReport:
    """``sup_t d_E(f(t), g(t))``, exact on the merged breakpoints and left limits."""
    _check_pair(f, g)
    metric = ground_metric(d_E)
    return DistanceReport(_sup_gap(f, g, metric), None, "exact", 0.0, "uniform")


def j1_objective(f, g, lam: TimeChange, penalty="absolute", d_E=None) -> float:
    """``||f∘lam - g|| + penalty(lam)`` evaluated exactly."""
    penalty = _penalty(penalty)
    metric = ground_metric(d_E)
    return _sup_gap(apply_time_change(f, lam), g, metric) + _penalty_value(lam, penalty)


# --------------------------------------------------------------------------
# J1 between step paths


def _step_data(path: CadlagPath):
    """Interior jump times, the level sequence and the terminal value."""
    mask = path.jump_mask()
    interior = np.flatnonzero(mask[:-1])
    a = path.times[interior]
    levels = np.vstack([path.values[:1], path.values[interior]])
    return a, levels, path.values[-1]


def _j1_step_absolute(f, g, metric):
    T = f.horizon
    a, F, fT = _step_data(f)
    b, G, gT = _step_data(g)
    m, n = a.size, b.size
    C = metric(F[:, None, :], G[None, :, :])
    cT = float(metric(fT, gT))
    bb = np.concatenate([[0.0], b, [T]])
    gaps = np.abs(a[:, None] - b[None, :])
    cands = np.unique(np.concatenate([[0.0], gaps.ravel()]))
    slack = 8 * np.finfo(float).eps * max(1.0, T)

    best_val, best = np.inf, None
    for alpha in cands:
        if alpha >= best_val:
            break
        ok_down = np.zeros((m + 1, n + 1), dtype=bool)
        ok_down[1:, :] = (a[:, None] + alpha + slack >= bb[None, :-1]) & (
            a[:, None] - alpha - slack <= bb[None, 1:]
        )
        ok_diag = np.zeros((m + 1, n + 1), dtype=bool)
        ok_diag[1:, 1:] = gaps <= alpha + slack
        D = _kernels.masked_bottleneck_table(C, ok_down, ok_diag)
        val = alpha + max(D[-1, -1], cT)
        if val < best_val:
            best_val, best = val, (alpha, D, ok_down, ok_diag)

    alpha, D, ok_down, ok_diag = best
    pairs = _kernels.traceback(D, ok_down, ok_diag)
    lam = _interleaving_time_change(a, b, T, alpha, pairs)
    details = {"alpha": float(alpha), "uniform_part": float(best_val - alpha), "n_candidates": int(cands.size)}
    return float(best_val), lam, details


def _interleaving_time_change(a, b, T, alpha, pairs):
    """Strictly increasing time change realizing an interleaving up to a tiny nudge."""
    m = a.size
    if m == 0:
        return TimeChange.identity(T)
    bb = np.concatenate([[0.0], b, [T]])
    pos = np.empty(m)
    lo_gap = np.empty(m)
    hi_gap = np.empty(m)
    fixed = np.zeros(m, dtype=bool)
    for (i0, j0), (i1, j1) in zip(pairs[:-1], pairs[1:]):
        if i1 == i0:
            continue
        k = i1 - 1
        if j1 == j0 + 1:
            pos[k] = b[j1 - 1]
            fixed[k] = True
        else:
            lo_gap[k], hi_gap[k] = bb[j1], bb[j1 + 1]
            lo = max(bb[j1], a[k] - alpha)
            hi = min(bb[j1 + 1], a[k] + alpha)
            pos[k] = min(max(a[k], lo), hi)
    # the infimum can need jumps squeezed onto a gap end; spread them just
    # beyond the normalization tolerance so no level is merged away
    step = np.zeros(m)
    step[~fixed] = np.minimum(10 * TOL * T, (hi_gap[~fixed] - lo_gap[~fixed]) / (m + 2))
    prev = 0.0
    for k in range(m):
        if not fixed[k]:
            pos[k] = max(pos[k], lo_gap[k] + step[k], prev + step[k])
        prev = pos[k]
    nxt = T
    for k in range(m - 1, -1, -1):
        if not fixed[k]:
            pos[k] = min(pos[k], hi_gap[k] - step[k], nxt - step[k])
        nxt = pos[k]
    return TimeChange.through(zip(pos, a), T)


def _block_walk(C, a, b, A, B, i0, j0, i1, j1):
    """States visited between two consecutive matched anchors of a linear time change."""
    sigma = (A[i1] - A[i0]) / (B[j1] - B[j0])
    fpos = B[j0] + (a[i0 : i1 - 1] - A[i0]) / sigma
    gpos = b[j0 : j1 - 1]
    i, j, p, q = i0, j0, 0, 0
    u = -np.inf
    while p < fpos.size or q < gpos.size:
        if q == gpos.size or (p < fpos.size and fpos[p] < gpos[q]):
            i, p = i + 1, p + 1
        elif p == fpos.size or gpos[q] < fpos[p]:
            j, q = j + 1, q + 1
        else:
            i, j, p, q = i + 1, j + 1, p + 1, q + 1
        u = max(u, C[i, j])
    return abs(math.log(sigma)), u


def _pareto(entries):
    entries.sort(key=lambda e: (e[0], e[1]))
    out, best_u = [], np.inf
    for e in entries:
        if e[1] < best_u:
            out.append(e)
            best_u = e[1]
    return out


def _j1_step_anchored(f, g, metric, penalty):
    """Optimize over time changes that are linear between matched jump pairs.

    Pareto dynamic program over anchors ``(i, j)`` (f-jump ``i`` sent onto
    g-jump ``j``); each front entry holds (penalty so far, uniform part so far).
    """
    T = f.horizon
    a, F, fT = _step_data(f)
    b, G, gT = _step_data(g)
    m, n = a.size, b.size
    C = metric(F[:, None, :], G[None, :, :])
    cT = float(metric(fT, gT))
    A = np.concatenate([[0.0], a, [T]])
    B = np.concatenate([[0.0], b, [T]])
    end = (m + 1, n + 1)
    anchors = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)] + [end]
    fronts = {(0, 0): [(0.0, float(C[0, 0]), None, -1)]}
    for i1, j1 in anchors:
        own = cT if (i1, j1) == end else float(C[i1, j1])
        entries = []
        for (i0, j0), front in fronts.items():
            if i0 >= i1 or j0 >= j1:
                continue
            sig, u_blk = _block_walk(C, a, b, A, B, i0, j0, i1, j1)
            if (i1, j1) == end:
                # last state before T is (m, n)
                u_blk = max(u_blk, float(C[m, n]))
            time_cost = sig if penalty == "log_slope" else abs(A[i1] - B[j1])
            for k, (pen, u, _, _) in enumerate(front):
                entries.append((max(pen, time_cost), max(u, u_blk, own), (i0, j0), k))
        fronts[(i1, j1)] = _pareto(entries)

    final = fronts[end]
    k = int(np.argmin([e[0] + e[1] for e in final]))
    pen, u = final[k][0], final[k][1]
    matched = []
    node, idx = end, k
    while node != (0, 0):
        entry = fronts[node][idx]
        if node != end:
            matched.append((B[node[1]], A[node[0]]))
        node, idx = entry[2], entry[3]
    lam = TimeChange.through(matched, T)
    details = {"penalty_part": float(pen), "uniform_part": float(u), "matched": len(matched)}
    return float(pen + u), lam, details


# --------------------------------------------------------------------------
# J1 on paths with linear pieces


def _entries(path: CadlagPath, grid):
    """Sequence of (time, value) entries on ``grid``; a jump contributes its left limit first."""
    vals = _rows(path, grid)
    lefts = np.vstack([vals[:1], _left_rows(path, grid[1:])])
    jump = np.abs(vals - lefts).max(axis=1) > TOL
    jump[0] = False
    reps = 1 + jump
    t = np.repeat(grid, reps)
    v = np.repeat(vals, reps, axis=0)
    pos = np.cumsum(reps) - 1
    v[pos[jump] - 1] = lefts[jump]
    return t, v


def _max_slope(path: CadlagPath):
    slopes = (path.lefts[1:] - path.values[:-1]) / np.diff(path.times)[:, None]
    return float(np.abs(slopes).max()) if slopes.size else 0.0


def _coupling_time_change(tf, tg, pairs, T):
    pts, last_s, last_l = [], 0.0, 0.0
    for i, j in pairs:
        s, l = tg[j], tf[i]
        if last_s < s < T and last_l < l < T:
            pts.append((s, l))
            last_s, last_l = s, l
    return TimeChange.through(pts, T)


def _j1_discretized(f, g, metric, penalty, resolution):
    T = f.horizon
    grid = np.union1d(np.union1d(f.times, g.times), np.linspace(0.0, T, max(2, resolution)))
    grid = grid[np.concatenate([[True], np.diff(grid) > TOL])]
    grid[-1] = T
    tf, vf = _entries(f, grid)
    tg, vg = _entries(g, grid)
    dt = np.abs(tf[:, None] - tg[None, :])
    cost = metric(vf[:, None, :], vg[None, :, :])
    disc, alpha, _, n_evals = _kernels.threshold_search(dt, cost)
    D = _kernels.bottleneck_table(dt, cost, alpha)
    pairs = _kernels.traceback(D)

    candidates = [TimeChange.identity(T), _coupling_time_change(tf, tg, pairs, T)]
    scored = [(j1_objective(f, g, lam, penalty, metric), lam) for lam in candidates]
    value, lam = min(scored, key=lambda s: s[0])

    h = float(np.diff(grid).max())
    slack = h * (1.0 + _max_slope(f) + _max_slope(g))
    lower = max(0.0, disc - slack)
    if penalty == "log_slope":
        # ||lam - id|| <= T (exp(||lam||°) - 1) turns the J1 bound into one for the log penalty
        lower = min(lower, math.log1p(lower / T))
    details = {"discrete_value": float(disc), "alpha": float(alpha), "grid_step": h, "threshold_evals": n_evals}
    return float(value), lam, max(0.0, value - lower), details


def j1_distance(f: CadlagPath, g: CadlagPath, penalty="absolute", d_E=None, resolution=200) -> DistanceReport:
    """Skorokhod J1 distance ``inf_lam ||f∘lam - g|| + penalty(lam)``.

    ``penalty="absolute"`` uses ``sup |lam - id|``; ``"log_slope"`` uses the
    log-slope norm, which gives the complete metric.  Step paths are handled
    exactly; paths with linear pieces fall back to a search on a time grid
    of ``resolution`` points with a nonzero error bound.
    """
    penalty = _penalty(penalty)
    _check_pair(f, g)
    metric = ground_metric(d_E)
    name = "j1" if penalty == "absolute" else "j1log"
    if f.is_step and g.is_step:
        if penalty == "absolute":
            value, lam, details = _j1_step_absolute(f, g, metric)
        else:
            value, lam, details = _j1_step_anchored(f, g, metric, penalty)
        details["witness_objective"] = j1_objective(f, g, lam, penalty, metric)
        return DistanceReport(value, lam, "exact", 0.0, name, details)
    value, lam, bound, details = _j1_discretized(f, g, metric, penalty, resolution)
    details["witness_objective"] = value
    return DistanceReport(value, lam, "discretized", bound, name, details)


def j1_oracle(f: CadlagPath, g: CadlagPath, penalty="absolute", d_E=None, max_jumps=8) -> DistanceReport:
    """Brute force over all monotone matchings of jump times.

    Each matching induces the piecewise-linear time change through the
    matched pairs; the objective is evaluated exactly on the composed path.
    """
    penalty = _penalty(penalty)
    _check_pair(f, g)
    if not (f.is_step and g.is_step):
        raise ValueError("the J1 oracle handles step paths only")
    metric = ground_metric(d_E)
    T = f.horizon
    a = f.jump_times()
    b = g.jump_times()
    a, b = a[a < T], b[b < T]
    if a.size + b.size > max_jumps:
        raise ValueError(f"{a.size + b.size} jumps exceed the oracle limit of {max_jumps}")
    best_val, best_lam, n_checked = np.inf, None, 0
    for k in range(min(a.size, b.size) + 1):
        for I in itertools.combinations(range(a.size), k):
            for J in itertools.combinations(range(b.size), k):
                lam = TimeChange.through([(b[j], a[i]) for i, j in zip(I, J)], T)
                val = j1_objective(f, g, lam, penalty, metric)
                n_checked += 1
                if val < best_val:
                    best_val, best_lam = val, lam
    name = "j1" if penalty == "absolute" else "j1log"
    return DistanceReport(best_val, best_lam, "exact", 0.0, name + "_oracle", {"matchings": n_checked})


# --------------------------------------------------------------------------
# M1


def _graph_pair(f, g):
    if f.dim != 1 or g.dim != 1:
        raise ValueError("M1 is implemented for scalar paths only")
    _check_pair(f, g)
    return completed_graph(f, extra_times=g.times), completed_graph(g, extra_times=f.times)


def _m1_bound(P: CompletedGraph, Q: CompletedGraph) -> float:
    # snapping a parametric representation to vertices moves each coordinate by <= one segment
    hp = P.segment_lengths().max() if len(P) > 1 else 0.0
    hq = Q.segment_lengths().max() if len(Q) > 1 else 0.0
    return float(2.0 * (hp + hq))


def _half_gaps(x):
    return np.abs(x[:, None] - x[None, :]).ravel() / 2.0


def _m1_critical(x, y):
    return np.unique(np.concatenate([[0.0], np.abs(x[:, None] - y[None, :]).ravel(), _half_gaps(x), _half_gaps(y)]))


def _m1_exact_steps(P: CompletedGraph, Q: CompletedGraph):
    """Exact M1 between completed graphs made of horizontal and vertical segments.

    For such graphs the optimal time and value thresholds are among the
    vertex gaps between the graphs and half gaps within one graph, so a
    staircase walk over the two candidate lists with the continuous
    free-space decision finds the optimum.
    """
    A = _m1_critical(P.t, Q.t)
    Bz = _m1_critical(P.z, Q.z)
    eps = 1e-12 * max(1.0, float(A[-1]), float(Bz[-1]))

    def feasible(a, b):
        return _kernels.polyline_decide(P.t, P.z, Q.t, Q.z, a + eps, b + eps)

    best, arg, n_evals = np.inf, (0.0, 0.0), 0
    j = Bz.size - 1
    for a in A:
        if a >= best:
            break
        n_evals += 1
        if not feasible(a, Bz[j]):
            continue
        while j > 0 and feasible(a, Bz[j - 1]):
            n_evals += 1
            j -= 1
        if a + Bz[j] < best:
            best, arg = a + Bz[j], (a, Bz[j])
    return float(best), arg, n_evals, 2 * eps


def m1_distance(f: CadlagPath, g: CadlagPath, resolution=2000, method="auto") -> DistanceReport:
    """M1 distance between completed graphs, ``inf ||lam_f - lam_g|| + ||rho_f - rho_g||``.

    For two step paths the value is exact (``method="exact"``).  Otherwise
    both graphs are put on a common time refinement and densified to at
    least ``resolution`` vertices; the optimum over monotone vertex couplings
    is an upper bound on the M1 distance and exceeds it by at most
    ``error_bound``.  ``method="discretized"`` forces the second route.
    """
    if method not in ("auto", "exact", "discretized"):
        raise ValueError(f"unknown method {method!r}")
    Pf, Pg = _graph_pair(f, g)
    if method == "exact" and not (f.is_step and g.is_step):
        raise ValueError("the exact M1 route handles step paths only")
    if method != "discretized" and f.is_step and g.is_step:
        value, (alpha, beta), n_evals, bound = _m1_exact_steps(Pf, Pg)
        # a vertex coupling at the optimal thresholds, as a readable witness
        P, Q = Pf.densify(min(resolution, 400)), Pg.densify(min(resolution, 400))
        dt = np.abs(P.t[:, None] - Q.t[None, :])
        dz = np.abs(P.z[:, None] - Q.z[None, :])
        _, a_w, _, _ = _kernels.threshold_search(dt, dz)
        coupling = GraphCoupling(P, Q, _kernels.traceback(_kernels.bottleneck_table(dt, dz, a_w)))
        details = {"time_part": alpha, "space_part": beta, "decisions": n_evals,
                   "witness_objective": coupling.objective()}
        return DistanceReport(value, coupling, "exact", bound, "m1", details)
    P, Q = Pf.densify(resolution), Pg.densify(resolution)
    dt = np.abs(P.t[:, None] - Q.t[None, :])
    dz = np.abs(P.z[:, None] - Q.z[None, :])
    value, alpha, beta, n_evals = _kernels.threshold_search(dt, dz)
    D = _kernels.bottleneck_table(dt, dz, alpha)
    coupling = GraphCoupling(P, Q, _kernels.traceback(D))
    details = {"time_part": alpha, "space_part": beta, "threshold_evals": n_evals,
               "vertices": [len(P), len(Q)]}
    return DistanceReport(value, coupling, "discretized", _m1_bound(P, Q), "m1", details)


def m1_oracle(f: CadlagPath, g: CadlagPath, max_vertices=40) -> DistanceReport:
    """Exact discrete M1 optimum by a dynamic program over full Pareto fronts.

    Independent of the threshold search used by :func:`m1_distance`; limited
    to ``max_vertices`` vertices in total after densification.
    """
    Pf, Pg = _graph_pair(f, g)
    if len(Pf) + len(Pg) > max_vertices:
        raise ValueError(f"{len(Pf) + len(Pg)} graph vertices exceed the oracle limit of {max_vertices}")
    spare = max_vertices - len(Pf) - len(Pg)
    P = Pf.densify(len(Pf) + spare // 2)
    Q = Pg.densify(len(Pg) + spare - spare // 2)
    p, q = len(P), len(Q)
    fronts = [[None] * q for _ in range(p)]
    for i in range(p):
        for j in range(q):
            dt = abs(P.t[i] - Q.t[j])
            dz = abs(P.z[i] - Q.z[j])
            if i == 0 and j == 0:
                fronts[0][0] = [(dt, dz, None, -1)]
                continue
            entries = []
            for pi, pj in ((i - 1, j - 1), (i - 1, j), (i, j - 1)):
                if pi < 0 or pj < 0:
                    continue
                for k, (ta, za, _, _) in enumerate(fronts[pi][pj]):
                    entries.append((max(ta, dt), max(za, dz), (pi, pj), k))
            fronts[i][j] = _pareto(entries)
    final = fronts[p - 1][q - 1]
    k = int(np.argmin([e[0] + e[1] for e in final]))
    pairs, cell, idx = [], (p - 1, q - 1), k
    while cell is not None:
        pairs.append(cell)
        entry = fronts[cell[0]][cell[1]][idx]
        cell, idx = entry[2], entry[3]
    coupling = GraphCoupling(P, Q, np.array(pairs[::-1], dtype=np.int64))
    value = final[k][0] + final[k][1]
    details = {"time_part": final[k][0], "space_part": final[k][1], "front_size": len(final)}
    return DistanceReport(float(value), coupling, "discretized", _m1_bound(P, Q), "m1_oracle", details)


# --------------------------------------------------------------------------
# products and the half-line


def _as_components(x):
    if isinstance(x, CadlagPath):
        return coordinates(x)
    return list(x)


def weak_product_j1(fs, gs, penalty="absolute", resolution=200) -> DistanceReport:
    """Max over coordinates of the scalar J1 distances, one time change per coordinate."""
    fs, gs = _as_components(fs), _as_components(gs)
    if len(fs) != len(gs) or not fs:
        raise ValueError("coordinate tuples must be nonempty and of equal length")
    reports = [j1_distance(f, g, penalty, resolution=resolution) for f, g in zip(fs, gs)]
    value = max(r.value for r in reports)
    method = "exact" if all(r.method == "exact" for r in reports) else "discretized"
    bound = max(r.error_bound for r in reports)
    details = {"per_coordinate": [r.value for r in reports]}
    return DistanceReport(value, tuple(r.witness for r in reports), method, bound, "weakj1", details)


def halfline_distance(f: CadlagPath, g: CadlagPath, penalty="absolute", n_grid=100, horizon=None,
                      perturb=1e-6, d_E=None, resolution=200) -> DistanceReport:
    """Distance on paths over ``[0, inf)`` approximated on ``[0, horizon]``.

    Riemann sum of ``exp(-u) * min(1, d_J1(f|[0,u], g|[0,u]))`` over a grid of
    restriction horizons ``u``.  Grid points hitting a jump time are moved by
    ``perturb * horizon`` so every restriction ends at a continuity point.
    """
    _check_pair(f, g)
    H = f.horizon if horizon is None else float(horizon)
    if not 0 < H <= f.horizon:
        raise ValueError("integration horizon must lie in (0, path horizon]")
    step = H / n_grid
    shift = perturb * H
    jumps = np.union1d(f.jump_times(), g.jump_times())
    total, bound, used = 0.0, 0.0, []
    for k in range(1, n_grid + 1):
        u = k * step
        if jumps.size and np.min(np.abs(jumps - u)) <= shift / 2:
            u = u + shift if u + shift <= f.horizon else u - shift
            if np.min(np.abs(jumps - u)) <= shift / 2:
                raise ValueError(f"cannot place a restriction horizon near {k * step:g} away from jumps")
        rep = j1_distance(restrict(f, u), restrict(g, u), penalty, d_E, resolution)
        weight = math.exp(-u) * step
        total += weight * min(1.0, rep.value)
        bound += weight * rep.error_bound
        used.append(u)
    bound += step + math.exp(-H)
    details = {"grid_step": step, "n_grid": n_grid, "integration_horizon": H}
    return DistanceReport(total, None, "discretized", bound, "halfline", details)
