"""Finite-sample reports for compactness, tightness and convergence.

The underlying statements quantify over infinitely many paths and over
``delta -> 0``; the reports here only show ladders and trends over the
sampled ensembles.  Every verdict is a finite-sample indication.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from . import metrics, moduli
from .paths import CadlagPath

TOPOLOGIES = ("uniform", "j1", "m1")
INDICATION = "finite-sample indication"


@dataclass(frozen=True)
class PathEnsemble:
    """Paths sharing a horizon and value dimension, with an optional label."""

    paths: tuple
    label: dict = field(default_factory=dict)

    def __post_init__(self):
        paths = tuple(self.paths)
        if not paths:
            raise ValueError("an ensemble needs at least one path")
        if not all(isinstance(p, CadlagPath) for p in paths):
            raise TypeError("ensemble members must be CadlagPath instances")
        T, k = paths[0].horizon, paths[0].dim
        if any(p.horizon != T for p in paths):
            raise ValueError("ensemble paths must share one horizon")
        if any(p.dim != k for p in paths):
            raise ValueError("ensemble paths must share one value dimension")
        object.__setattr__(self, "paths", paths)
        object.__setattr__(self, "label", dict(self.label))

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def __getitem__(self, i):
        return self.paths[i]

    @property
    def horizon(self) -> float:
        return self.paths[0].horizon

    @property
    def dim(self) -> int:
        return self.paths[0].dim

    def values_at(self, t) -> np.ndarray:
        """Marginal sample at time ``t``, shape ``(m,)`` for scalar paths."""
        out = np.array([np.atleast_1d(p(t)) for p in self.paths])
        return out[:, 0] if self.dim == 1 else out

    def sup_norms(self) -> np.ndarray:
        return np.array([p.sup_norm() for p in self.paths])


def _ensemble(x) -> PathEnsemble:
    return x if isinstance(x, PathEnsemble) else PathEnsemble(tuple(x))


def _topology(name, allowed=TOPOLOGIES):
    if name not in allowed:
        raise ValueError(f"unknown topology {name!r}; use one of {allowed}")
    return name


def _modulus_kind(topology):
    return {"uniform": "omega", "j1": "omega_prime", "m1": "omega_double_prime"}[topology]


# --------------------------------------------------------------------------
# compactness


@dataclass(frozen=True)
class CompactnessReport:
    topology: str
    sup_norm: float
    deltas: np.ndarray
    modulus: np.ndarray
    endpoints: np.ndarray | None = None
    verdict: str = INDICATION

    def to_rows(self):
        rows = []
        for k, d in enumerate(self.deltas):
            row = {"delta": float(d), "sup_modulus": float(self.modulus[k]), "sup_norm": self.sup_norm}
            if self.endpoints is not None:
                row["sup_start_osc"], row["sup_end_osc"] = map(float, self.endpoints[k])
            rows.append(row)
        return rows


def compactness_report(K, ladder, topology="j1") -> CompactnessReport:
    """Sup norm and the sup over ``K`` of the topology's modulus along ``ladder``.

    ``uniform`` uses omega, ``j1`` omega_prime, ``m1`` omega_double_prime plus
    the two endpoint oscillations.
    """
    K = _ensemble(K)
    topology = _topology(topology)
    deltas = np.asarray(ladder, dtype=float)
    kind = _modulus_kind(topology)
    curves = np.array([moduli.modulus_ladder(f, deltas, kind).values for f in K])
    endpoints = None
    if topology == "m1":
        endpoints = np.array([[moduli.endpoint_oscillations(f, d) for d in deltas] for f in K]).max(axis=0)
    return CompactnessReport(topology, float(K.sup_norms().max()), deltas, curves.max(axis=0), endpoints)


# --------------------------------------------------------------------------
# tightness


@dataclass(frozen=True)
class TightnessReport:
    """Exceedance frequencies indexed ``[n, delta, eps]`` with Monte-Carlo standard errors.

    ``endpoint_freq`` (M1 only) has a trailing axis for the start and end terms.
    """

    topology: str
    ns: np.ndarray
    deltas: np.ndarray
    eps: np.ndarray
    thresholds: np.ndarray
    sup_tail: np.ndarray
    freq: np.ndarray
    se: np.ndarray
    endpoint_freq: np.ndarray | None
    replicas: np.ndarray
    trend: dict
    verdict: str = INDICATION

    def to_rows(self):
        rows = []
        for i, n in enumerate(self.ns):
            for c, C in enumerate(self.thresholds):
                p = self.sup_tail[i, c]
                rows.append(("sup_norm", n, np.nan, C, p, _se(p, self.replicas[i])))
            for j, d in enumerate(self.deltas):
                for k, e in enumerate(self.eps):
                    rows.append(("modulus", n, d, e, self.freq[i, j, k], self.se[i, j, k]))
                    if self.endpoint_freq is not None:
                        for side, name in enumerate(("start_osc", "end_osc")):
                            p = self.endpoint_freq[i, j, k, side]
                            rows.append((name, n, d, e, p, _se(p, self.replicas[i])))
        return [dict(zip(("quantity", "n", "delta", "eps_or_C", "frequency", "se"), r)) for r in rows]


def _se(p, m):
    return float(np.sqrt(p * (1.0 - p) / m))


def _trend(freq, deltas):
    """Per eps: does ``max_n`` frequency shrink as ``delta`` decreases?"""
    order = np.argsort(-deltas)
    worst = freq.max(axis=0)[order]  # [delta decreasing, eps]
    out = {}
    for k in range(worst.shape[1]):
        col = worst[:, k]
        if np.all(np.diff(col) <= 0) and col[-1] < col[0]:
            out[k] = "decreasing"
        elif np.all(col == col[0]):
            out[k] = "flat"
        else:
            out[k] = "not decreasing"
    return out


def _ladders(paths, deltas, kind, workers):
    if workers > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = pool.map(moduli.modulus_ladder, paths, [deltas] * len(paths), [kind] * len(paths),
                            chunksize=max(1, len(paths) // (4 * workers)))
            return np.array([c.values for c in jobs])
    return np.array([moduli.modulus_ladder(f, deltas, kind).values for f in paths])


def tightness_report(sequence, deltas, eps, topology="j1", thresholds=(1.0, 2.0, 4.0), ns=None,
                     workers=1) -> TightnessReport:
    """Empirical ``P[modulus_delta >= eps]`` and ``P[||X|| >= C]`` for each ensemble.

    ``sequence`` lists ensembles indexed by ``n`` (taken from ``ns``, the
    ensemble label ``"n"``, or the position).  For ``m1`` the endpoint
    oscillations ``|f(delta) - f(0)|`` and ``|f(T-) - f(T - delta)|`` get their
    own exceedance frequencies.  ``workers > 1`` spreads the modulus
    evaluations over processes; results do not depend on it.
    """
    sequence = [_ensemble(e) for e in sequence]
    if not sequence:
        raise ValueError("tightness_report needs at least one ensemble")
    topology = _topology(topology, ("j1", "m1"))
    deltas = np.asarray(deltas, dtype=float)
    eps = np.asarray(eps, dtype=float)
    thresholds = np.asarray(thresholds, dtype=float)
    if ns is None:
        ns = [e.label.get("n", i) for i, e in enumerate(sequence)]
    kind = _modulus_kind(topology)
    shape = (len(sequence), deltas.size, eps.size)
    freq = np.zeros(shape)
    endpoint = np.zeros(shape + (2,)) if topology == "m1" else None
    tails = np.zeros((len(sequence), thresholds.size))
    reps = np.array([len(e) for e in sequence])
    for i, ens in enumerate(sequence):
        mod = _ladders(ens.paths, deltas, kind, workers)  # [m, delta]
        freq[i] = (mod[:, :, None] >= eps[None, None, :]).mean(axis=0)
        norms = ens.sup_norms()
        tails[i] = (norms[:, None] >= thresholds[None, :]).mean(axis=0)
        if endpoint is not None:
            ends = np.array([[moduli.endpoint_oscillations(f, d) for d in deltas] for f in ens])  # [m, delta, 2]
            endpoint[i] = (ends[:, :, None, :] >= eps[None, None, :, None]).mean(axis=0)
    se = np.sqrt(freq * (1.0 - freq) / reps[:, None, None])
    trend = {float(eps[k]): v for k, v in _trend(freq, deltas).items()}
    return TightnessReport(topology, np.asarray(ns), deltas, eps, thresholds, tails, freq, se, endpoint, reps, trend)


# --------------------------------------------------------------------------
# convergence of deterministic families


@dataclass(frozen=True)
class ConvergenceReport:
    metric: str
    ns: np.ndarray
    distances: np.ndarray
    rate: float
    monotone: bool
    verdict: str = INDICATION

    def to_rows(self):
        return [{"n": int(n), "distance": float(d)} for n, d in zip(self.ns, self.distances)]


def _metric_fn(metric) -> tuple[str, Callable]:
    if callable(metric):
        return getattr(metric, "__name__", "custom"), metric
    table = {
        "uniform": lambda f, g: metrics.uniform_distance(f, g).value,
        "j1": lambda f, g: metrics.j1_distance(f, g).value,
        "j1log": lambda f, g: metrics.j1_distance(f, g, "log_slope").value,
        "m1": lambda f, g: metrics.m1_distance(f, g).value,
        "halfline": lambda f, g: metrics.halfline_distance(f, g).value,
    }
    if metric not in table:
        raise ValueError(f"unknown metric {metric!r}; use one of {tuple(table)}")
    return metric, table[metric]


def loglog_rate(ns, distances) -> float:
    """Least-squares slope of ``log d`` against ``log n``; nan if any distance vanishes."""
    ns = np.asarray(ns, dtype=float)
    d = np.asarray(distances, dtype=float)
    if np.any(d <= 0):
        return float("nan")
    return float(np.polyfit(np.log(ns), np.log(d), 1)[0])


def convergence_report(family, limit: CadlagPath, metric="j1", ns: Sequence[int] = (5, 10, 20, 40)) -> ConvergenceReport:
    """Distances from family members to ``limit`` with a fitted power rate.

    ``family`` is a callable ``n -> path`` or a mapping from ``n`` to paths.
    """
    ns = np.asarray(list(ns), dtype=int)
    if ns.size < 3:
        raise ValueError("convergence_report needs at least three indices")
    name, fn = _metric_fn(metric)
    get = family if callable(family) else family.__getitem__
    d = np.array([fn(get(int(n)), limit) for n in ns])
    order = np.argsort(ns)
    monotone = bool(np.all(np.diff(d[order]) <= 1e-12))
    return ConvergenceReport(name, ns, d, loglog_rate(ns, d), monotone)


# --------------------------------------------------------------------------
# finite-dimensional distributions


def continuity_times(ensembles, grid, threshold=0.05, window=None) -> list:
    """Grid times where the frequency of a jump within ``window`` stays below ``threshold``.

    ``window`` defaults to ``1e-6 * T``; 0 is always kept.  Several ensembles
    may be passed, in which case a time must pass for each of them.
    """
    if isinstance(ensembles, PathEnsemble) or (ensembles and isinstance(ensembles[0], CadlagPath)):
        ensembles = [ensembles]
    ensembles = [_ensemble(e) for e in ensembles]
    T = ensembles[0].horizon
    tau = 1e-6 * T if window is None else float(window)
    grid = np.asarray(grid, dtype=float)
    if np.any((grid < 0) | (grid > T)):
        raise ValueError(f"grid must lie in [0, {T:g}]")
    jumps = [[p.jump_times() for p in e] for e in ensembles]
    keep = []
    for t in grid:
        if t == 0.0:
            keep.append(0.0)
            continue
        worst = max(np.mean([np.any(np.abs(j - t) <= tau) for j in js]) for js in jumps)
        if worst < threshold:
            keep.append(float(t))
    return keep


@dataclass(frozen=True)
class FddReport:
    times: np.ndarray
    statistic: np.ndarray  # [ensemble, time]
    pvalue: np.ndarray

    def to_rows(self):
        return [
            {"ensemble": i, "t": float(t), "ks": float(self.statistic[i, j]), "pvalue": float(self.pvalue[i, j])}
            for i in range(self.statistic.shape[0])
            for j, t in enumerate(self.times)
        ]


def fdd_compare(ensembles, reference, times) -> FddReport:
    """Kolmogorov-Smirnov statistics between one-time marginals.

    ``reference`` is a :class:`PathEnsemble` (two-sample test) or a
    distribution accepted by :func:`scipy.stats.kstest`, such as ``"norm"``.
    """
    if isinstance(ensembles, PathEnsemble):
        ensembles = [ensembles]
    ensembles = [_ensemble(e) for e in ensembles]
    times = np.asarray(times, dtype=float)
    if any(e.dim != 1 for e in ensembles):
        raise ValueError("marginal comparison needs scalar paths")
    T = ensembles[0].horizon
    if np.any((times < 0) | (times > T)):
        raise ValueError(f"times must lie in [0, {T:g}]")
    ref = _ensemble(reference) if isinstance(reference, (PathEnsemble, list, tuple)) else reference
    stat = np.zeros((len(ensembles), times.size))
    pval = np.zeros_like(stat)
    for i, ens in enumerate(ensembles):
        for j, t in enumerate(times):
            x = ens.values_at(t)
            if isinstance(ref, PathEnsemble):
                res = stats.ks_2samp(x, ref.values_at(t), method="asymp")
            else:
                res = stats.kstest(x, ref, method="asymp")
            stat[i, j], pval[i, j] = res.statistic, res.pvalue
    return FddReport(times, stat, pval)
