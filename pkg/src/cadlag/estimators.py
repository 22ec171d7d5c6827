"""scikit-learn style wrappers.

``SkorokhodDistance`` turns a collection of paths into a distance matrix
against reference paths seen in ``fit``; ``ModulusFeatures`` maps each path
to its modulus ladder.  Both follow the ``fit`` / ``transform`` protocol and
get ``get_params`` / ``set_params`` from :class:`~sklearn.base.BaseEstimator`,
so they can be cloned and placed in pipelines.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import metrics, moduli
from .diagnostics import PathEnsemble
from .paths import CadlagPath

METRICS = ("uniform", "j1", "j1log", "m1", "weakj1", "halfline")


def check_paths(X, horizon=None) -> list:
    """Validate a collection of paths and return it as a list."""
    if isinstance(X, CadlagPath):
        raise TypeError("expected a collection of paths, got a single path")
    paths = list(X.paths) if isinstance(X, PathEnsemble) else list(X)
    if not paths:
        raise ValueError("expected at least one path")
    for p in paths:
        if not isinstance(p, CadlagPath):
            raise TypeError(f"expected CadlagPath, got {type(p).__name__}")
    T = paths[0].horizon if horizon is None else horizon
    if any(p.horizon != T for p in paths):
        raise ValueError(f"all paths must live on [0, {T:g}]")
    return paths


def pairwise_distance(f, g, metric="j1", resolution=None) -> metrics.DistanceReport:
    """Dispatch by metric name; ``resolution`` falls back to each metric's default."""
    if metric == "uniform":
        return metrics.uniform_distance(f, g)
    if metric in ("j1", "j1log"):
        penalty = "absolute" if metric == "j1" else "log_slope"
        return metrics.j1_distance(f, g, penalty, resolution=resolution or 200)
    if metric == "m1":
        return metrics.m1_distance(f, g, resolution=resolution or 2000)
    if metric == "weakj1":
        return metrics.weak_product_j1(f, g, resolution=resolution or 200)
    if metric == "halfline":
        return metrics.halfline_distance(f, g, resolution=resolution or 200)
    raise ValueError(f"unknown metric {metric!r}; use one of {METRICS}")


class SkorokhodDistance(TransformerMixin, BaseEstimator):
    """Distances from each path to the reference paths given to ``fit``.

    ``transform(X)`` returns an array of shape ``(len(X), n_references)``.
    """

    def __init__(self, metric="j1", resolution=None):
        self.metric = metric
        self.resolution = resolution

    def fit(self, X, y=None):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; use one of {METRICS}")
        self.references_ = check_paths(X)
        self.horizon_ = self.references_[0].horizon
        self.n_features_in_ = len(self.references_)
        return self

    def transform(self, X):
        check_is_fitted(self, "references_")
        paths = check_paths(X, self.horizon_)
        out = np.empty((len(paths), len(self.references_)))
        for i, f in enumerate(paths):
            for j, g in enumerate(self.references_):
                out[i, j] = pairwise_distance(f, g, self.metric, self.resolution).value
        return out


class ModulusFeatures(TransformerMixin, BaseEstimator):
    """One column per ``delta``: the chosen modulus of each path."""

    def __init__(self, kind="omega_prime", deltas=(0.2, 0.1, 0.05)):
        self.kind = kind
        self.deltas = deltas

    def fit(self, X, y=None):
        moduli._kind(self.kind)
        self.deltas_ = np.asarray(self.deltas, dtype=float)
        if self.deltas_.ndim != 1 or self.deltas_.size == 0 or np.any(self.deltas_ <= 0):
            raise ValueError("deltas must be a nonempty list of positive numbers")
        self.horizon_ = check_paths(X)[0].horizon
        return self

    def transform(self, X):
        check_is_fitted(self, "deltas_")
        paths = check_paths(X, self.horizon_)
        return np.array([moduli.modulus_ladder(f, self.deltas_, self.kind).values for f in paths])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "deltas_")
        return np.array([f"{self.kind}_{d:g}" for d in self.deltas_], dtype=object)
