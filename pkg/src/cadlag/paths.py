"""Càdlàg paths, time changes and completed graphs.

A :class:`CadlagPath` on ``[0, T]`` is stored by its nodes
``0 = t_0 < t_1 < ... < t_m = T`` together with the right-continuous value
``f(t_i)`` and the left limit ``f(t_i-)`` at every node.  On ``[t_i, t_{i+1})``
the path is linear, running from ``f(t_i)`` to ``f(t_{i+1}-)``; constant
(step) segments are the special case where both ends agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TOL = 1e-9
SCHEMA_VERSION = 1


def _as_2d(values, n=None):
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError("values must be a 1-D or 2-D array")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"expected {n} values, got {arr.shape[0]}")
    return arr


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def _normalize(times, values, lefts, tol):
    """Drop zero-length segments and redundant (continuous, collinear) nodes."""
    times = times.copy()
    values = values.copy()
    lefts = lefts.copy()

    # zero-length segments: node k+1 collapses onto node k
    if times.size > 1 and np.any(np.diff(times) <= tol):
        keep_t, keep_v, keep_l = [times[0]], [values[0]], [lefts[0]]
        last = times.size - 1
        for k in range(1, times.size):
            if times[k] - keep_t[-1] <= tol and not (k == last and len(keep_t) == 1):
                keep_v[-1] = values[k]
                if k == last:
                    keep_t[-1] = times[k]
            else:
                keep_t.append(times[k])
                keep_v.append(values[k])
                keep_l.append(lefts[k])
        times = np.array(keep_t)
        values = np.array(keep_v)
        lefts = np.array(keep_l)

    lefts[0] = values[0]
    if times.size <= 2:
        return times, values, lefts

    dt = np.diff(times)
    slopes = (lefts[1:] - values[:-1]) / dt[:, None]
    inner = np.arange(1, times.size - 1)
    no_jump = np.all(np.abs(lefts[inner] - values[inner]) <= tol, axis=1)
    span = np.maximum(dt[inner - 1], dt[inner])
    collinear = np.all(np.abs(slopes[inner - 1] - slopes[inner]) * span[:, None] <= tol, axis=1)
    drop = np.zeros(times.size, dtype=bool)
    drop[inner] = no_jump & collinear
    if drop.any():
        keep = ~drop
        # the left limit at a kept node is read off the (merged) segment before it
        times, values, lefts = times[keep], values[keep], lefts[keep]
    return times, values, lefts


@dataclass(frozen=True, eq=False)
class CadlagPath:
    """Finite-horizon càdlàg path with piecewise-linear segments.

    Parameters
    ----------
    times : array of shape (n,)
        Strictly increasing nodes, ``times[0] == 0`` and ``times[-1] == horizon``.
    values : array of shape (n, k)
        Right-continuous value ``f(t_i)`` at each node.
    lefts : array of shape (n, k)
        Left limit ``f(t_i-)`` at each node; ``lefts[0]`` equals ``values[0]``.

    Use the constructors :meth:`step`, :meth:`piecewise_linear`,
    :meth:`constant` and :meth:`indicator` rather than building the arrays
    by hand.
    """

    times: np.ndarray
    values: np.ndarray
    lefts: np.ndarray

    @classmethod
    def from_nodes(cls, times, values, lefts=None, *, normalize=True, tol=TOL):
        times = np.asarray(times, dtype=float).ravel()
        if times.size == 0:
            raise ValueError("a path needs at least one node")
        values = _as_2d(values, times.size)
        lefts = values.copy() if lefts is None else _as_2d(lefts, times.size)
        if lefts.shape != values.shape:
            raise ValueError("values and lefts must have the same shape")
        if times[0] != 0.0:
            raise ValueError("the first node must be at time 0")
        if times.size == 1:
            raise ValueError("the last node must sit at a positive horizon")
        if np.any(np.diff(times) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(lefts))):
            raise ValueError("path values must be finite")
        if normalize:
            times, values, lefts = _normalize(times, values, lefts, tol)
        else:
            lefts = lefts.copy()
            lefts[0] = values[0]
        times, values, lefts = times.copy(), values.copy(), lefts.copy()
        _freeze(times, values, lefts)
        return cls(times, values, lefts)

    @classmethod
    def step(cls, times, values, horizon=1.0):
        """Step path: ``values[i]`` holds on ``[times[i], times[i+1])``.

        If ``times[-1] == horizon`` the last value is ``f(T)`` alone, which
        makes a jump at the terminal time possible.
        """
        times = np.asarray(times, dtype=float).ravel()
        values = _as_2d(values, times.size)
        horizon = float(horizon)
        if times.size == 0 or times[0] != 0.0:
            raise ValueError("step times must start at 0")
        if times[-1] > horizon:
            raise ValueError("step times exceed the horizon")
        if times[-1] < horizon:
            times = np.append(times, horizon)
            values = np.vstack([values, values[-1:]])
        lefts = np.vstack([values[:1], values[:-1]])
        return cls.from_nodes(times, values, lefts)

    @classmethod
    def piecewise_linear(cls, times, values, horizon=None, jumps=None):
        """Linear interpolation of node values, optionally with jumps.

        ``jumps`` maps a node time to its left limit; the node value is then
        the value right after the jump.
        """
        times = np.asarray(times, dtype=float).ravel()
        values = _as_2d(values, times.size)
        horizon = float(times[-1]) if horizon is None else float(horizon)
        if times[-1] > horizon:
            raise ValueError("node times exceed the horizon")
        if times[-1] < horizon:
            times = np.append(times, horizon)
            values = np.vstack([values, values[-1:]])
        lefts = values.copy()
        for t, left in (jumps or {}).items():
            idx = np.flatnonzero(times == float(t))
            if idx.size != 1 or idx[0] == 0:
                raise ValueError(f"jump time {t} is not an interior or terminal node")
            lefts[idx[0]] = np.atleast_1d(np.asarray(left, dtype=float))
        return cls.from_nodes(times, values, lefts)

    @classmethod
    def constant(cls, value=0.0, horizon=1.0):
        value = np.atleast_1d(np.asarray(value, dtype=float))
        return cls.step([0.0], value[None, :], horizon)

    @classmethod
    def indicator(cls, start, stop=np.inf, horizon=1.0, height=1.0):
        """``height * 1_[start, stop)`` on ``[0, horizon]``.

        An interval reaching the horizon (``stop >= horizon``) is taken to hold
        through ``T`` itself, so ``indicator(0.5, 1.0)`` equals 1 at ``t = 1``.
        """
        start, stop, horizon = float(start), float(stop), float(horizon)
        if start < 0 or stop < start:
            raise ValueError("need 0 <= start <= stop")
        if start == stop or start > horizon:
            return cls.constant(0.0, horizon)
        times, vals = [0.0], [0.0]
        if start == 0.0:
            vals[0] = height
        else:
            times.append(start)
            vals.append(height)
        if stop < horizon:
            times.append(stop)
            vals.append(0.0)
        return cls.step(times, vals, horizon)

    # -- basic properties -------------------------------------------------

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def n_nodes(self) -> int:
        return self.times.size

    @property
    def is_step(self) -> bool:
        """True when every segment is constant."""
        return bool(np.all(np.abs(self.lefts[1:] - self.values[:-1]) <= TOL))

    @property
    def is_scalar(self) -> bool:
        return self.dim == 1

    def __repr__(self):
        kind = "step" if self.is_step else "pl"
        return f"CadlagPath(kind={kind}, nodes={self.n_nodes}, horizon={self.horizon:g}, dim={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, CadlagPath):
            return NotImplemented
        return (
            self.times.shape == other.times.shape
            and self.values.shape == other.values.shape
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.lefts, other.lefts)
        )

    __hash__ = None

    def allclose(self, other, atol=TOL) -> bool:
        return (
            self.times.shape == other.times.shape
            and self.values.shape == other.values.shape
            and np.allclose(self.times, other.times, atol=atol, rtol=0)
            and np.allclose(self.values, other.values, atol=atol, rtol=0)
            and np.allclose(self.lefts, other.lefts, atol=atol, rtol=0)
        )

    # -- evaluation -------------------------------------------------------

    def _check_times(self, t, allow_zero=True):
        t = np.asarray(t, dtype=float)
        lo_ok = t >= 0 if allow_zero else t > 0
        if not np.all(lo_ok & (t <= self.horizon)):
            rng = "[0, T]" if allow_zero else "(0, T]"
            raise ValueError(f"time outside {rng} with T={self.horizon:g}")
        return t

    def _shape_out(self, out, scalar_input):
        if self.dim == 1:
            out = out[..., 0]
        return out[0] if scalar_input else out

    def evaluate(self, t):
        """Right-continuous value f(t); accepts scalars or arrays."""
        t = self._check_times(t)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        i = np.searchsorted(self.times, t, side="right") - 1
        i = np.minimum(i, self.n_nodes - 1)
        exact = self.times[i] == t
        nxt = np.minimum(i + 1, self.n_nodes - 1)
        width = self.times[nxt] - self.times[i]
        frac = np.where(width > 0, (t - self.times[i]) / np.where(width > 0, width, 1.0), 0.0)
        out = self.values[i] + (self.lefts[nxt] - self.values[i]) * frac[:, None]
        out = np.where(exact[:, None], self.values[i], out)
        return self._shape_out(out, scalar)

    __call__ = evaluate

    def left_limit(self, t):
        """Left limit f(t-) for t in (0, T]."""
        t = self._check_times(t, allow_zero=False)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        i = np.searchsorted(self.times, t, side="left") - 1
        nxt = i + 1
        exact = self.times[nxt] == t
        width = self.times[nxt] - self.times[i]
        frac = (t - self.times[i]) / width
        out = self.values[i] + (self.lefts[nxt] - self.values[i]) * frac[:, None]
        out = np.where(exact[:, None], self.lefts[nxt], out)
        return self._shape_out(out, scalar)

    def jump_mask(self, tol=TOL):
        diff = np.abs(self.values - self.lefts).max(axis=1)
        mask = diff > tol
        mask[0] = False
        return mask

    def jumps(self, tol=TOL):
        """List of ``(time, left value, right value)`` for every jump, in time order."""
        idx = np.flatnonzero(self.jump_mask(tol))
        out = []
        for i in idx:
            left, right = self.lefts[i], self.values[i]
            if self.dim == 1:
                left, right = float(left[0]), float(right[0])
            out.append((float(self.times[i]), left, right))
        return out

    def jump_times(self, tol=TOL):
        return self.times[self.jump_mask(tol)]

    def sup_norm(self):
        return float(max(np.abs(self.values).max(), np.abs(self.lefts).max()))

    def is_monotone(self, tol=TOL):
        """Scalar path that is nondecreasing or nonincreasing."""
        if self.dim != 1:
            return False
        seq = np.empty(2 * self.n_nodes - 1)
        seq[0] = self.values[0, 0]
        seq[1::2] = self.lefts[1:, 0]
        seq[2::2] = self.values[1:, 0]
        d = np.diff(seq)
        return bool(np.all(d >= -tol) or np.all(d <= tol))

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        """Plain-JSON form, see :func:`path_from_dict` for the schema."""
        unwrap = (lambda a: a[:, 0].tolist()) if self.dim == 1 else (lambda a: a.tolist())
        horizon = self.horizon
        # exact comparisons here: serialization must not drop sub-tolerance slopes or jumps
        mask = self.jump_mask(tol=0.0)
        if np.array_equal(self.lefts[1:], self.values[:-1]):
            jump_at_end = bool(mask[-1])
            stop = self.n_nodes if jump_at_end else self.n_nodes - 1
            return {
                "horizon": horizon,
                "kind": "step",
                "times": self.times[:stop].tolist(),
                "values": unwrap(self.values[:stop]),
            }
        out = {
            "horizon": horizon,
            "kind": "pl",
            "times": self.times.tolist(),
            "values": unwrap(self.values),
        }
        if mask.any():
            lefts = unwrap(self.lefts)
            out["jumps"] = [{"t": float(self.times[i]), "left": lefts[i]} for i in np.flatnonzero(mask)]
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def path_from_dict(data) -> CadlagPath:
    """Build a path from ``{"horizon", "kind": "step"|"pl", "times", "values"[, "jumps"]}``."""
    try:
        kind = data["kind"]
        horizon = float(data["horizon"])
        times = data["times"]
        values = data["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed path document: missing {exc}") from None
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if kind == "step":
        if "jumps" in data:
            raise ValueError("step paths carry no 'jumps' list")
        return CadlagPath.step(times, values, horizon)
    if kind == "pl":
        jumps = {float(j["t"]): j["left"] for j in data.get("jumps", [])}
        return CadlagPath.piecewise_linear(times, values, horizon, jumps)
    raise ValueError(f"unknown path kind {kind!r}")


def load_path(path) -> CadlagPath:
    with open(path) as fh:
        return path_from_dict(json.load(fh))


def save_path(cadlag_path: CadlagPath, path) -> None:
    Path(path).write_text(cadlag_path.to_json(indent=1))


# --------------------------------------------------------------------------
# time changes


@dataclass(frozen=True, eq=False)
class TimeChange:
    """Strictly increasing piecewise-linear bijection of ``[0, T]``.

    ``lam(s[i]) == l[i]`` with linear interpolation in between.
    """

    s: np.ndarray
    l: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float).ravel()
        l = np.asarray(self.l, dtype=float).ravel()
        if s.shape != l.shape or s.size < 2:
            raise ValueError("a time change needs at least the two end nodes")
        if s[0] != 0.0 or l[0] != 0.0 or s[-1] != l[-1]:
            raise ValueError("time change must fix 0 and T")
        if np.any(np.diff(s) <= 0) or np.any(np.diff(l) <= 0):
            raise ValueError("time change must be strictly increasing")
        s, l = _merge_collinear(s, l)
        _freeze(s, l)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "l", l)

    @classmethod
    def identity(cls, horizon=1.0):
        return cls([0.0, horizon], [0.0, horizon])

    @classmethod
    def through(cls, points, horizon=1.0):
        """Piecewise-linear time change through interior ``(s, lam(s))`` pairs."""
        pts = sorted((float(a), float(b)) for a, b in points)
        s = [0.0] + [a for a, _ in pts] + [float(horizon)]
        l = [0.0] + [b for _, b in pts] + [float(horizon)]
        return cls(s, l)

    @property
    def horizon(self) -> float:
        return float(self.s[-1])

    def __call__(self, t):
        return np.interp(t, self.s, self.l)

    def inverse(self) -> "TimeChange":
        return TimeChange(self.l, self.s)

    def compose(self, other: "TimeChange") -> "TimeChange":
        """``self ∘ other``."""
        if self.horizon != other.horizon:
            raise ValueError("horizon mismatch")
        nodes = np.union1d(other.s, np.interp(self.s, other.l, other.s))
        nodes = _dedup(nodes)
        return TimeChange(nodes, self(other(nodes)))

    def is_identity(self, tol=TOL) -> bool:
        return bool(np.max(np.abs(self.l - self.s)) <= tol)

    def slopes(self):
        return np.diff(self.l) / np.diff(self.s)

    def __repr__(self):
        return f"TimeChange(nodes={self.s.size}, horizon={self.horizon:g})"

    def to_dict(self):
        return {"s": self.s.tolist(), "lambda": self.l.tolist()}


def _dedup(nodes, tol=TOL):
    keep = np.concatenate([[True], np.diff(nodes) > tol])
    keep[-1] = True
    out = nodes[keep]
    if out.size > 2 and out[-1] - out[-2] <= tol:
        out = np.delete(out, -2)
    return out


def _merge_collinear(s, l, tol=TOL):
    if s.size <= 2:
        return s.copy(), l.copy()
    slopes = np.diff(l) / np.diff(s)
    span = np.maximum(np.diff(s)[:-1], np.diff(s)[1:])
    keep = np.ones(s.size, dtype=bool)
    keep[1:-1] = np.abs(slopes[1:] - slopes[:-1]) * span > tol
    return s[keep].copy(), l[keep].copy()


def sup_deviation(lam: TimeChange) -> float:
    """``sup_t |lam(t) - t|``; attained at a node."""
    return float(np.max(np.abs(lam.l - lam.s)))


def log_slope_norm(lam: TimeChange) -> float:
    """``sup_{s != t} |log((lam(t) - lam(s)) / (t - s))|`` = max |log slope| over segments."""
    slopes = lam.slopes()
    if np.any(slopes <= 0):
        raise ValueError("time change has a nonpositive slope")
    return float(np.max(np.abs(np.log(slopes))))


# --------------------------------------------------------------------------
# operations on paths


def apply_time_change(path: CadlagPath, lam: TimeChange) -> CadlagPath:
    """Exact representation of ``path ∘ lam``."""
    if path.horizon != lam.horizon:
        raise ValueError(f"horizon mismatch: path {path.horizon:g}, time change {lam.horizon:g}")
    inv = lam.inverse()
    # (new node u, its image lam(u)); images of path nodes are kept exact
    images = np.concatenate([path.times, lam.l])
    nodes = np.concatenate([inv(path.times), lam.s])
    order = np.lexsort((np.arange(images.size), images))
    images, nodes = images[order], nodes[order]
    keep = np.concatenate([[True], np.diff(images) > 0])
    images, nodes = images[keep], nodes[keep]
    nodes[0], nodes[-1] = 0.0, path.horizon
    # nodes from the two sources can collide after rounding
    ok = np.concatenate([[True], np.diff(nodes) > 0])
    images, nodes = images[ok], nodes[ok]
    nodes[-1], images[-1] = path.horizon, path.horizon
    values = _as_2d(path.evaluate(images))
    lefts = values.copy()
    lefts[1:] = _as_2d(path.left_limit(images[1:]))
    return CadlagPath.from_nodes(nodes, values, lefts)


def restrict(path: CadlagPath, new_horizon: float) -> CadlagPath:
    """Restriction to ``[0, new_horizon]``; the value at the new end is ``f(new_horizon)``."""
    new_horizon = float(new_horizon)
    if not 0.0 < new_horizon <= path.horizon:
        raise ValueError(f"restriction horizon must lie in (0, {path.horizon:g}]")
    if new_horizon == path.horizon:
        return path
    k = np.searchsorted(path.times, new_horizon, side="left")
    times = np.append(path.times[:k], new_horizon)
    values = np.vstack([path.values[:k], np.reshape(path.evaluate(new_horizon), (1, -1))])
    lefts = np.vstack([path.lefts[:k], np.reshape(path.left_limit(new_horizon), (1, -1))])
    return CadlagPath.from_nodes(times, values, lefts)


# --------------------------------------------------------------------------
# completed graph


@dataclass(frozen=True, eq=False)
class CompletedGraph:
    """Polyline through the graph of a scalar path plus its vertical jump segments.

    ``t`` and ``z`` list the vertices in traversal order; a jump at time ``t``
    appears as two consecutive vertices ``(t, f(t-))`` and ``(t, f(t))``.
    """

    t: np.ndarray
    z: np.ndarray

    def __len__(self):
        return self.t.size

    def vertices(self):
        return np.column_stack([self.t, self.z])

    def anchor(self, t):
        """Left limit used by the graph order at time ``t`` (first vertex at that time)."""
        idx = np.searchsorted(self.t, t, side="left")
        if idx >= self.t.size or self.t[idx] != t:
            raise ValueError(f"{t} is not a vertex time")
        return float(self.z[idx])

    def precedes(self, a, b) -> bool:
        """Graph order ``a <= b`` for points ``(t, z)`` on the graph."""
        (t1, z1), (t2, z2) = a, b
        if t1 != t2:
            return t1 < t2
        base = self.anchor(t1)
        return abs(z1 - base) <= abs(z2 - base)

    def segment_lengths(self):
        return np.hypot(np.diff(self.t), np.diff(self.z))

    def to_path(self) -> CadlagPath:
        """Read right limits off the polyline (last vertex at each time)."""
        t = self.t
        first = np.concatenate([[True], np.diff(t) > 0])
        last = np.concatenate([np.diff(t) > 0, [True]])
        return CadlagPath.from_nodes(t[last], self.z[last], self.z[first])

    def densify(self, n_points: int) -> "CompletedGraph":
        """Refine to at least ``n_points`` vertices, keeping all existing ones.

        New vertices fill each segment uniformly so that no segment is longer
        than ``total_length / (n_points - 1)``.
        """
        seg = self.segment_lengths()
        total = seg.sum()
        if n_points <= self.t.size or total == 0:
            return self
        target = total / (n_points - 1)
        pieces = np.maximum(1, np.ceil(seg / target - 1e-12)).astype(int)
        ts, zs = [], []
        for i, k in enumerate(pieces):
            frac = np.arange(k) / k
            ts.append(self.t[i] + (self.t[i + 1] - self.t[i]) * frac)
            zs.append(self.z[i] + (self.z[i + 1] - self.z[i]) * frac)
        ts.append(self.t[-1:])
        zs.append(self.z[-1:])
        return CompletedGraph(np.concatenate(ts), np.concatenate(zs))


def completed_graph(path: CadlagPath, extra_times=None) -> CompletedGraph:
    """Completed graph Γ(f) of a scalar path.

    ``extra_times`` inserts additional vertices ``(t, f(t))`` on the graph,
    which is handy to put two graphs on a common time refinement.
    """
    if path.dim != 1:
        raise ValueError("the completed graph is defined for scalar paths only")
    times = path.times
    if extra_times is not None and len(extra_times):
        extra = np.asarray(extra_times, dtype=float)
        extra = extra[(extra > 0) & (extra < path.horizon)]
        times = np.union1d(times, extra)
    values = np.atleast_1d(path.evaluate(times))
    lefts = np.concatenate([values[:1], np.atleast_1d(path.left_limit(times[1:]))])
    jump = values != lefts
    jump[0] = False
    t = np.repeat(times, 1 + jump)
    z = np.empty(t.size)
    pos = np.cumsum(1 + jump) - 1
    z[pos] = values
    z[pos[jump] - 1] = lefts[jump]
    return CompletedGraph(t, z)


# --------------------------------------------------------------------------
# vector paths


def _rows(path: CadlagPath, t) -> np.ndarray:
    """Values at ``t`` as an array of shape (len(t), k)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return np.reshape(path.evaluate(t), (t.size, path.dim))


def _left_rows(path: CadlagPath, t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return np.reshape(path.left_limit(t), (t.size, path.dim))


def stack_paths(paths) -> CadlagPath:
    """Combine scalar paths sharing a horizon into one vector-valued path."""
    paths = list(paths)
    if not paths:
        raise ValueError("nothing to stack")
    horizon = paths[0].horizon
    if any(p.horizon != horizon for p in paths):
        raise ValueError("horizon mismatch")
    times = paths[0].times
    for p in paths[1:]:
        times = np.union1d(times, p.times)
    values = np.hstack([_rows(p, times) for p in paths])
    lefts = np.vstack([values[:1], np.hstack([_left_rows(p, times[1:]) for p in paths])])
    return CadlagPath.from_nodes(times, values, lefts)


def coordinates(path: CadlagPath):
    """Split a vector-valued path into its scalar coordinate paths."""
    return [
        CadlagPath.from_nodes(path.times, path.values[:, k], path.lefts[:, k])
        for k in range(path.dim)
    ]
