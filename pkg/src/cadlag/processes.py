"""Seeded path generators and the example families.

Randomness comes from a counter-based generator (Philox) keyed by
``(seed, stream)``: replica ``k`` of a batch always uses stream ``k``, so a
batch is reproducible regardless of how or in which order it is generated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .paths import CadlagPath, TimeChange

FAMILIES = ("j1_shift", "m1_staircase", "j2_spikepair", "m2_variant", "incompleteness", "halfline_shift")
PROCESSES = ("donsker", "donsker_step", "poisson")


def replica_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for replica ``stream`` of a batch keyed by ``seed``."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be nonnegative integers")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def donsker_path(N: int, seed: int = 0, interpolated: bool = True, stream: int = 0) -> CadlagPath:
    """Rescaled simple random walk on ``[0, 1]``.

    ``interpolated`` gives the continuous polygon through ``(k/N, S_k/sqrt(N))``;
    otherwise ``t -> S_floor(Nt) / sqrt(N)``, a step path with its last jump at 1.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be a positive integer")
    steps = 2 * replica_rng(seed, stream).integers(0, 2, size=N) - 1
    walk = np.concatenate([[0.0], np.cumsum(steps)]) / np.sqrt(N)
    times = np.arange(N + 1) / N
    if interpolated:
        return CadlagPath.piecewise_linear(times, walk, 1.0)
    return CadlagPath.step(times, walk, 1.0)


def poisson_path(rate: float, horizon: float = 1.0, seed: int = 0, stream: int = 0) -> CadlagPath:
    """Counting path with unit jumps and exponential inter-arrival times."""
    if not rate > 0:
        raise ValueError("rate must be positive")
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    rng = replica_rng(seed, stream)
    arrivals = []
    t = rng.exponential(1.0 / rate)
    while t < horizon:
        arrivals.append(t)
        t += rng.exponential(1.0 / rate)
    times = np.concatenate([[0.0], arrivals])
    return CadlagPath.step(times, np.arange(times.size, dtype=float), horizon)


@dataclass(frozen=True)
class ProcessSpec:
    """A random process and its parameters; ``seed`` fixes every replica."""

    kind: str = "donsker"
    N: int = 100
    rate: float = 1.0
    horizon: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in PROCESSES:
            raise ValueError(f"unknown process {self.kind!r}; use one of {PROCESSES}")
        if self.N < 1 or not self.rate > 0 or not self.horizon > 0:
            raise ValueError("N, rate and horizon must be positive")

    def path(self, stream: int = 0) -> CadlagPath:
        if self.kind == "poisson":
            return poisson_path(self.rate, self.horizon, self.seed, stream)
        return donsker_path(self.N, self.seed, self.kind == "donsker", stream)

    def sample(self, replicas: int):
        return [self.path(k) for k in range(int(replicas))]

    def label(self):
        return {"process": self.kind, "N": self.N, "rate": self.rate, "horizon": self.horizon, "seed": self.seed}


def example_family(name: str, n: int):
    """Member ``n`` of a named deterministic family.

    ``incompleteness`` returns the pair ``(f_n, lam_n)`` with ``f_{n+1}∘lam_n = f_n``.
    ``j2_spikepair`` and ``m2_variant`` are illustrative: a narrow spike (full or
    half height) just before the unit jump at 1/2.
    """
    n = int(n)
    if name == "incompleteness":
        if n < 1:
            raise ValueError("n must be at least 1")
        f = CadlagPath.indicator(0.0, 2.0**-n, 1.0)
        lam = TimeChange.through([(2.0**-n, 2.0 ** -(n + 1))], 1.0)
        return f, lam
    if name == "halfline_shift":
        if n < 1:
            raise ValueError("n must be at least 1")
        return CadlagPath.indicator(1.0 + 1.0 / n, np.inf, 2.0)
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; use one of {FAMILIES}")
    if n < 3:
        raise ValueError(f"{name} needs n >= 3 so the first jump 1/2 - 1/n stays inside (0, 1)")
    a = 0.5 - 1.0 / n
    if name == "j1_shift":
        return CadlagPath.indicator(a, np.inf, 1.0)
    if name == "m1_staircase":
        return CadlagPath.step([0.0, a, 0.5], [0.0, 0.5, 1.0], 1.0)
    b = 0.5 - 0.5 / n
    height = 1.0 if name == "j2_spikepair" else 0.5
    return CadlagPath.step([0.0, a, b, 0.5], [0.0, height, 0.0, 1.0], 1.0)


def family_limit(name: str) -> CadlagPath:
    """Pointwise limit of a family as ``n`` grows."""
    if name == "incompleteness":
        return CadlagPath.constant(0.0, 1.0)
    if name == "halfline_shift":
        return CadlagPath.indicator(1.0, np.inf, 2.0)
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; use one of {FAMILIES}")
    return CadlagPath.indicator(0.5, np.inf, 1.0)
