"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary of the pytest run.  Runtimes are measured after the compiled
kernels have been loaded once, so one-time JIT compilation is not counted.
"""

import time

import numpy as np
import pytest

from cadlag import (
    CadlagPath,
    ProcessSpec,
    PathEnsemble,
    example_family,
    family_limit,
    fdd_compare,
    halfline_distance,
    j1_distance,
    j1_oracle,
    log_slope_norm,
    m1_distance,
    m1_oracle,
    modulus_ladder,
    omega_double_prime,
    omega_prime,
    stack_paths,
    tightness_report,
    uniform_distance,
    weak_product_j1,
)
from cadlag.diagnostics import loglog_rate
from cadlag.moduli import KINDS
from cadlag.paths import restrict
from generators import random_polygon, random_step

LOG2 = float(np.log(2.0))


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    f, g = CadlagPath.indicator(0.3, np.inf, 1.0), CadlagPath.indicator(0.4, 0.8, 1.0)
    j1_distance(f, g)
    j1_distance(f, g, "log_slope")
    m1_distance(f, g)
    omega_prime(f, 0.1)
    omega_double_prime(f, 0.1)


def test_incompleteness_family(verdict):
    start = time.perf_counter()
    null = CadlagPath.constant(0.0, 1.0)
    to_null, gaps, slopes = [], [], []
    for n in range(1, 13):
        f_n, lam = example_family("incompleteness", n)
        f_next, _ = example_family("incompleteness", n + 1)
        to_null.append(j1_distance(null, f_n).value)
        d = j1_distance(f_next, f_n).value
        o = j1_oracle(f_next, f_n).value
        gaps.append((d, o, 2.0 ** -(n + 1)))
        slopes.append(log_slope_norm(lam))
    elapsed = time.perf_counter() - start
    ok = (all(v == 1.0 for v in to_null)
          and all(d <= b + 1e-9 and abs(d - o) <= 1e-12 and abs(d - b) <= 1e-12 for d, o, b in gaps)
          and all(abs(s - LOG2) <= 1e-12 for s in slopes)
          and elapsed < 1.0)
    worst = max(abs(d - b) for d, _, b in gaps)
    verdict(1, ok, f"d(null,f_n)=1 for n<=12, |d(f_n+1,f_n)-2^-(n+1)|<={worst:.1e}, "
                   f"log-slope norm=log 2, {elapsed:.2f}s")
    assert ok


def test_log_slope_metric_is_not_cauchy(verdict):
    values = []
    for n in range(1, 13):
        f_n, _ = example_family("incompleteness", n)
        f_next, _ = example_family("incompleteness", n + 1)
        values.append(j1_distance(f_next, f_n, "log_slope").value)
    ok = min(values) >= LOG2 - 1e-6
    verdict(2, ok, f"min log-slope distance {min(values):.9f} >= log 2 - 1e-6")
    assert ok


def test_shift_family_rate(verdict):
    start = time.perf_counter()
    g = family_limit("j1_shift")
    ns = np.arange(3, 51)
    d = np.array([j1_distance(example_family("j1_shift", n), g).value for n in ns])
    rate = loglog_rate(ns, d)
    elapsed = time.perf_counter() - start
    err = float(np.max(np.abs(d - 1.0 / ns)))
    ok = err <= 1e-9 and abs(rate + 1.0) <= 0.05 and elapsed < 1.0
    verdict(3, ok, f"max |d - 1/n| = {err:.1e}, rate {rate:.4f}, {elapsed:.2f}s")
    assert ok


def test_m1_separates_from_j1(verdict):
    start = time.perf_counter()
    g = family_limit("m1_staircase")
    rows = []
    for n in (3, 5, 10, 20, 50):
        x = example_family("m1_staircase", n)
        m1 = m1_distance(x, g, resolution=2000)
        rows.append((n, j1_distance(x, g).value, m1.value, m1.error_bound))
    elapsed = time.perf_counter() - start
    ok = (all(m <= 1.0 / n + b and abs(j - 0.5) <= 1e-6 for n, j, m, b in rows)
          and rows[-1][2] < rows[0][2] and elapsed < 10.0)
    verdict(4, ok, f"m1 {rows[0][2]:.4f} -> {rows[-1][2]:.4f} (<= 1/n + bound), j1 = 0.5, {elapsed:.2f}s")
    assert ok


def test_oracle_equivalence(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    j1_bad = 0
    for trial in range(200):
        grid = trial % 2 == 0
        m = int(rng.integers(0, 5))
        f, g = random_step(rng, m, grid), random_step(rng, int(rng.integers(0, 9 - m)), grid)
        j1_bad += abs(j1_distance(f, g).value - j1_oracle(f, g).value) > 1e-9
    m1_bad = 0
    for _ in range(50):
        f, g = random_step(rng, int(rng.integers(0, 4))), random_step(rng, int(rng.integers(0, 4)))
        d, o = m1_distance(f, g), m1_oracle(f, g)
        m1_bad += abs(d.value - o.value) > d.error_bound + o.error_bound
    elapsed = time.perf_counter() - start
    ok = j1_bad == 0 and m1_bad == 0 and elapsed < 60.0
    verdict(5, ok, f"j1 mismatches {j1_bad}/200, m1 mismatches {m1_bad}/50, {elapsed:.1f}s")
    assert ok


def test_metric_properties(verdict):
    rng = np.random.default_rng(12)
    failures = {"symmetry": 0, "triangle": 0, "j1<=uniform": 0, "m1<=j1": 0}
    for trial in range(200):
        grid = trial % 3 == 0
        f, g, h = (random_step(rng, int(rng.integers(0, 5)), grid) for _ in range(3))
        for dist in (uniform_distance, j1_distance):
            fg, gf = dist(f, g), dist(g, f)
            gh, fh = dist(g, h), dist(f, h)
            slack = 2 * (fg.error_bound + gh.error_bound + fh.error_bound) + 1e-9
            failures["symmetry"] += abs(fg.value - gf.value) > 2 * (fg.error_bound + gf.error_bound) + 1e-9
            failures["triangle"] += fh.value > fg.value + gh.value + slack
        failures["j1<=uniform"] += j1_distance(f, g).value > uniform_distance(f, g).value
    for _ in range(50):
        f, g = random_step(rng, int(rng.integers(0, 4))), random_step(rng, int(rng.integers(0, 4)))
        failures["m1<=j1"] += m1_distance(f, g).value > j1_distance(f, g).value + 1e-9
    ok = not any(failures.values())
    verdict(6, ok, "violations " + ", ".join(f"{k}={v}" for k, v in failures.items()))
    assert ok


def _shipped_families():
    out = []
    for name in ("j1_shift", "m1_staircase", "j2_spikepair", "m2_variant"):
        out += [example_family(name, n) for n in (3, 4, 10, 50)]
        out.append(family_limit(name))
    out += [example_family("incompleteness", n)[0] for n in (1, 2, 5, 12)]
    out += [example_family("halfline_shift", n) for n in (1, 2, 10)]
    return out


def _random_monotone(rng, step):
    k = int(rng.integers(1, 8))
    t = np.concatenate([[0.0], np.sort(rng.uniform(0, 1, k))])
    v = np.cumsum(rng.exponential(size=k + 1)) * rng.choice([-1.0, 1.0])
    if step:
        return CadlagPath.step(t, v, 1.0)
    return CadlagPath.piecewise_linear(np.append(t, 1.0), np.append(v, v[-1] + v[-1] - v[-2]), 1.0)


def test_moduli_invariants(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(13)
    paths = _shipped_families()
    kinds = ("step", "polygon", "monotone_step", "monotone_polygon")
    for k in range(500):
        kind = kinds[k % 4]
        if kind == "step":
            paths.append(random_step(rng, int(rng.integers(0, 9)), grid=k % 8 == 0))
        elif kind == "polygon":
            paths.append(random_polygon(rng, int(rng.integers(0, 6))))
        else:
            paths.append(_random_monotone(rng, kind == "monotone_step"))
    deltas = np.array([0.4, 0.2, 0.1, 0.05, 0.02])
    bad = {"omega_prime": 0, "omega_double_prime": 0, "ladder": 0}
    n_step = n_mono = 0
    for f in paths:
        if f.is_step:
            n_step += 1
            cuts = np.concatenate([[0.0], f.jump_times()])
            if f.jump_times().size and f.jump_times()[-1] < f.horizon:
                cuts = np.append(cuts, f.horizon)
            gap = np.min(np.diff(cuts)) if cuts.size > 1 else f.horizon
            bad["omega_prime"] += omega_prime(f, 0.99 * gap) != 0.0
        if f.is_monotone():
            n_mono += 1
            bad["omega_double_prime"] += any(omega_double_prime(f, d) != 0.0 for d in deltas)
        bad["ladder"] += not all(modulus_ladder(f, deltas, kind).is_monotone() for kind in KINDS)
    elapsed = time.perf_counter() - start
    ok = not any(bad.values()) and elapsed < 30.0
    verdict(7, ok, f"{len(paths)} paths ({n_step} step, {n_mono} monotone), violations {bad}, {elapsed:.1f}s")
    assert ok


def test_donsker_desk_check(verdict):
    start = time.perf_counter()
    spec = ProcessSpec("donsker", N=400, seed=7)
    ens = PathEnsemble(spec.sample(2000), spec.label())
    y = ens.values_at(1.0)
    ks = fdd_compare(ens, "norm", [1.0]).statistic[0, 0]
    var = float(np.var(y, ddof=1))
    freq = tightness_report([ens], [0.2, 0.1, 0.05], [0.5], "j1").freq[0, :, 0]
    elapsed = time.perf_counter() - start
    ok = ks < 0.06 and 0.9 <= var <= 1.1 and np.all(np.diff(freq) < 0) and elapsed < 300.0
    verdict(8, ok, f"KS {ks:.4f}, variance {var:.4f}, exceedance {np.round(freq, 3).tolist()}, {elapsed:.1f}s")
    assert ok


def test_halfline_repair(verdict):
    g = family_limit("halfline_shift")
    ns = np.array([1, 2, 4, 8, 16, 32])
    at_one, repaired = [], []
    for n in ns:
        f = example_family("halfline_shift", n)
        at_one.append(j1_distance(restrict(f, 1.0), restrict(g, 1.0)).value)
        repaired.append(halfline_distance(f, g).value)
    rate = loglog_rate(ns, repaired)
    ok = all(v == 1.0 for v in at_one) and np.all(np.diff(repaired) < 0) and rate < 0
    verdict(9, ok, f"restriction at 1 always 1, halfline {repaired[0]:.3f} -> {repaired[-1]:.3f}, rate {rate:.2f}")
    assert ok


def test_weak_product_is_weaker(verdict):
    g = family_limit("j1_shift")
    y = stack_paths([g, g])
    margins, errs = [], []
    for n in range(3, 51):
        x = stack_paths([example_family("j1_shift", n), g])
        weak = weak_product_j1(x, y).value
        strong = j1_distance(x, y, d_E="max").value
        errs.append(abs(weak - 1.0 / n))
        margins.append(strong - weak)
    ok = max(errs) <= 1e-9 and min(margins) > 0
    verdict(10, ok, f"max |weak - 1/n| = {max(errs):.1e}, min strong - weak = {min(margins):.4f}")
    assert ok
