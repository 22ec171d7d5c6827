import numpy as np
import pytest

from cadlag import (
    CadlagPath,
    ProcessSpec,
    apply_time_change,
    donsker_path,
    example_family,
    family_limit,
    poisson_path,
)
from cadlag.processes import FAMILIES, replica_rng


def test_donsker_starts_at_zero_and_ends_at_scaled_sum():
    for N in (1, 7, 400):
        f = donsker_path(N, seed=3)
        assert f(0.0) == 0.0
        assert f(1.0) * np.sqrt(N) == pytest.approx(round(f(1.0) * np.sqrt(N)), abs=1e-9)


def test_donsker_interpolated_is_continuous():
    f = donsker_path(50, seed=1)
    assert f.jump_times().size == 0 and not f.is_step


def test_donsker_step_increments_have_fixed_size():
    N = 64
    f = donsker_path(N, seed=1, interpolated=False)
    sizes = np.array([r - l for _, l, r in f.jumps()])
    assert f.is_step and sizes.size <= N
    assert np.allclose(np.abs(sizes), 1 / np.sqrt(N))
    # S_floor(Nt): the last step lands exactly at t = 1
    assert f(1.0) == pytest.approx(donsker_path(N, seed=1)(1.0))


def test_donsker_variance_at_one():
    y = np.array([donsker_path(400, seed=7, stream=k)(1.0) for k in range(2000)])
    assert 0.9 <= y.var(ddof=1) <= 1.1


def test_same_seed_same_path():
    assert donsker_path(100, seed=5, stream=3) == donsker_path(100, seed=5, stream=3)
    assert donsker_path(100, seed=5, stream=3) != donsker_path(100, seed=5, stream=4)
    assert poisson_path(3.0, 2.0, seed=2, stream=1) == poisson_path(3.0, 2.0, seed=2, stream=1)


def test_replica_streams_do_not_depend_on_order():
    spec = ProcessSpec("donsker", N=30, seed=11)
    batch = spec.sample(5)
    assert [spec.path(k) for k in reversed(range(5))][::-1] == batch


def test_replica_rng_validates():
    with pytest.raises(ValueError):
        replica_rng(-1)


def test_poisson_paths_are_counting_paths():
    f = poisson_path(5.0, 2.0, seed=4)
    assert f.horizon == 2.0 and f(0.0) == 0.0
    assert all(r - l == 1.0 for _, l, r in f.jumps())
    assert f.is_monotone()


def test_poisson_mean_count():
    rate, T, m = 3.0, 2.0, 2000
    counts = np.array([poisson_path(rate, T, seed=9, stream=k)(T) for k in range(m)])
    se = np.sqrt(rate * T / m)
    assert abs(counts.mean() - rate * T) < 3 * se


def test_poisson_small_rate_mostly_null():
    m = 2000
    empty = np.mean([poisson_path(0.05, 1.0, seed=1, stream=k)(1.0) == 0 for k in range(m)])
    p = np.exp(-0.05)
    assert abs(empty - p) < 3 * np.sqrt(p * (1 - p) / m)


@pytest.mark.parametrize("kw", [{"kind": "brownian"}, {"N": 0}, {"rate": -1.0}, {"horizon": 0.0}])
def test_process_spec_validates(kw):
    with pytest.raises(ValueError):
        ProcessSpec(**kw)


def test_process_spec_label():
    assert ProcessSpec("poisson", rate=2.0, seed=4).label()["process"] == "poisson"


def test_incompleteness_family_identity():
    for n in range(1, 13):
        f_n, lam = example_family("incompleteness", n)
        f_next, _ = example_family("incompleteness", n + 1)
        assert apply_time_change(f_next, lam) == f_n


def test_staircase_limit_is_pointwise():
    g = family_limit("m1_staircase")
    assert g == CadlagPath.indicator(0.5, np.inf, 1.0)
    for t in (0.1, 0.3, 0.45, 0.5, 0.9):
        assert example_family("m1_staircase", 10_000)(t) == g(t)


@pytest.mark.parametrize("name", ["j1_shift", "m1_staircase", "j2_spikepair", "m2_variant"])
def test_interior_families_reject_small_n(name):
    for n in (0, 1, 2):
        with pytest.raises(ValueError):
            example_family(name, n)


@pytest.mark.parametrize("name", FAMILIES)
def test_family_members_are_valid_paths(name):
    for n in (3, 4, 25):
        member = example_family(name, n)
        f = member[0] if isinstance(member, tuple) else member
        assert isinstance(f, CadlagPath)
        assert f.horizon == family_limit(name).horizon


def test_unknown_family():
    with pytest.raises(ValueError):
        example_family("j3_zigzag", 5)
    with pytest.raises(ValueError):
        family_limit("j3_zigzag")
