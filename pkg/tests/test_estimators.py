import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from cadlag import CadlagPath, ModulusFeatures, PathEnsemble, SkorokhodDistance, example_family, j1_distance

SHIFTS = [example_family("j1_shift", n) for n in (3, 5, 10)]
LIMIT = CadlagPath.indicator(0.5, np.inf, 1.0)


def test_distance_matrix():
    est = SkorokhodDistance(metric="j1").fit([LIMIT])
    D = est.transform(SHIFTS)
    assert D.shape == (3, 1)
    assert np.allclose(D[:, 0], [1 / 3, 1 / 5, 1 / 10], atol=1e-12)
    assert est.n_features_in_ == 1


@pytest.mark.parametrize("metric", ["uniform", "j1", "j1log", "m1"])
def test_every_metric_is_reachable(metric):
    D = SkorokhodDistance(metric=metric).fit(SHIFTS).transform(SHIFTS)
    assert D.shape == (3, 3)
    assert np.allclose(np.diag(D), 0.0, atol=1e-9)


def test_accepts_ensembles():
    D = SkorokhodDistance().fit(PathEnsemble(SHIFTS)).transform(PathEnsemble([LIMIT]))
    assert D[0, 0] == j1_distance(LIMIT, SHIFTS[0]).value


def test_params_and_clone():
    est = SkorokhodDistance(metric="m1", resolution=500)
    assert est.get_params() == {"metric": "m1", "resolution": 500}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and not hasattr(twin, "references_")
    est.set_params(metric="uniform")
    assert est.metric == "uniform"


def test_validation():
    with pytest.raises(ValueError):
        SkorokhodDistance(metric="j2").fit(SHIFTS)
    with pytest.raises(TypeError):
        SkorokhodDistance().fit(LIMIT)
    with pytest.raises(ValueError):
        SkorokhodDistance().fit([])
    est = SkorokhodDistance().fit(SHIFTS)
    with pytest.raises(ValueError):
        est.transform([CadlagPath.constant(0.0, 2.0)])


def test_transform_before_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        SkorokhodDistance().transform(SHIFTS)


def test_modulus_features():
    spikes = [example_family("j2_spikepair", n) for n in (10, 20)]
    est = ModulusFeatures(kind="omega_double_prime", deltas=(0.2, 0.1)).fit(spikes)
    assert np.array_equal(est.transform(spikes), np.ones((2, 2)))
    assert est.get_feature_names_out().tolist() == ["omega_double_prime_0.2", "omega_double_prime_0.1"]
    assert clone(est).get_params() == {"kind": "omega_double_prime", "deltas": (0.2, 0.1)}


def test_modulus_features_validation():
    with pytest.raises(ValueError):
        ModulusFeatures(kind="omega_zero").fit(SHIFTS)
    with pytest.raises(ValueError):
        ModulusFeatures(deltas=(0.1, -0.1)).fit(SHIFTS)


def test_pipeline():
    pipe = make_pipeline(ModulusFeatures(kind="omega_prime", deltas=(0.3, 0.1)), StandardScaler())
    out = pipe.fit_transform(SHIFTS + [example_family("j2_spikepair", 10)])
    assert out.shape == (4, 2)
