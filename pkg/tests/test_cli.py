import csv
import io
import json

import numpy as np
import pytest

from cadlag import CadlagPath, donsker_path, example_family, load_path, save_path
from cadlag.cli import DEMOS, main, threads


@pytest.fixture
def files(tmp_path):
    paths = {
        "half": CadlagPath.indicator(0.5, np.inf, 1.0),
        "shift": example_family("j1_shift", 4),
        "stair": example_family("m1_staircase", 10),
    }
    out = {}
    for name, p in paths.items():
        out[name] = str(tmp_path / f"{name}.json")
        save_path(p, out[name])
    return out


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_dist_uniform_self_is_zero(files, capsys):
    assert main(["dist", "--metric", "uniform", "--left", files["half"], "--right", files["half"]]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == 0.0 and doc["schema_version"] == 1


def test_dist_j1_with_oracle(files, tmp_path):
    out = tmp_path / "r.json"
    argv = ["dist", "--metric", "j1", "--left", files["shift"], "--right", files["half"], "--oracle", "--out", str(out)]
    assert main(argv) == 0
    doc = json.loads(out.read_text())
    assert doc["value"] == pytest.approx(0.25) and doc["oracle"]["agrees"]
    assert doc["witness"]["s"][0] == 0.0


def test_dist_m1_with_oracle(files, capsys):
    assert main(["dist", "--metric", "m1", "--left", files["stair"], "--right", files["half"], "--oracle"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] <= 0.1 + doc["error_bound"]


def test_dist_oracle_disagreement_fails_loudly(files, monkeypatch, capsys):
    from cadlag import metrics

    real = metrics.j1_oracle
    monkeypatch.setattr(metrics, "j1_oracle", lambda *a, **k: metrics.DistanceReport(real(*a, **k).value + 1))
    assert main(["dist", "--metric", "j1", "--left", files["shift"], "--right", files["half"], "--oracle"]) == 1
    assert "oracle disagreement" in capsys.readouterr().err


@pytest.mark.parametrize("metric", ["weakj1", "halfline", "j1log"])
def test_dist_other_metrics(files, metric, capsys):
    assert main(["dist", "--metric", metric, "--left", files["shift"], "--right", files["half"]]) == 0
    assert json.loads(capsys.readouterr().out)["metric"]


def test_dist_errors(files, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["dist", "--left", str(bad), "--right", files["half"]]) == 2
    assert main(["dist", "--left", str(tmp_path / "missing.json"), "--right", files["half"]]) == 2
    long = tmp_path / "long.json"
    save_path(CadlagPath.constant(0.0, 2.0), long)
    assert main(["dist", "--left", str(long), "--right", files["half"]]) == 2
    assert "horizon" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["dist", "--metric", "j2", "--left", files["half"], "--right", files["half"]])
    assert exc.value.code == 2


def test_modulus_csv(files, tmp_path):
    out = tmp_path / "m.csv"
    argv = ["modulus", "--kind", "omegaprime", "--path", files["stair"], "--deltas", "0.2,0.1,0.05", "--out", str(out)]
    assert main(argv) == 0
    rows = read_csv(out)
    assert [r["delta"] for r in rows] == ["0.2", "0.1", "0.05"]
    # jumps at 0.4 and 0.5: a cell longer than 0.1 must hold both
    assert [float(r["omega_prime"]) for r in rows] == [0.5, 0.5, 0.0]


def test_modulus_rejects_bad_deltas(files):
    assert main(["modulus", "--path", files["half"], "--deltas", "0.1,-2"]) == 2


def test_simulate_and_family(tmp_path):
    out = tmp_path / "w.json"
    assert main(["simulate", "--process", "donsker", "--N", "40", "--seed", "7", "--out", str(out)]) == 0
    assert load_path(out) == donsker_path(40, seed=7)
    assert main(["family", "--name", "m1_staircase", "--n", "20", "--out", str(tmp_path / "x.json")]) == 0
    assert load_path(tmp_path / "x.json") == example_family("m1_staircase", 20)
    lam = tmp_path / "lam.json"
    argv = ["family", "--name", "incompleteness", "--n", "3", "--out", str(tmp_path / "f.json"),
            "--time-change-out", str(lam)]
    assert main(argv) == 0
    assert json.loads(lam.read_text())["lambda"][1] == 1 / 16
    assert main(["family", "--name", "j1_shift", "--n", "2"]) == 2


def test_diagnose_tightness(tmp_path, capsys):
    out = tmp_path / "t.csv"
    argv = ["diagnose", "tightness", "--process", "donsker", "--ns", "20,40", "--replicas", "30",
            "--deltas", "0.2,0.1", "--eps", "0.5", "--out", str(out)]
    assert main(argv) == 0
    rows = read_csv(out)
    assert set(rows[0]) == {"quantity", "n", "delta", "eps_or_C", "frequency", "se"}
    assert all(0 <= float(r["frequency"]) <= 1 for r in rows)
    assert "finite-sample indication" in capsys.readouterr().err


def test_diagnose_poisson_m1(capsys):
    argv = ["diagnose", "tightness", "--process", "poisson", "--topology", "m1", "--ns", "2,4",
            "--replicas", "10", "--deltas", "0.2", "--eps", "0.5"]
    assert main(argv) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert {r["quantity"] for r in rows} == {"sup_norm", "modulus", "start_osc", "end_osc"}
    assert all(float(r["frequency"]) == 0 for r in rows if r["quantity"] == "modulus")


def test_demo_incompleteness(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["demo", "--name", "incompleteness", "--max-n", "12", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["n", "d_j1_next", "d_j1log_next", "d_j1_null"]
    for r in rows:
        n = int(r["n"])
        assert float(r["d_j1_next"]) == pytest.approx(2.0 ** -(n + 1), rel=1e-9)
        assert float(r["d_j1_null"]) == 1.0
        assert float(r["d_j1log_next"]) == pytest.approx(np.log(2), rel=1e-9)


def test_demo_m1_vs_j1(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["demo", "--name", "m1_vs_j1", "--ns", "5,10,20,40", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert all(float(r["d_j1"]) == pytest.approx(0.5) for r in rows)
    m1 = [float(r["d_m1"]) for r in rows]
    assert np.all(np.diff(m1) < 0) and m1[-1] <= 1 / 40 + float(rows[-1]["m1_error_bound"])


@pytest.mark.parametrize("name", ["j1_shift_convergence", "halfline", "weak_vs_strong_product"])
def test_deterministic_demos_are_reproducible(name, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["demo", "--name", name, "--ns", "3,6,12", "--n-grid", "40", "--out", str(a)]) == 0
    assert main(["demo", "--name", name, "--ns", "3,6,12", "--n-grid", "40", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert list(read_csv(a)[0]) == list(DEMOS[name].columns)


def test_demo_donsker_small(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["demo", "--name", "donsker", "--N", "100", "--replicas", "200", "--out", str(out)]) == 0
    values = {(r["quantity"], r["delta"]): float(r["value"]) for r in read_csv(out)}
    assert 0 <= values[("ks_statistic", "nan")] <= 1
    assert 0.8 <= values[("variance", "nan")] <= 1.2


def test_threads_env(monkeypatch):
    monkeypatch.setenv("CADLAG_THREADS", "3")
    assert threads() == 3
    monkeypatch.setenv("CADLAG_THREADS", "zero")
    with pytest.raises(Exception):
        threads()
