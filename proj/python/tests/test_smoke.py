import json

import numpy as np
import pytest

import pulseforge as pf


def test_dimension_table_values():
    d = pf.dimension(10.0, 5.0, 1500.0)
    assert d["bandwidth_hz"] == pytest.approx(10e6, rel=0.01)
    assert d["max_subcarriers"] == 100


def test_noncoded_and_newman_pmepr():
    spec = pf.PulseSpec(100, 1, 1e5, 20)
    x = pf.synthesize(spec, pf.noncoded_phases(100))
    assert x.dtype == np.complex128
    assert x.shape == (100 * 20,)
    assert pf.pmepr(x) == pytest.approx(100.0, rel=1e-9)
    assert abs(pf.pmepr(pf.synthesize(spec, pf.newman_phases(100))) - 1.8) <= 0.15


def test_energy_and_acf():
    spec = pf.PulseSpec(12, 3, 1e5, 4)
    x = pf.synthesize(spec, pf.random_phases(12, 3, seed=4))
    assert np.sum(np.abs(x) ** 2) * spec.sample_period == pytest.approx(1.0)
    r = pf.autocorrelation(x)
    assert r.shape == (2 * x.size - 1,)
    direct = np.correlate(x, x, mode="full")
    np.testing.assert_allclose(np.abs(r), np.abs(direct), rtol=1e-9, atol=1e-9 * abs(direct).max())


def test_evaluate_reports_sidelobes():
    spec = pf.PulseSpec(16, 1, 1e5, 8)
    rep = pf.evaluate(spec, pf.newman_phases(16))
    assert rep["islr_db"] >= rep["pslr_db"]
    tone = pf.evaluate(pf.PulseSpec(1, 1, 1e5, 8), np.zeros(1))
    assert tone["pslr_db"] is None


def test_optimize_pmepr_improves():
    spec = pf.PulseSpec(16, 1, 1e5, 8)
    out = pf.optimize_pmepr(spec, generations=30, seed=2)
    assert out["pmepr"] <= out["trace"][0][1]
    assert out["phases"].shape == (16, 1)
    again = pf.optimize_pmepr(spec, generations=30, seed=2)
    assert again["pmepr"] == out["pmepr"]


def test_optimize_moo_front():
    spec = pf.PulseSpec(6, 2, 1e5, 4)
    front = pf.optimize_moo(spec, population_size=12, generations=20, seed=1)
    assert front
    objs = [f["objectives"] for f in front]
    for a in objs:
        for b in objs:
            assert not (a[0] <= b[0] and a[1] <= b[1] and a != b)


def test_illuminate_small():
    out = pf.illuminate(pf.PulseSpec(16, 1, 20e6, 4), weight_generations=50, phase_generations=20, seed=3)
    assert np.sum(out["w_opt"] ** 2) == pytest.approx(1.0)
    assert out["gain_db"] > 0.0


def test_run_experiment_and_errors(tmp_path):
    cfg = {"pulse": {"n_subcarriers": 8, "oversampling": 4}, "runs": 3}
    runs = pf.run_experiment("baseline", json.dumps(cfg), tmp_path)
    assert [r["run_id"] for r in runs] == [0, 1, 2]
    assert (tmp_path / "baseline" / "runs.csv").exists()
    with pytest.raises(pf.Error, match="unknown key"):
        pf.run_experiment("baseline", json.dumps({"nope": 1}), tmp_path)
    with pytest.raises(pf.Error):
        pf.synthesize(pf.PulseSpec(4), np.zeros(3))
    assert "nsga2" in pf.config_reference()
