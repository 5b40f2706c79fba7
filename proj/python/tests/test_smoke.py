import math

import numpy as np
import pytest

import brforest as bf


def test_expected_distinct_math():
    assert bf.bootstrap_sample_size(100, 2.5) == 250
    assert bf.expected_distinct_limit(1.0) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    # E[distinct] = n (1 - (1 - 1/n)^s)
    n, rate = 1000, 0.5
    s = bf.bootstrap_sample_size(n, rate)
    assert bf.expected_distinct(n, rate) == pytest.approx(
        n * (1 - (1 - 1 / n) ** s), rel=1e-12
    )


def test_fit_predict_roundtrip():
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 5, size=(300, 2))
    y = x[:, 0] * 2 + rng.normal(scale=0.1, size=300)
    f = bf.fit(x, y, n_trees=50, bootstrap_rate=1.0, seed=3, threads=2)
    assert f.n_trees == 50
    pred = f.predict(x)
    assert pred.shape == (300,)
    assert np.mean((pred - y) ** 2) < 0.1
    r2 = f.oob_r2()
    assert r2 is not None and r2 > 0.9
    assert f.oob_coverage() == pytest.approx(1.0)


def test_presets_and_determinism():
    names = bf.preset_names()
    assert "RF[100]" in names and len(names) == 16
    x, y = bf.gen_regions(1.0, 7)
    assert x.shape == (360, 4) and y.shape == (360,)
    a = bf.fit(x, y, preset="RF[100]", bootstrap_rate=2.0, seed=9)
    b = bf.fit(x, y, preset="RF[100]", bootstrap_rate=2.0, seed=9, threads=4)
    probe = x[:25]
    assert np.array_equal(a.predict(probe), b.predict(probe))


def test_synthetic_generators():
    x, y = bf.gen_pure_noise(2.0, 500, 1)
    assert x.shape == (500, 1)
    assert abs(y.mean()) < 0.5
    assert y.std() == pytest.approx(2.0, rel=0.2)
    x2, y2 = bf.gen_pure_noise(2.0, 500, 1)
    assert np.array_equal(y, y2)


def test_characterize_keys():
    x, y = bf.gen_regions(1.0, 3)
    rep = bf.characterize(x, y, seed=1, threads=2)
    assert rep["mutual_info_sum"] >= 0
    assert rep["hsic_rbf"] > 0
    assert rep["oob_r2"] is None or isinstance(rep["oob_r2"], float)


def test_stats():
    assert bf.mann_whitney([1, 2, 3], [4, 5, 6], alternative="less")["p_value"] == (
        pytest.approx(0.05)
    )
    t = bf.paired_t([1, 2, 3, 4], [2, 3, 4, 5], alternative="less")
    assert t["degenerate"] and t["p_value"] == 0.0
    assert bf.cohens_d([2, 4], [1, 3]) == pytest.approx(1 / math.sqrt(2))
    assert bf.spearman([1, 2, 3], [1, 2, 3])["statistic"] == pytest.approx(1.0)


def test_sweep_shape():
    x, y = bf.gen_regions(1.0, 11)
    res = bf.sweep(
        x, y, configs=["RF[100]"], br_values=[0.5, 1.0], folds=2, repeats=3, seed=5
    )
    assert res["folds"] == 2 and res["repeats"] == 3
    assert len(res["cells"]) == 2
    for cell in res["cells"]:
        assert len(cell["mse"]) == 6


def test_domain_errors_raise_valueerror():
    with pytest.raises(ValueError):
        bf.expected_distinct(0, 1.0)
    with pytest.raises(ValueError):
        bf.fit(np.zeros((5, 1)), np.zeros(5), bootstrap_rate=0.0)
