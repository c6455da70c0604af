"""
Copyright 2026 pyWmlr contributors

WMLR library - Unit Tests for the 3-sigma rule and feature scaling
"""


import numpy as np
import pandas as pd
import pytest
import pyWmlr
from pyWmlr.errors import DimensionMismatch, EmptyDataset, TooFewPoints, ZeroVarianceFeature


def _sigma_oracle(values):
    values = np.asarray(values, dtype=np.float64)
    mean = values.mean()
    std = values.std(ddof=1)
    if std == 0.0:
        return []
    return [i for i, v in enumerate(values) if abs(v - mean) >= 3.0 * std]


def test_three_sigma_retention():
    fractions = []
    for seed in range(20):
        values = np.random.default_rng(seed).normal(10.0, 2.0, 100000)
        fractions.append(pyWmlr.three_sigma_filter(values).retained_fraction)
    assert np.mean(fractions) == pytest.approx(0.9973, abs=0.002)


def test_three_sigma_constant():
    result = pyWmlr.three_sigma_filter([5.0] * 10)
    assert result.removed == ()
    assert len(result.kept) == 10
    assert result.stats["value"].std == 0.0


def test_three_sigma_single_spike():
    values = [0.0] * 9 + [1000.0]
    result = pyWmlr.three_sigma_filter(values)
    # with n - 1 in the denominator the z-score of a lone spike among 10 stays below 3
    assert list(result.removed) == _sigma_oracle(values) == []

    values = [0.0] * 20 + [1000.0]
    result = pyWmlr.three_sigma_filter(values)
    assert list(result.removed) == _sigma_oracle(values) == [20]
    assert result.kept == tuple(range(20))


def test_three_sigma_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        values = np.concatenate([rng.normal(0.0, 1.0, 200), rng.uniform(-20, 20, 5)])
        assert list(pyWmlr.three_sigma_filter(values).removed) == _sigma_oracle(values)


def test_three_sigma_repeat_never_readmits():
    rng = np.random.default_rng(4)
    for _ in range(10):
        values = np.concatenate([rng.normal(0.0, 1.0, 500), rng.uniform(-30, 30, 10)])
        first = pyWmlr.three_sigma_filter(values)
        kept = np.asarray(first.kept)
        second = pyWmlr.three_sigma_filter(values[kept])
        survivors = set(kept[list(second.kept)].tolist())
        assert survivors <= set(first.kept)
        assert survivors.isdisjoint(first.removed)


def test_three_sigma_fields():
    frame = pd.DataFrame({"pressure": [1000.0] * 20 + [1000.0], "altitude": [10.0] * 20 + [900.0]})
    result = pyWmlr.three_sigma_filter(frame)
    assert result.removed == (20,)
    assert set(result.stats) == {"pressure", "altitude"}

    result = pyWmlr.three_sigma_filter(frame, ["pressure"])
    assert result.removed == ()
    result = pyWmlr.three_sigma_filter({"a": [1.0] * 20 + [50.0], "b": [2.0] * 21})
    assert result.removed == (20,)


def test_three_sigma_failures():
    with pytest.raises(TooFewPoints):
        pyWmlr.three_sigma_filter([1.0])
    with pytest.raises(ValueError):
        pyWmlr.three_sigma_filter({"a": [1.0, 2.0], "b": [1.0]})


def test_apply_sigma_filter():
    points = [pyWmlr.Observation("u1", float(i), 121.0, 31.0, pressure=1000.0, altitude=10.0) for i in range(20)]
    points.append(pyWmlr.Observation("u1", 20.0, 121.0, 31.0, pressure=1000.0, altitude=500.0))
    data = pyWmlr.Dataset(points, "memory")
    cleaned, result = pyWmlr.apply_sigma_filter(data)
    assert len(cleaned) == 20
    assert result.removed == (20,)
    assert cleaned.provenance == "memory"


def test_drop_missing():
    data = pyWmlr.Dataset([
        pyWmlr.Observation("u1", 0.0, 121.0, 31.0, 1.0, 1000.0, 10.0),
        pyWmlr.Observation("u1", 1.0, 121.0, 31.0, 1.0, None, 10.0),
        pyWmlr.Observation("u1", 2.0, 121.0, 31.0, None, 1000.0, 10.0),
    ])
    assert len(pyWmlr.drop_missing(data)) == 3
    assert [obs.time for obs in pyWmlr.drop_missing(data, ["pressure"])] == [0.0, 2.0]
    assert [obs.time for obs in pyWmlr.drop_missing(data, ["pressure", "speed"])] == [0.0]
    with pytest.raises(ValueError):
        pyWmlr.drop_missing(data, ["height"])
    with pytest.raises(EmptyDataset):
        pyWmlr.drop_missing(data.with_points(data.points[1:2]), ["pressure"])


def test_fit_scaler():
    scaler = pyWmlr.fit_scaler([[0.0, 0.0], [2.0, 2.0]])
    assert scaler.mean == (1.0, 1.0)
    assert scaler.std == pytest.approx((np.sqrt(2.0), np.sqrt(2.0)))
    assert scaler.names == ("x0", "x1")

    with pytest.raises(ZeroVarianceFeature):
        pyWmlr.fit_scaler([[1.0, 0.0], [1.0, 2.0]])
    with pytest.raises(TooFewPoints):
        pyWmlr.fit_scaler([[1.0, 2.0]])
    with pytest.raises(DimensionMismatch):
        pyWmlr.fit_scaler([[0.0, 0.0], [2.0, 2.0]], names=["a"])


def test_apply_scaler_statistics():
    data = np.random.default_rng(5).normal([10.0, -3.0, 0.0, 1000.0, 2.0], [1.0, 5.0, 0.1, 20.0, 3.0], (100, 5))
    scaler = pyWmlr.fit_scaler(data)
    assert scaler.names == tuple(pyWmlr.Field.getFeatureFields())
    z = pyWmlr.apply_scaler(scaler, data)
    assert np.allclose(z.mean(axis=0), 0.0, atol=1e-10)
    assert np.allclose(z.std(axis=0, ddof=1), 1.0, atol=1e-10)
    assert np.allclose(pyWmlr.invert_scaler(scaler, z), data, rtol=0.0, atol=1e-9)

    with pytest.raises(DimensionMismatch):
        pyWmlr.apply_scaler(scaler, [1.0, 2.0])


def test_minmax_scaler():
    data = np.random.default_rng(9).uniform(-5.0, 5.0, (50, 3))
    scaler = pyWmlr.fit_scaler(data, minmax=True)
    assert scaler.minmax
    z = pyWmlr.apply_scaler(scaler, data)
    assert z.min(axis=0) == pytest.approx([0.0, 0.0, 0.0], abs=1e-12)
    assert z.max(axis=0) == pytest.approx([1.0, 1.0, 1.0], abs=1e-12)
    assert np.allclose(pyWmlr.invert_scaler(scaler, z), data, atol=1e-9)
