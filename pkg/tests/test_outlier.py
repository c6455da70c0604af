"""
Copyright 2026 pyWmlr contributors

WMLR library - Unit Tests for the majority-distance outlier detection
"""


import numpy as np
import pytest
import pyWmlr
from pyWmlr._outlier import read_outlier_indices, verdicts_from_matrix, write_verdicts
from pyWmlr.errors import TraceTooShort


def _obs(device, time, lon=121.57, lat=31.26, speed=0.0):
    return pyWmlr.Observation(device, float(time), lon, lat, speed, 1010.0, 20.0)


def _stationary_trace(device="u1", t0=0.0):
    # 9 identical points and one about 100 m further north
    points = [_obs(device, t0 + 10 * i) for i in range(9)]
    points.insert(4, _obs(device, t0 + 35, lat=31.26 + 100.0 / 111195.0))
    return pyWmlr.Trace(device, tuple(points))


def test_group_traces():
    data = pyWmlr.Dataset([_obs("a", 0), _obs("b", 0), _obs("a", 5), _obs("b", 5)])
    traces = pyWmlr.group_traces(data, 3600.0)
    assert [t.device_id for t in traces] == ["a", "b"]
    assert [len(t) for t in traces] == [2, 2]

    data = pyWmlr.Dataset([_obs("a", 0), _obs("a", 10), _obs("a", 7200 + 10 + 1)])
    assert [len(t) for t in pyWmlr.group_traces(data, 3600.0)] == [2, 1]

    data = pyWmlr.Dataset([_obs("a", 10000), _obs("a", 20), _obs("a", 0), _obs("a", 10)])
    traces = pyWmlr.group_traces(data, 3600.0)
    assert [[obs.time for obs in t] for t in traces] == [[0.0, 10.0, 20.0], [10000.0]]

    assert pyWmlr.group_traces(pyWmlr.Dataset([]), 3600.0) == []


def test_pairwise_distance_matrix():
    trace = pyWmlr.Trace("u1", (_obs("u1", 0), _obs("u1", 1)))
    assert np.array_equal(pyWmlr.pairwise_distance_matrix(trace), np.zeros((2, 2)))

    trace = pyWmlr.Trace("u1", tuple(_obs("u1", i, lon=0.001 * i, lat=0.0) for i in range(3)))
    matrix = pyWmlr.pairwise_distance_matrix(trace)
    assert matrix[0, 2] == pytest.approx(2 * matrix[0, 1], rel=1e-4)
    assert np.array_equal(matrix, matrix.T)

    with pytest.raises(TraceTooShort):
        pyWmlr.pairwise_distance_matrix(pyWmlr.Trace("u1", (_obs("u1", 0),)))


def test_detect_stationary():
    trace = _stationary_trace()
    verdicts = pyWmlr.detect_outliers(trace)
    assert [v.index for v in verdicts if v.is_outlier] == [4]
    assert verdicts[4].exceed_fraction == 1.0
    assert all(v.exceed_fraction == pytest.approx(1 / 9) for v in verdicts if v.index != 4)


def test_detect_within_threshold():
    trace = pyWmlr.Trace("u1", tuple(_obs("u1", 10 * i, lon=121.57 + 1e-4 * i, speed=5.0) for i in range(10)))
    assert not any(v.is_outlier for v in pyWmlr.detect_outliers(trace))


def test_detect_tie_is_not_outlier():
    # each of the three near points has 2 of its 4 distances above the threshold: exactly one half
    points = [_obs("u1", i) for i in range(3)] + [_obs("u1", 3 + i, lat=31.27) for i in range(2)]
    verdicts = pyWmlr.detect_outliers(pyWmlr.Trace("u1", tuple(points)))
    assert [v.exceed_fraction for v in verdicts] == [0.5, 0.5, 0.5, 0.75, 0.75]
    assert [v.is_outlier for v in verdicts] == [False, False, False, True, True]


def test_detect_too_short():
    with pytest.raises(TraceTooShort):
        pyWmlr.detect_outliers(pyWmlr.Trace("u1", (_obs("u1", 0), _obs("u1", 1))))


def test_detect_stability():
    verdicts = pyWmlr.detect_outliers(_stationary_trace())
    moved = pyWmlr.detect_outliers(_stationary_trace("other", 123456.0))
    assert verdicts == moved


def test_detect_matches_matrix():
    data, _ = pyWmlr.generate_dataset(pyWmlr.SynthConfig(n_devices=3, points_per_device=30, seed=4))
    for trace in pyWmlr.group_traces(data):
        n = len(trace)
        verdicts = pyWmlr.detect_outliers(trace)
        d_max = pyWmlr.diameter_threshold(trace.mean_speed, trace.duration)
        assert verdicts == verdicts_from_matrix(pyWmlr.pairwise_distance_matrix(trace), d_max)
        for verdict in verdicts:
            assert 0.0 <= verdict.exceed_fraction <= 1.0
            assert verdict.exceed_fraction * (n - 1) == pytest.approx(round(verdict.exceed_fraction * (n - 1)))
            assert verdict.is_outlier == (verdict.exceed_fraction > 0.5)


def test_detect_injected_single():
    config = pyWmlr.SynthConfig(n_devices=1, points_per_device=10, outlier_fraction=0.0, seed=8)
    data, truth = pyWmlr.generate_dataset(config)
    data, truth = pyWmlr.inject_outliers(data, truth, [6], config, seed=1)
    (trace,) = pyWmlr.group_traces(data)
    verdicts = pyWmlr.detect_outliers(trace)
    assert [v.index for v in verdicts if v.is_outlier] == truth.outlier_indices == [6]


def test_detect_dataset_recall():
    config = pyWmlr.SynthConfig(n_devices=20, points_per_device=200, seed=17)
    data, truth = pyWmlr.generate_dataset(config)
    results = pyWmlr.detect_dataset(data)
    flagged = {i for result in results for i in result.outlier_indices}
    injected = set(truth.outlier_indices)
    assert injected
    assert len(flagged & injected) / len(injected) >= 0.95
    regular = len(data) - len(injected)
    assert len(flagged - injected) / regular <= 0.02

    threaded = pyWmlr.detect_dataset(data, workers=4)
    assert [r.verdicts for r in threaded] == [r.verdicts for r in results]


def test_detect_dataset_short_traces():
    data = pyWmlr.Dataset([_obs("a", 0), _obs("a", 1), _obs("b", 0)])
    results = pyWmlr.detect_dataset(data)
    assert [len(r.verdicts) for r in results] == [2, 1]
    assert not any(r.outlier_indices for r in results)


def test_verdict_file(tmp_path):
    data = pyWmlr.Dataset(list(_stationary_trace()) + [_obs("b", 0), _obs("b", 1)])
    path = str(tmp_path / "verdicts.csv")
    write_verdicts(pyWmlr.detect_dataset(data), path)
    assert read_outlier_indices(path) == [4]
    header = (tmp_path / "verdicts.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "device_id,index,exceed_fraction,is_outlier"
