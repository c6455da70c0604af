"""
Copyright 2026 pyWmlr contributors

WMLR library - Unit Tests for error statistics and reports
"""


import os
import numpy as np
import pandas as pd
import pytest
import pyWmlr
from pyWmlr._evaluate import read_predictions, reports_from_predictions, write_predictions
from pyWmlr.errors import EmptySequence


HEADER = "method,min,max,mean,median,std,p67,p90"


def test_percentile():
    errors = list(range(1, 101))
    assert pyWmlr.percentile(errors, 67) == 67.0
    assert pyWmlr.percentile(errors, 90) == 90.0
    assert pyWmlr.percentile(list(reversed(errors)), 90) == 90.0
    assert pyWmlr.percentile([3.0, 1.0, 2.0], 67) == 3.0
    assert pyWmlr.percentile([3.0, 1.0, 2.0], 100) == 3.0
    with pytest.raises(ValueError):
        pyWmlr.percentile(errors, 0)
    with pytest.raises(ValueError):
        pyWmlr.percentile(errors, 101)


def test_percentile_against_cdf():
    errors = np.random.default_rng(1).exponential(3.0, 257)
    for q in (67, 90):
        value = pyWmlr.percentile(errors, q)
        smallest = min(x for x, p in pyWmlr.cdf_points(errors) if p >= q / 100)
        assert value == smallest


def test_error_stats():
    stats = pyWmlr.error_stats([5.0] * 7)
    assert (stats.min, stats.max, stats.mean, stats.median, stats.p67, stats.p90) == (5.0,) * 6
    assert stats.std == 0.0
    assert stats.count == 7

    stats = pyWmlr.error_stats([0.0211])
    assert (stats.min, stats.max, stats.mean, stats.median, stats.p67, stats.p90) == (0.0211,) * 6
    assert stats.std == 0.0

    stats = pyWmlr.error_stats([1.0, 2.0, 3.0, 10.0])
    assert stats.mean == 4.0
    assert stats.median == 2.5
    assert stats.std == pytest.approx(np.std([1.0, 2.0, 3.0, 10.0], ddof=1))


def test_error_stats_failures():
    with pytest.raises(EmptySequence):
        pyWmlr.error_stats([])
    with pytest.raises(ValueError):
        pyWmlr.error_stats([1.0, -0.5])
    with pytest.raises(ValueError):
        pyWmlr.error_stats([1.0, float("inf")])


def test_cdf_points():
    assert pyWmlr.cdf_points([3.0, 1.0, 2.0]) == [(1.0, 1 / 3), (2.0, 2 / 3), (3.0, 1.0)]
    assert pyWmlr.cdf_points([2.0, 2.0]) == [(2.0, 0.5), (2.0, 1.0)]
    assert pyWmlr.cdf_points([2.0, 2.0], collapse=True) == [(2.0, 1.0)]

    points = pyWmlr.cdf_points(np.random.default_rng(2).uniform(0.0, 9.0, 101))
    assert points[-1][1] == 1.0
    assert 0.0 < points[0][1] <= 1.0
    assert all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(points, points[1:]))


def test_make_report():
    report = pyWmlr.make_report("WMLR", [1.0, 2.0], pyWmlr.AltitudeSource.OBSERVED)
    assert report.method_name == "WMLR"
    assert report.errors == (1.0, 2.0)
    assert report.stats.max == 2.0
    assert report.altitude_source == pyWmlr.AltitudeSource.OBSERVED


def test_write_report_csv(tmp_path):
    names = ["MLR", "WMLR", "SVM"]
    reports = [pyWmlr.make_report(name, np.arange(1.0, 11.0) * (i + 1)) for i, name in enumerate(names)]
    path = str(tmp_path / "report.csv")
    written = pyWmlr.write_report(reports, path)
    assert written[0] == path
    assert [os.path.basename(p) for p in written[1:]] == ["MLR.cdf.csv", "WMLR.cdf.csv", "SVM.cdf.csv"]

    lines = (tmp_path / "report.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == HEADER
    assert len(lines) == 4
    frame = pd.read_csv(path)
    assert list(frame["method"]) == ["MLR", "WMLR", "SVM"]
    assert list(frame["p90"]) == [9.0, 18.0, 27.0]

    cdf = pd.read_csv(tmp_path / "WMLR.cdf.csv")
    assert list(cdf.columns) == ["error_m", "cum_prob"]
    assert cdf["cum_prob"].iloc[-1] == 1.0

    first = (tmp_path / "report.csv").read_bytes()
    pyWmlr.write_report(reports, path)
    assert (tmp_path / "report.csv").read_bytes() == first


def test_write_report_empty(tmp_path):
    path = tmp_path / "report.csv"
    assert pyWmlr.write_report([], str(path)) == [str(path)]
    assert path.read_text(encoding="utf-8") == HEADER + "\n"


def test_write_report_text(tmp_path):
    path = tmp_path / "report.txt"
    pyWmlr.write_report([pyWmlr.make_report("MLR", [1.0, 2.0, 3.0])], str(path), pyWmlr.ReportFormat.TEXT)
    text = path.read_text(encoding="utf-8")
    assert "p67" in text.splitlines()[0]
    assert "# MLR: 3 points, altitude source ground_truth" in text


def test_write_report_failure(tmp_path):
    with pytest.raises(pyWmlr.IoFailure):
        pyWmlr.write_report([pyWmlr.make_report("MLR", [1.0])], str(tmp_path / "missing" / "report.csv"))


def test_predictions_file(tmp_path):
    frame = pd.DataFrame({
        "method": ["MLR", "MLR", "WMLR"],
        "index": [4, 9, 4],
        "altitude": [10.0, 12.5, 10.0],
        "predicted_altitude": [12.0, 12.0, 0.1 + 0.2],
        "error_m": [2.0, 0.5, abs(10.0 - (0.1 + 0.2))],
    })
    path = str(tmp_path / "predictions.csv")
    write_predictions(frame, path)
    errors = read_predictions(path)
    assert list(errors) == ["MLR", "WMLR"]
    assert list(errors["MLR"]) == [2.0, 0.5]
    assert errors["WMLR"][0] == abs(10.0 - (0.1 + 0.2))

    reports = reports_from_predictions(path, pyWmlr.AltitudeSource.OBSERVED)
    assert [r.method_name for r in reports] == ["MLR", "WMLR"]
    assert reports[0].stats.mean == 1.25

    with pytest.raises(FileNotFoundError):
        read_predictions(str(tmp_path / "nothing.csv"))
