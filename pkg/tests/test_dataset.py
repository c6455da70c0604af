"""
Copyright 2026 pyWmlr contributors

WMLR library - Unit Tests for CSV ingestion and splitting
"""


import numpy as np
import pytest
import pyWmlr
from pyWmlr._dataset import _build_observation, parse_fields
from pyWmlr.errors import EmptyDataset, MalformedRow, MissingRequiredColumn, TooFewPoints


HEADER = "device_id,time,longitude,latitude,speed,altitude,pressure"
LINE = "u1,1538700000,121.5767,31.2595,3,20.13,1021.33"


def _write(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def test_parse_record():
    obs = pyWmlr.parse_csv_record(LINE)
    assert isinstance(obs, pyWmlr.Observation)
    assert obs.device_id == "u1"
    assert obs.time == 1538700000.0
    assert obs.longitude == 121.5767
    assert obs.latitude == 31.2595
    assert obs.speed == 3.0
    assert obs.altitude == 20.13
    assert obs.pressure == 1021.33


def test_parse_record_absent_optional():
    obs = pyWmlr.parse_csv_record("u1,1538700000,121.5767,31.2595,3,20.13,")
    assert isinstance(obs, pyWmlr.Observation)
    assert obs.pressure is None
    assert obs.altitude == 20.13


def test_parse_record_rejections():
    rejection = pyWmlr.parse_csv_record("u1,1538700000,200.0,31.2595,3,20.13,1021.33", row=7)
    assert isinstance(rejection, pyWmlr.Rejection)
    assert rejection.row == 7
    assert rejection.code == pyWmlr.ErrorCode.COORDINATE_OUT_OF_RANGE

    rejection = pyWmlr.parse_csv_record("u1,abc,121.5767,31.2595,3,20.13,1021.33")
    assert rejection.code == pyWmlr.ErrorCode.MALFORMED_NUMBER
    rejection = pyWmlr.parse_csv_record("u1,1538700000,121.5767,31.2595,3,20.13")
    assert rejection.code == pyWmlr.ErrorCode.MALFORMED_ROW
    rejection = pyWmlr.parse_csv_record(",1538700000,121.5767,31.2595,3,20.13,1021.33")
    assert rejection.code == pyWmlr.ErrorCode.MISSING_REQUIRED_COLUMN
    rejection = pyWmlr.parse_csv_record("u1,1538700000,121.5767,31.2595,-3,20.13,1021.33")
    assert rejection.code == pyWmlr.ErrorCode.VALUE_OUT_OF_RANGE


def test_build_observation_raises_malformed_row():
    schema = pyWmlr.Field.getDefaultSchema()
    with pytest.raises(MalformedRow) as err:
        _build_observation(["u1", "1538700000"], schema)
    assert err.value.code == pyWmlr.ErrorCode.MALFORMED_ROW
    assert parse_fields(["u1", "1538700000"], schema, 4) == pyWmlr.Rejection(
        4, pyWmlr.ErrorCode.MALFORMED_ROW, "expected 7 fields, got 2")


def test_parse_record_schema():
    schema = ["time", "device_id", "latitude", "longitude"]
    obs = pyWmlr.parse_csv_record("5,u2,31.0,121.0", schema)
    assert obs.device_id == "u2"
    assert obs.latitude == 31.0
    assert obs.speed is None
    with pytest.raises(ValueError):
        pyWmlr.parse_csv_record(LINE, ["device_id", "time", "longitude", "latitude", "height"])
    with pytest.raises(MissingRequiredColumn):
        pyWmlr.parse_csv_record("u1,5", ["device_id", "time"])


def test_load_dataset(tmp_path):
    lines = [HEADER]
    for i in range(100):
        if i in (10, 50, 90):
            lines.append(f"u1,{1538700000 + i},121.5,31.2,3,not-a-number,1021.0")
        else:
            lines.append(f"u1,{1538700000 + i},121.5,31.2,3,{20.0 + i},1021.0")
    path = _write(tmp_path / "data.csv", lines)

    data, rejections = pyWmlr.load_dataset(path)
    assert len(data) == 97
    assert data.provenance == path
    assert [rejection.row for rejection in rejections] == [11, 51, 91]
    assert all(rejection.code == pyWmlr.ErrorCode.MALFORMED_NUMBER for rejection in rejections)
    # file order survives
    assert [obs.time for obs in data][:3] == [1538700000.0, 1538700001.0, 1538700002.0]

    rows = pyWmlr.accepted_rows(len(data), rejections)
    assert len(rows) == 97
    assert 11 not in rows
    assert rows[10] == 12


def test_load_dataset_blank_rows(tmp_path):
    path = _write(tmp_path / "data.csv", [HEADER, LINE, "", LINE, "u1,1538700000,121.5767,31.2595,3,x,1021.33", LINE])
    data, rejections = pyWmlr.load_dataset(path)
    assert len(data) == 3
    assert [(rejection.row, rejection.code) for rejection in rejections] == [
        (2, pyWmlr.ErrorCode.MALFORMED_ROW), (4, pyWmlr.ErrorCode.MALFORMED_NUMBER)]
    assert rejections[0].detail == "blank row"
    assert pyWmlr.accepted_rows(len(data), rejections) == [1, 3, 5]


def test_load_dataset_header_order(tmp_path):
    path = _write(tmp_path / "data.csv", ["time,longitude,latitude,device_id", "10,121.0,31.0,u9"])
    data, rejections = pyWmlr.load_dataset(path)
    assert not rejections
    assert data[0].device_id == "u9"
    assert data[0].time == 10.0


def test_load_dataset_failures(tmp_path):
    with pytest.raises(FileNotFoundError):
        pyWmlr.load_dataset(str(tmp_path / "missing.csv"))

    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(EmptyDataset):
        pyWmlr.load_dataset(str(empty))

    header_only = _write(tmp_path / "header.csv", [HEADER])
    with pytest.raises(EmptyDataset):
        pyWmlr.load_dataset(header_only)


def test_write_dataset(tmp_path):
    path = _write(tmp_path / "data.csv", [HEADER, LINE, "u2,1538700005,121.6,31.3,,,"])
    data, _ = pyWmlr.load_dataset(path)
    out = str(tmp_path / "copy.csv")
    pyWmlr.write_dataset(data, out)
    copy, rejections = pyWmlr.load_dataset(out)
    assert not rejections
    assert list(copy) == list(data)


def test_write_rejections(tmp_path):
    path = tmp_path / "rejections.csv"
    rejection = pyWmlr.Rejection(3, pyWmlr.ErrorCode.MALFORMED_ROW, "expected 7 fields, got 6")
    pyWmlr.write_rejections([rejection], str(path))
    assert path.read_text(encoding="utf-8") == "row,reason,detail\n3,MALFORMED_ROW,\"expected 7 fields, got 6\"\n"


def test_feature_vector():
    obs = pyWmlr.parse_csv_record(LINE)
    assert list(pyWmlr.feature_vector(obs)) == [1538700000.0, 121.5767, 31.2595, 1021.33, 3.0]
    with pytest.raises(MissingRequiredColumn):
        pyWmlr.feature_vector(pyWmlr.Observation("u1", 0.0, 121.0, 31.0))
    assert pyWmlr.feature_matrix([]).shape == (0, 5)
    assert pyWmlr.feature_matrix([obs, obs]).shape == (2, 5)


def test_split():
    points = list(range(10))
    train, test = pyWmlr.split_train_test(points, 0.7, seed=1)
    assert len(train) == 7
    assert len(test) == 3
    assert sorted(train + test) == points

    again = pyWmlr.split_train_test(points, 0.7, seed=1)
    assert again == (train, test)

    train_idx, test_idx = pyWmlr.split_indices(10, 0.7, seed=1)
    assert [points[i] for i in train_idx] == train
    assert len(np.intersect1d(train_idx, test_idx)) == 0


def test_split_failures():
    with pytest.raises(TooFewPoints):
        pyWmlr.split_train_test([1], 0.7)
    with pytest.raises(ValueError):
        pyWmlr.split_indices(10, 1.0)
