"""
Copyright 2026 pyWmlr contributors

WMLR library - Unit Tests for the synthetic trace generator
"""


import numpy as np
import pytest
import pyWmlr
from pyWmlr._synthetic import (PA_PER_HPA, inverse_barometric_pressure, read_ground_truth,
                               write_ground_truth)
from pyWmlr.errors import AltitudeAboveModelCeiling, NonPositivePressure


ROOT_PRESSURE = (44330.8 / 4946.54) ** (1.0 / 0.1902632)


def test_barometric_altitude():
    assert abs(pyWmlr.barometric_altitude(101325.0)) < 10.0
    assert pyWmlr.barometric_altitude(ROOT_PRESSURE) == pytest.approx(0.0, abs=1e-6)
    assert pyWmlr.barometric_altitude(90000.0) > pyWmlr.barometric_altitude(100000.0)
    with pytest.raises(NonPositivePressure):
        pyWmlr.barometric_altitude(0.0)
    with pytest.raises(NonPositivePressure):
        pyWmlr.barometric_altitude(float("nan"))


def test_inverse_barometric_pressure():
    assert inverse_barometric_pressure(0.0) == pytest.approx(ROOT_PRESSURE, rel=1e-12)
    assert pyWmlr.barometric_altitude(inverse_barometric_pressure(123.4)) == pytest.approx(123.4, abs=1e-9)
    assert pyWmlr.barometric_altitude(inverse_barometric_pressure(20.0)) == pytest.approx(20.0, abs=1e-9)
    with pytest.raises(AltitudeAboveModelCeiling):
        inverse_barometric_pressure(44330.8)


def test_synth_config_validation():
    assert pyWmlr.SynthConfig().size == 10000
    with pytest.raises(ValueError):
        pyWmlr.SynthConfig(n_devices=0)
    with pytest.raises(ValueError):
        pyWmlr.SynthConfig(outlier_fraction=1.0)
    with pytest.raises(ValueError):
        pyWmlr.SynthConfig(altitude_range=(10.0, 5.0))
    with pytest.raises(ValueError):
        pyWmlr.SynthConfig(altitude_noise_sd=-1.0)
    with pytest.raises(ValueError):
        pyWmlr.SynthConfig(speed_range=(5.0, 1.0))
    with pytest.raises(ValueError):
        pyWmlr.SynthConfig(sample_interval=0.0)


def test_generate_noiseless():
    config = pyWmlr.SynthConfig(n_devices=3, points_per_device=50, outlier_fraction=0.0, altitude_noise_sd=0.0,
                                pressure_noise_sd=0.0, seed=5)
    data, truth = pyWmlr.generate_dataset(config)
    assert len(data) == len(truth) == 150
    assert not truth.outlier_indices
    assert sorted(truth.device_bias_hpa) == ["dev000", "dev001", "dev002"]
    for obs, true_altitude in zip(data, truth.true_altitude):
        bias = truth.device_bias_hpa[obs.device_id]
        assert obs.altitude == true_altitude
        assert pyWmlr.barometric_altitude((obs.pressure - bias) * PA_PER_HPA) == pytest.approx(obs.altitude, abs=1e-6)


def test_generate_ranges():
    config = pyWmlr.SynthConfig(n_devices=4, points_per_device=100, outlier_fraction=0.0, seed=6)
    data, truth = pyWmlr.generate_dataset(config)
    lon0, lon1 = config.longitude_range
    lat0, lat1 = config.latitude_range
    for obs in data:
        assert lon0 - 1e-9 <= obs.longitude <= lon1 + 1e-9
        assert lat0 - 1e-9 <= obs.latitude <= lat1 + 1e-9
        assert config.speed_range[0] <= obs.speed <= config.speed_range[1]
    assert min(truth.true_altitude) >= config.altitude_range[0] - 1e-9
    assert max(truth.true_altitude) <= config.altitude_range[1] + 1e-9

    for device in range(4):
        times = [obs.time for obs in data if obs.device_id == f"dev{device:03d}"]
        assert np.allclose(np.diff(times), config.sample_interval)


def test_generate_outlier_count():
    config = pyWmlr.SynthConfig(n_devices=10, points_per_device=100, outlier_fraction=0.05, seed=7)
    data, truth = pyWmlr.generate_dataset(config)
    count = len(truth.outlier_indices)
    assert 22 <= count <= 78
    for i in truth.outlier_indices:
        assert abs(abs(data[i].altitude - truth.true_altitude[i]) - config.outlier_offset) < 1e-9


def test_generate_deterministic(tmp_path):
    config = pyWmlr.SynthConfig(n_devices=2, points_per_device=40, seed=9)
    paths = []
    for run in range(2):
        data, truth = pyWmlr.generate_dataset(config)
        path = tmp_path / f"run{run}.csv"
        pyWmlr.write_dataset(data, str(path))
        write_ground_truth(truth, str(tmp_path / f"run{run}.truth.csv"))
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert (tmp_path / "run0.truth.csv").read_bytes() == (tmp_path / "run1.truth.csv").read_bytes()

    other, _ = pyWmlr.generate_dataset(pyWmlr.SynthConfig(n_devices=2, points_per_device=40, seed=10))
    assert list(other) != list(pyWmlr.generate_dataset(config)[0])


def test_inject_outliers():
    config = pyWmlr.SynthConfig(n_devices=2, points_per_device=20, outlier_fraction=0.0, seed=11)
    data, truth = pyWmlr.generate_dataset(config)
    moved, moved_truth = pyWmlr.inject_outliers(data, truth, [3, 25], config, seed=2)
    assert moved_truth.outlier_indices == [3, 25]
    assert moved_truth.true_altitude == truth.true_altitude
    assert not truth.outlier_indices

    for i in (3, 25):
        anchor = data[0] if i < 20 else data[20]
        distance = pyWmlr.haversine_distance(anchor.geo_point, moved[i].geo_point)
        assert distance > config.outlier_jump_m
        assert moved[i].time == data[i].time
        assert moved[i].pressure == data[i].pressure
    assert [moved[i] for i in range(40) if i not in (3, 25)] == [data[i] for i in range(40) if i not in (3, 25)]

    with pytest.raises(IndexError):
        pyWmlr.inject_outliers(data, truth, [40], config)
    with pytest.raises(ValueError):
        pyWmlr.inject_outliers(data, pyWmlr.GroundTruth((1.0,), (False,)), [0], config)


def test_ground_truth_file(tmp_path):
    truth = pyWmlr.GroundTruth((1.5, 0.1 + 0.2, -3.0), (False, True, False))
    path = str(tmp_path / "truth.csv")
    write_ground_truth(truth, path)
    assert (tmp_path / "truth.csv").read_text(encoding="utf-8").splitlines()[0] == "index,true_altitude,is_outlier"
    loaded = read_ground_truth(path)
    assert loaded.true_altitude == truth.true_altitude
    assert loaded.is_injected_outlier == truth.is_injected_outlier
    lines = (tmp_path / "truth.csv").read_text(encoding="utf-8").split("\n")
    assert [line.rsplit(",", 1)[1] for line in lines[1:4]] == ["0", "1", "0"]
    assert lines[2] == "1,0.30000000000000004,1"


def test_noiseless_pressure_altitude_anticorrelated():
    config = pyWmlr.SynthConfig(n_devices=3, points_per_device=60, altitude_noise_sd=0.0, pressure_noise_sd=0.0,
                                device_pressure_bias_sd=0.0, outlier_fraction=0.0, seed=14)
    data, truth = pyWmlr.generate_dataset(config)
    pressure = np.array([obs.pressure for obs in data])
    altitude = np.array([obs.altitude for obs in data])
    assert np.corrcoef(pressure, altitude)[0, 1] < -0.999
    order = np.argsort(truth.true_altitude)
    assert np.all(np.diff(pressure[order]) <= 0.0)
