"""
Copyright 2026 pyWmlr contributors

WMLR library - Unit Tests for the altitude quantization
"""


import numpy as np
import pytest
import pyWmlr
from pyWmlr._quantizer import classes_of, predicted_altitudes
from pyWmlr.errors import AltitudeOutOfRange, ClassOutOfRange, MissingRequiredColumn


SCHEME = pyWmlr.QuantizationScheme(0.0, 20.0, 4.0)


def test_class_of():
    assert SCHEME.num_classes == 6
    assert pyWmlr.class_of(SCHEME, 0.0) == 1
    assert pyWmlr.class_of(SCHEME, 4.0) == 1
    assert pyWmlr.class_of(SCHEME, 4.0001) == 2
    assert pyWmlr.class_of(SCHEME, 10.0) == 3
    assert pyWmlr.class_of(SCHEME, 20.0) == 5
    # headroom class above h_max
    assert pyWmlr.class_of(SCHEME, SCHEME.upper_edge) == 6
    assert pyWmlr.class_of(SCHEME, SCHEME.h_max + 2.0) == 6


def test_class_of_outside():
    with pytest.raises(AltitudeOutOfRange):
        pyWmlr.class_of(SCHEME, -0.1)
    with pytest.raises(AltitudeOutOfRange):
        pyWmlr.class_of(SCHEME, 24.5)
    with pytest.raises(AltitudeOutOfRange):
        pyWmlr.class_of(SCHEME, float("nan"))
    assert pyWmlr.class_of(SCHEME, -50.0, clip=True) == 1
    assert pyWmlr.class_of(SCHEME, 500.0, clip=True) == 6


def test_predicted_altitude():
    assert pyWmlr.predicted_altitude(SCHEME, 1) == 2.0
    assert pyWmlr.predicted_altitude(SCHEME, 3) == 10.0
    assert pyWmlr.predicted_altitude(SCHEME, 6) == 22.0
    assert list(predicted_altitudes(SCHEME, [1, 6])) == [2.0, 22.0]
    with pytest.raises(ClassOutOfRange):
        pyWmlr.predicted_altitude(SCHEME, 0)
    with pytest.raises(ClassOutOfRange):
        pyWmlr.predicted_altitude(SCHEME, 7)
    with pytest.raises(ClassOutOfRange):
        predicted_altitudes(SCHEME, [1, 7])


def test_quantization_error_sweep():
    scheme = pyWmlr.QuantizationScheme(-3.7, 81.3, 4.0)
    sweep = np.linspace(scheme.h_min, scheme.h_max, 10000)
    classes = classes_of(scheme, sweep)
    assert list(classes) == [pyWmlr.class_of(scheme, h) for h in sweep]
    error = np.abs(predicted_altitudes(scheme, classes) - sweep)
    assert error.max() <= scheme.delta / 2 + 1e-9
    assert np.all(np.diff(classes) >= 0)
    # training range fills every class below the headroom class
    assert sorted(set(classes.tolist())) == list(range(1, scheme.num_classes))
    assert pyWmlr.class_of(scheme, scheme.upper_edge) == scheme.num_classes


def test_classes_of_vectorized():
    assert list(classes_of(SCHEME, [0.0, 10.0, 4.0])) == [1, 3, 1]
    with pytest.raises(AltitudeOutOfRange):
        classes_of(SCHEME, [1.0, 30.0])
    assert list(classes_of(SCHEME, [-5.0, 30.0], clip=True)) == [1, 6]


def test_fit_scheme():
    scheme = pyWmlr.fit_scheme([12.0, 3.0, 7.5], 2.0)
    assert scheme.h_min == 3.0
    assert scheme.h_max == 12.0
    assert scheme.num_classes == 6
    assert list(scheme.centers) == [4.0, 6.0, 8.0, 10.0, 12.0, 14.0]
    with pytest.raises(ValueError):
        pyWmlr.fit_scheme([])
    with pytest.raises(ValueError):
        pyWmlr.fit_scheme([5.0, 5.0])


def test_label_observations():
    points = [pyWmlr.Observation("u1", float(i), 121.0, 31.0, 1.0, 1000.0, 4.0 * i) for i in range(5)]
    labeled = pyWmlr.label_observations(points, SCHEME)
    assert list(labeled.labels) == [1, 1, 2, 3, 4]
    assert list(labeled.altitudes) == [0.0, 4.0, 8.0, 12.0, 16.0]
    assert labeled.features.shape == (5, 5)
    with pytest.raises(MissingRequiredColumn):
        pyWmlr.label_observations([pyWmlr.Observation("u1", 0.0, 121.0, 31.0, 1.0, 1000.0)], SCHEME)
