"""
Copyright 2026 pyWmlr contributors

WMLR library - Altitude quantization into classes
"""


import math
from typing import Sequence, Union
import numpy as np
from ._dataset import feature_matrix
from .data_types import LabeledSet, Observation, QuantizationScheme
from .errors import AltitudeOutOfRange, ClassOutOfRange, MissingRequiredColumn

DEFAULT_DELTA = 4.0


def fit_scheme(altitudes: Sequence[float], delta: float = DEFAULT_DELTA) -> QuantizationScheme:
    """Class table spanning the given (training) altitudes"""
    altitudes = np.asarray(altitudes, dtype=np.float64)
    if altitudes.size == 0:
        raise ValueError("No altitudes to fit a quantization scheme")
    h_min, h_max = float(altitudes.min()), float(altitudes.max())
    if not h_min < h_max:
        raise ValueError(f"All altitudes equal {h_min}, cannot build a class table")
    return QuantizationScheme(h_min, h_max, delta)


def class_of(scheme: QuantizationScheme, h: float, clip: bool = False) -> int:
    """
    Class k whose interval (h_min + (k-1) delta, h_min + k delta] holds h, h_min itself in class 1

    K = ceil((h_max - h_min) / delta) + 1 leaves one headroom class above h_max, so altitudes
    above h_max are accepted up to h_min + K delta instead of raising. Altitudes beyond
    [h_min, h_min + K delta] raise AltitudeOutOfRange unless clip is set, which assigns them
    to the nearest edge class.
    """
    if not math.isfinite(h):
        raise AltitudeOutOfRange(f"altitude {h} is not finite")
    if h < scheme.h_min or h > scheme.upper_edge:
        if not clip:
            raise AltitudeOutOfRange(f"altitude {h} outside [{scheme.h_min}, {scheme.upper_edge}]")
        h = min(max(h, scheme.h_min), scheme.upper_edge)
    k = math.ceil((h - scheme.h_min) / scheme.delta)
    return min(max(k, 1), scheme.num_classes)


def classes_of(scheme: QuantizationScheme, altitudes: Sequence[float], clip: bool = False) -> np.ndarray:
    """Vectorized class_of"""
    h = np.asarray(altitudes, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(h)):
        raise AltitudeOutOfRange("altitudes must be finite")
    outside = (h < scheme.h_min) | (h > scheme.upper_edge)
    if np.any(outside):
        if not clip:
            first = float(h[np.flatnonzero(outside)[0]])
            raise AltitudeOutOfRange(
                f"{int(outside.sum())} altitude(s) outside [{scheme.h_min}, {scheme.upper_edge}], e.g. {first}"
            )
        h = np.clip(h, scheme.h_min, scheme.upper_edge)
    k = np.ceil((h - scheme.h_min) / scheme.delta).astype(np.int64)
    return np.clip(k, 1, scheme.num_classes)


def _check_class(scheme: QuantizationScheme, k) -> None:
    if not 1 <= k <= scheme.num_classes:
        raise ClassOutOfRange(f"class {k} outside [1, {scheme.num_classes}]")


def predicted_altitude(scheme: QuantizationScheme, k: int) -> float:
    """Center of class k: (k - 1/2) delta + h_min"""
    if isinstance(k, float) and not k.is_integer():
        raise ClassOutOfRange(f"class {k} is not an integer")
    _check_class(scheme, k)
    return (int(k) - 0.5) * scheme.delta + scheme.h_min


def predicted_altitudes(scheme: QuantizationScheme, classes: Union[Sequence[int], np.ndarray]) -> np.ndarray:
    """Vectorized predicted_altitude"""
    classes = np.asarray(classes, dtype=np.int64).reshape(-1)
    if classes.size and (classes.min() < 1 or classes.max() > scheme.num_classes):
        raise ClassOutOfRange(f"classes outside [1, {scheme.num_classes}]")
    return (classes - 0.5) * scheme.delta + scheme.h_min


def label_features(features: np.ndarray, altitudes: Sequence[float], scheme: QuantizationScheme,
                   clip: bool = False) -> LabeledSet:
    """Attach altitude classes to feature rows"""
    return LabeledSet(features, altitudes, classes_of(scheme, altitudes, clip))


def label_observations(observations: Sequence[Observation], scheme: QuantizationScheme,
                       clip: bool = False) -> LabeledSet:
    """Raw feature vectors, recorded altitudes and their classes"""
    missing = [i for i, obs in enumerate(observations) if obs.altitude is None]
    if missing:
        raise MissingRequiredColumn(f"{len(missing)} record(s) without altitude, first at position {missing[0]}")
    altitudes = [obs.altitude for obs in observations]
    return label_features(feature_matrix(observations), altitudes, scheme, clip)
