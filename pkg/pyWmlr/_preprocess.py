"""
Copyright 2026 pyWmlr contributors

WMLR library - Data cleaning and feature standardization
"""


import logging
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union
import numpy as np
import pandas as pd
from .data_types import Dataset, Scaler, SigmaFilterResult, SigmaStats
from .errors import (DimensionMismatch, EmptyDataset, MissingRequiredColumn, TooFewPoints,
                     ZeroVarianceFeature)
from .types import Field

logger = logging.getLogger(__name__)

DEFAULT_MONITORED = (Field.PRESSURE, Field.ALTITUDE)
SIGMA_FACTOR = 3.0

SigmaInput = Union[Dataset, pd.DataFrame, Mapping[str, Sequence[float]], Sequence[float], np.ndarray]


def drop_missing(data: Dataset, required: Iterable[str] = ()) -> Dataset:
    """Keep the records carrying every required field, in order"""
    required = list(required)
    known = set(Field.getRequiredFields()) | set(Field.getOptionalFields())
    unknown = [name for name in required if name not in known]
    if unknown:
        raise ValueError(f"Unknown fields: {unknown}")

    kept = [obs for obs in data if all(obs.has(name) for name in required)]
    if not kept:
        raise EmptyDataset(f"No record carries all of {required}")
    if len(kept) < len(data):
        logger.info("Dropped %d of %d records missing one of %s", len(data) - len(kept), len(data), required)
    return data.with_points(kept)


def _monitored_columns(values: SigmaInput, monitored: Optional[Sequence[str]]) -> Dict[str, np.ndarray]:
    if isinstance(values, Dataset):
        names = list(monitored) if monitored is not None else list(DEFAULT_MONITORED)
        columns = {}
        for name in names:
            column = [getattr(obs, name) for obs in values]
            if any(v is None for v in column):
                raise MissingRequiredColumn(f"{name} is absent on some records")
            columns[name] = np.asarray(column, dtype=np.float64)
        return columns
    if isinstance(values, pd.DataFrame):
        names = list(monitored) if monitored is not None else list(values.columns)
        return {name: values[name].to_numpy(dtype=np.float64) for name in names}
    if isinstance(values, Mapping):
        names = list(monitored) if monitored is not None else list(values.keys())
        return {name: np.asarray(values[name], dtype=np.float64) for name in names}
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 1:
        raise ValueError("Plain value input must be one-dimensional")
    return {"value": array}


def three_sigma_filter(values: SigmaInput, monitored: Optional[Sequence[str]] = None) -> SigmaFilterResult:
    """
    Remove records where any monitored field deviates by at least 3 sigma from its mean

    Mean and sample standard deviation are taken per field over the whole input.
    A field with sigma = 0 removes nothing.
    """
    columns = _monitored_columns(values, monitored)
    if not columns:
        raise ValueError("No monitored field")
    lengths = {len(column) for column in columns.values()}
    if len(lengths) != 1:
        raise ValueError("Monitored fields differ in length")
    count = lengths.pop()
    if count < 2:
        raise TooFewPoints(f"3-sigma rule needs at least 2 records, got {count}")

    remove = np.zeros(count, dtype=bool)
    stats = {}
    for name, column in columns.items():
        mean = float(np.mean(column))
        std = float(np.std(column, ddof=1))
        stats[name] = SigmaStats(mean, std, count)
        if std > 0.0:
            remove |= np.abs(column - mean) >= SIGMA_FACTOR * std

    kept = tuple(int(i) for i in np.flatnonzero(~remove))
    removed = tuple(int(i) for i in np.flatnonzero(remove))
    logger.debug("3-sigma rule on %s removed %d of %d records", list(columns), len(removed), count)
    return SigmaFilterResult(kept, removed, stats)


def apply_sigma_filter(data: Dataset, monitored: Optional[Sequence[str]] = None) -> Tuple[Dataset, SigmaFilterResult]:
    """three_sigma_filter on a Dataset, returning the kept records as well"""
    result = three_sigma_filter(data, monitored)
    if not result.kept:
        raise EmptyDataset("3-sigma rule removed every record")
    logger.info("3-sigma rule removed %d of %d records", len(result.removed), len(data))
    return data.with_points([data[i] for i in result.kept]), result


def fit_scaler(train: Union[Sequence[Sequence[float]], np.ndarray], names: Optional[Sequence[str]] = None,
               minmax: bool = False) -> Scaler:
    """
    Fit per-feature mean and sample standard deviation

    minmax additionally rescales the standardized training range to [0, 1].
    """
    matrix = np.atleast_2d(np.asarray(train, dtype=np.float64))
    if matrix.shape[0] < 2:
        raise TooFewPoints(f"Scaler needs at least 2 vectors, got {matrix.shape[0]}")
    dimension = matrix.shape[1]
    if names is None:
        features = Field.getFeatureFields()
        names = features if dimension == len(features) else [f"x{i}" for i in range(dimension)]
    if len(names) != dimension:
        raise DimensionMismatch(f"{len(names)} names for {dimension} features")

    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0, ddof=1)
    for name, value in zip(names, std):
        if not value > 0.0:
            raise ZeroVarianceFeature(f"feature '{name}' has zero variance")

    if not minmax:
        return Scaler(tuple(mean), tuple(std), tuple(names))
    standardized = (matrix - mean) / std
    return Scaler(tuple(mean), tuple(std), tuple(names),
                  tuple(standardized.min(axis=0)), tuple(standardized.max(axis=0)))


def _check_dimension(scaler: Scaler, x: np.ndarray) -> None:
    if x.shape[-1] != scaler.dimension:
        raise DimensionMismatch(f"expected {scaler.dimension} features, got {x.shape[-1]}")


def apply_scaler(scaler: Scaler, x: Union[Sequence[float], np.ndarray]) -> np.ndarray:
    """Standardize one vector or the rows of a matrix"""
    x = np.asarray(x, dtype=np.float64)
    _check_dimension(scaler, x)
    result = (x - np.asarray(scaler.mean)) / np.asarray(scaler.std)
    if scaler.minmax:
        lower = np.asarray(scaler.lower)
        result = (result - lower) / (np.asarray(scaler.upper) - lower)
    return result


def invert_scaler(scaler: Scaler, z: Union[Sequence[float], np.ndarray]) -> np.ndarray:
    """Inverse of apply_scaler"""
    z = np.asarray(z, dtype=np.float64)
    _check_dimension(scaler, z)
    if scaler.minmax:
        lower = np.asarray(scaler.lower)
        z = z * (np.asarray(scaler.upper) - lower) + lower
    return z * np.asarray(scaler.std) + np.asarray(scaler.mean)
