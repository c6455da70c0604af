"""
Copyright 2026 pyWmlr contributors

WMLR library - CSV ingestion, feature extraction and train/test splitting
"""


import csv
import io
import logging
import math
import os
from typing import List, Optional, Sequence, Tuple, TypeVar, Union
import numpy as np
import pandas as pd
from .data_types import Dataset, Observation, Rejection
from .errors import EmptyDataset, MalformedNumber, MalformedRow, MissingRequiredColumn, TooFewPoints, WmlrError
from .types import Field

logger = logging.getLogger(__name__)

# First measurement day of the reference campaign, 2018-10-05
DEFAULT_SEED = 20181005
REJECTION_COLUMNS = ["row", "reason", "detail"]

T = TypeVar("T")


def _parse_number(name: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise MalformedNumber(f"{name}={text!r} is not a number") from None
    if not math.isfinite(value):
        raise MalformedNumber(f"{name}={text!r} is not finite")
    return value


def _build_observation(values: Sequence[str], schema: Sequence[str]) -> Observation:
    if not values:
        raise MalformedRow("blank row")
    if len(values) != len(schema):
        raise MalformedRow(f"expected {len(schema)} fields, got {len(values)}")

    record = {}
    for name, text in zip(schema, values):
        text = text.strip()
        if name == Field.DEVICE_ID:
            if text:
                record[name] = text
            continue
        if text:
            record[name] = _parse_number(name, text)

    for name in Field.getRequiredFields():
        if name not in record:
            raise MissingRequiredColumn(f"{name} is missing")
    return Observation(**record)


def parse_fields(values: Sequence[str], schema: Sequence[str], row: int = 0) -> Union[Observation, Rejection]:
    """
    Build an Observation from the already split fields of one CSV row

    Empty fields become absent optionals. Bad rows are returned as Rejection, never raised.
    """
    try:
        return _build_observation(values, schema)
    except WmlrError as err:
        return Rejection(row, err.code, err.message)


def parse_csv_record(line: str, schema: Optional[Sequence[str]] = None, row: int = 0) -> Union[Observation, Rejection]:
    """Parse one CSV line against the column schema"""
    schema = list(schema) if schema is not None else Field.getDefaultSchema()
    _check_schema(schema)
    values = next(csv.reader(io.StringIO(line.rstrip("\r\n"))), [])
    return parse_fields(values, schema, row)


def _check_schema(schema: Sequence[str]) -> None:
    known = set(Field.getRequiredFields()) | set(Field.getOptionalFields())
    unknown = [name for name in schema if name not in known]
    if unknown:
        raise ValueError(f"Unknown schema columns: {unknown}")
    missing = [name for name in Field.getRequiredFields() if name not in schema]
    if missing:
        raise MissingRequiredColumn(f"schema lacks {missing}")


def load_dataset(path: str, schema: Optional[Sequence[str]] = None) -> Tuple[Dataset, List[Rejection]]:
    """
    Load a UTF-8 CSV file whose first line is a header

    Without an explicit schema the header names the columns.
    Returns the accepted records in file order and one Rejection per skipped row.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"File does not exist: {path}")

    points: List[Observation] = []
    rejections: List[Rejection] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyDataset(f"{path} is empty")
        columns = list(schema) if schema is not None else [name.strip() for name in header]
        _check_schema(columns)
        for row, values in enumerate(reader, start=1):
            result = parse_fields(values, columns, row)
            if isinstance(result, Rejection):
                rejections.append(result)
            else:
                points.append(result)

    for rejection in rejections:
        logger.debug("%s: %s", path, rejection)
    if not points:
        raise EmptyDataset(f"No valid rows in {path} ({len(rejections)} rejected)")
    logger.info("Loaded %d observations from %s, %d rows rejected", len(points), path, len(rejections))
    return Dataset(tuple(points), path), rejections


def write_dataset(data: Dataset, path: str, schema: Optional[Sequence[str]] = None) -> None:
    """Write records as CSV; absent values become empty fields"""
    frame = data.to_dataframe(schema)
    frame.to_csv(path, index=False, na_rep="", float_format=None)


def accepted_rows(num_points: int, rejections: Sequence[Rejection]) -> List[int]:
    """Data row numbers of the accepted records of a load_dataset call, in file order"""
    rejected = {rejection.row for rejection in rejections}
    total = num_points + len(rejected)
    return [row for row in range(1, total + 1) if row not in rejected]


def write_rejections(rejections: Sequence[Rejection], path: str) -> None:
    """Rejection log with columns row,reason,detail"""
    rows = [(rejection.row, rejection.code.name, rejection.detail) for rejection in rejections]
    pd.DataFrame(rows, columns=REJECTION_COLUMNS).to_csv(path, index=False, lineterminator="\n")


def feature_vector(obs: Observation) -> np.ndarray:
    """Feature vector (time, longitude, latitude, pressure, speed) of a record"""
    missing = [name for name in Field.getFeatureFields() if getattr(obs, name) is None]
    if missing:
        raise MissingRequiredColumn(f"record of {obs.device_id} at {obs.time} lacks {missing}")
    return np.array([getattr(obs, name) for name in Field.getFeatureFields()], dtype=np.float64)


def feature_matrix(observations: Sequence[Observation]) -> np.ndarray:
    """N x I matrix of feature vectors"""
    if not observations:
        return np.empty((0, len(Field.getFeatureFields())), dtype=np.float64)
    return np.vstack([feature_vector(obs) for obs in observations])


def split_train_test(points: Sequence[T], train_fraction: float = 0.7,
                     seed: int = DEFAULT_SEED) -> Tuple[List[T], List[T]]:
    """
    Seeded shuffle followed by a prefix split

    The permutation comes from numpy's PCG64 generator (numpy.random.default_rng(seed)),
    the training part holds round(train_fraction * N) points.
    """
    indices_train, indices_test = split_indices(len(points), train_fraction, seed)
    return [points[i] for i in indices_train], [points[i] for i in indices_test]


def split_indices(count: int, train_fraction: float = 0.7, seed: int = DEFAULT_SEED) -> Tuple[np.ndarray, np.ndarray]:
    """Index form of split_train_test"""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    if count < 2:
        raise TooFewPoints(f"need at least 2 points to split, got {count}")
    permutation = np.random.default_rng(seed).permutation(count)
    num_train = int(math.floor(train_fraction * count + 0.5))
    return permutation[:num_train], permutation[num_train:]
