"""
Copyright 2026 pyWmlr contributors

WMLR library - Trace grouping and majority-distance outlier detection
"""


import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
import pandas as pd
from ._geo import diameter_threshold, haversine_matrix
from .data_types import Dataset, EarthModel, OutlierVerdict, Trace
from .errors import TraceTooShort

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 3600.0
VERDICT_COLUMNS = ["device_id", "index", "exceed_fraction", "is_outlier"]


@dataclass(frozen=True)
class TraceVerdicts:
    """Verdicts of one trace together with the dataset indices of its records"""
    trace: Trace
    indices: Tuple[int, ...]
    verdicts: Tuple[OutlierVerdict, ...]

    @property
    def outlier_indices(self) -> List[int]:
        """Dataset indices of the flagged records"""
        return [self.indices[v.index] for v in self.verdicts if v.is_outlier]


def group_indices(data: Dataset, window: float = DEFAULT_WINDOW) -> List[Tuple[str, List[int]]]:
    """
    Dataset indices per trace

    Devices appear in order of their first record; a device is split wherever
    consecutive timestamps are more than `window` seconds apart.
    """
    if window < 0.0:
        raise ValueError(f"window must not be negative, got {window}")
    by_device: Dict[str, List[int]] = {}
    for index, obs in enumerate(data):
        by_device.setdefault(obs.device_id, []).append(index)

    groups = []
    for device_id, indices in by_device.items():
        indices = sorted(indices, key=lambda i: data[i].time)
        current = [indices[0]]
        for prev, index in zip(indices, indices[1:]):
            if data[index].time - data[prev].time > window:
                groups.append((device_id, current))
                current = []
            current.append(index)
        groups.append((device_id, current))
    return groups


def group_traces(data: Dataset, window: float = DEFAULT_WINDOW) -> List[Trace]:
    """Split the records into per-device traces of short time windows"""
    return [Trace(device_id, tuple(data[i] for i in indices)) for device_id, indices in group_indices(data, window)]


def pairwise_distance_matrix(trace: Trace, earth: Optional[EarthModel] = None) -> np.ndarray:
    """Symmetric n x n haversine distances of the trace records"""
    if len(trace) < 2:
        raise TraceTooShort(f"trace of {trace.device_id} has {len(trace)} point(s), need at least 2")
    return haversine_matrix(trace.longitudes, trace.latitudes, earth)


def verdicts_from_matrix(matrix: np.ndarray, d_max: float) -> List[OutlierVerdict]:
    """
    Majority vote over a distance matrix

    A point is an outlier when more than half of its n - 1 distances exceed d_max.
    """
    n = matrix.shape[0]
    exceed = matrix > d_max
    np.fill_diagonal(exceed, False)
    counts = exceed.sum(axis=1)
    return [OutlierVerdict(i, int(c) / (n - 1), 2 * int(c) > n - 1) for i, c in enumerate(counts)]


def detect_outliers(trace: Trace, earth: Optional[EarthModel] = None) -> List[OutlierVerdict]:
    """Flag the records of a trace lying too far from the majority of the others"""
    if len(trace) < 3:
        raise TraceTooShort(f"trace of {trace.device_id} has {len(trace)} point(s), need at least 3")
    d_max = diameter_threshold(trace.mean_speed, trace.duration)
    verdicts = verdicts_from_matrix(pairwise_distance_matrix(trace, earth), d_max)
    logger.debug("Trace %s: %d points, d_max %.1f m, %d outliers",
                 trace.device_id, len(trace), d_max, sum(v.is_outlier for v in verdicts))
    return verdicts


def _detect_or_pass(item: Tuple[Trace, Tuple[int, ...]], earth: Optional[EarthModel]) -> TraceVerdicts:
    trace, indices = item
    try:
        verdicts = detect_outliers(trace, earth)
    except TraceTooShort as err:
        logger.warning("%s, records kept unflagged", err.message)
        verdicts = [OutlierVerdict(i, 0.0, False) for i in range(len(trace))]
    return TraceVerdicts(trace, indices, tuple(verdicts))


def detect_dataset(data: Dataset, window: float = DEFAULT_WINDOW, earth: Optional[EarthModel] = None,
                   workers: Optional[int] = None) -> List[TraceVerdicts]:
    """
    Group the dataset into traces and run detection on each one

    Traces shorter than 3 points cannot be voted on and come back unflagged.
    Results are in trace order whether or not workers are used.
    """
    items = [
        (Trace(device_id, tuple(data[i] for i in indices)), tuple(indices))
        for device_id, indices in group_indices(data, window)
    ]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda item: _detect_or_pass(item, earth), items))
    else:
        results = [_detect_or_pass(item, earth) for item in items]
    logger.info("Detected %d outliers in %d traces", sum(len(r.outlier_indices) for r in results), len(results))
    return results


def verdict_frame(results: Sequence[TraceVerdicts]) -> pd.DataFrame:
    """One row per record: device_id, dataset index, exceed fraction and flag, ordered by dataset index"""
    rows = [
        (result.trace.device_id, result.indices[verdict.index], verdict.exceed_fraction, verdict.is_outlier)
        for result in results
        for verdict in result.verdicts
    ]
    frame = pd.DataFrame(rows, columns=VERDICT_COLUMNS)
    return frame.sort_values("index", kind="stable").reset_index(drop=True)


def write_verdicts(results: Sequence[TraceVerdicts], path: str) -> None:
    """Verdict CSV with columns device_id,index,exceed_fraction,is_outlier"""
    verdict_frame(results).to_csv(path, index=False)


def read_outlier_indices(path: str) -> List[int]:
    """Dataset indices flagged in a verdict CSV"""
    frame = pd.read_csv(path, dtype={"device_id": str})
    flags = frame["is_outlier"].astype(str).str.lower() == "true"
    return sorted(int(i) for i in frame.loc[flags, "index"])
