"""
Copyright 2026 pyWmlr contributors

WMLR library - Vertical error statistics, empirical CDF and report files
"""


import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple
import numpy as np
import pandas as pd
from .errors import EmptySequence, IoFailure
from .types import AltitudeSource, ReportFormat

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["method", "min", "max", "mean", "median", "std", "p67", "p90"]
CDF_COLUMNS = ["error_m", "cum_prob"]
PREDICTION_COLUMNS = ["method", "index", "altitude", "predicted_altitude", "error_m"]


@dataclass(frozen=True)
class ErrorStats:
    """Summary of absolute vertical errors in meters"""
    min: float
    max: float
    mean: float
    median: float
    std: float
    p67: float
    p90: float
    count: int

    def as_row(self) -> List[float]:
        return [self.min, self.max, self.mean, self.median, self.std, self.p67, self.p90]


@dataclass(frozen=True)
class ErrorReport:
    """Errors of one method on the test points"""
    method_name: str
    errors: Tuple[float, ...]
    stats: ErrorStats
    altitude_source: AltitudeSource = AltitudeSource.GROUND_TRUTH


def _as_errors(errors: Sequence[float]) -> np.ndarray:
    values = np.asarray(errors, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise EmptySequence("no errors")
    if not np.all(np.isfinite(values)) or np.any(values < 0.0):
        raise ValueError("errors must be finite and non-negative")
    return values


def percentile(errors: Sequence[float], q: int) -> float:
    """Nearest-rank percentile: the ceil(q N / 100)-th smallest error, q in whole percent"""
    if not 0 < q <= 100:
        raise ValueError(f"percentile must lie in (0, 100], got {q}")
    ordered = np.sort(_as_errors(errors))
    rank = -(-q * len(ordered) // 100)
    return float(ordered[rank - 1])


def error_stats(errors: Sequence[float]) -> ErrorStats:
    """Min, max, mean, median, sample std, nearest-rank p67 and p90"""
    values = _as_errors(errors)
    std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    return ErrorStats(
        float(values.min()), float(values.max()), float(values.mean()), float(np.median(values)), std,
        percentile(values, 67), percentile(values, 90), len(values),
    )


def make_report(method_name: str, errors: Sequence[float],
                altitude_source: AltitudeSource = AltitudeSource.GROUND_TRUTH) -> ErrorReport:
    """ErrorReport with its statistics"""
    values = _as_errors(errors)
    return ErrorReport(method_name, tuple(float(e) for e in values), error_stats(values),
                       AltitudeSource(altitude_source))


def cdf_points(errors: Sequence[float], collapse: bool = False) -> List[Tuple[float, float]]:
    """
    Empirical CDF samples (x_(i), i / N) of the sorted errors

    With collapse, repeated errors keep only their largest cumulative probability.
    """
    ordered = np.sort(_as_errors(errors))
    count = len(ordered)
    points = [(float(x), (i + 1) / count) for i, x in enumerate(ordered)]
    if collapse:
        points = [p for i, p in enumerate(points) if i + 1 == count or points[i + 1][0] != p[0]]
    return points


def report_frame(reports: Sequence[ErrorReport]) -> pd.DataFrame:
    """One row per method in the column order method,min,max,mean,median,std,p67,p90"""
    rows = [[report.method_name] + report.stats.as_row() for report in reports]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def cdf_path(report_path: str, method_name: str) -> str:
    """Sibling file holding the CDF samples of a method"""
    return os.path.join(os.path.dirname(os.path.abspath(report_path)), f"{method_name}.cdf.csv")


def write_report(reports: Sequence[ErrorReport], path: str, fmt: ReportFormat = ReportFormat.CSV) -> List[str]:
    """
    Write the statistics table and one `<method>.cdf.csv` per report next to it

    Returns the paths written, the report first.
    """
    frame = report_frame(reports)
    written = [path]
    try:
        if ReportFormat(fmt) == ReportFormat.CSV:
            frame.to_csv(path, index=False)
        else:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(frame.to_string(index=False) + "\n")
                for report in reports:
                    fh.write(f"# {report.method_name}: {report.stats.count} points, "
                             f"altitude source {report.altitude_source.value}\n")
        for report in reports:
            target = cdf_path(path, report.method_name)
            pd.DataFrame(cdf_points(report.errors), columns=CDF_COLUMNS).to_csv(target, index=False)
            written.append(target)
    except OSError as err:
        raise IoFailure(f"cannot write report {path}: {err}") from err
    logger.info("Wrote report of %d methods to %s", len(reports), path)
    return written


def write_predictions(frame: pd.DataFrame, path: str) -> None:
    """Predictions CSV with columns method,index,altitude,predicted_altitude,error_m"""
    try:
        frame[PREDICTION_COLUMNS].to_csv(path, index=False)
    except OSError as err:
        raise IoFailure(f"cannot write predictions {path}: {err}") from err


def read_predictions(path: str) -> Dict[str, np.ndarray]:
    """Absolute errors per method, methods in order of first appearance"""
    if not os.path.isfile(path):
        raise FileNotFoundError(f"File does not exist: {path}")
    frame = pd.read_csv(path, dtype={"method": str}, float_precision="round_trip")
    missing = [name for name in PREDICTION_COLUMNS if name not in frame.columns]
    if missing:
        raise ValueError(f"{path} lacks columns {missing}")
    methods = list(dict.fromkeys(frame["method"]))
    return {method: frame.loc[frame["method"] == method, "error_m"].to_numpy(dtype=np.float64) for method in methods}


def reports_from_predictions(path: str,
                             altitude_source: AltitudeSource = AltitudeSource.GROUND_TRUTH) -> List[ErrorReport]:
    """One ErrorReport per method of a predictions file"""
    return [make_report(method, errors, altitude_source) for method, errors in read_predictions(path).items()]
