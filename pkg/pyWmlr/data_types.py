"""
Copyright 2026 pyWmlr contributors

WMLR library - Module for the record types shared by all library functions
"""


import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union, overload
import numpy as np
import pandas as pd
from .errors import CoordinateOutOfRange, MalformedNumber, ValueOutOfRange, TooFewPoints
from .types import ErrorCode, Field


def _check_finite(name: str, value: Optional[float]) -> None:
    if value is not None and not math.isfinite(value):
        raise MalformedNumber(f"{name} is not finite: {value}")


@dataclass(frozen=True)
class Observation:
    """One timestamped GPS + barometer record"""
    device_id: str
    # Seconds since the Unix epoch
    time: float
    # Degrees in [-180, 180]
    longitude: float
    # Degrees in [-90, 90]
    latitude: float
    # Meters per second
    speed: Optional[float] = None
    # Hectopascal
    pressure: Optional[float] = None
    # Meters
    altitude: Optional[float] = None
    # Recorded altitude before an outlier correction replaced it
    original_altitude: Optional[float] = None

    def __post_init__(self):
        for name in (Field.TIME, Field.LONGITUDE, Field.LATITUDE, Field.SPEED, Field.PRESSURE, Field.ALTITUDE,
                     Field.ORIGINAL_ALTITUDE):
            _check_finite(name, getattr(self, name))
        if not -180.0 <= self.longitude <= 180.0:
            raise CoordinateOutOfRange(f"longitude {self.longitude} outside [-180, 180]")
        if not -90.0 <= self.latitude <= 90.0:
            raise CoordinateOutOfRange(f"latitude {self.latitude} outside [-90, 90]")
        if self.speed is not None and self.speed < 0.0:
            raise ValueOutOfRange(f"negative speed {self.speed}")
        if self.pressure is not None and self.pressure <= 0.0:
            raise ValueOutOfRange(f"non-positive pressure {self.pressure}")

    def has(self, name: str) -> bool:
        """True when the named field is present"""
        return getattr(self, name) is not None

    @property
    def geo_point(self) -> "GeoPoint":
        """Horizontal position of the record"""
        return GeoPoint(self.longitude, self.latitude)


@dataclass(frozen=True)
class Rejection:
    """A CSV row that was skipped while loading"""
    # 1-based data row number (the header is row 0)
    row: int
    code: ErrorCode
    detail: str

    def __str__(self):
        return f"row {self.row}: {self.code.name} ({self.detail})"


@dataclass(frozen=True)
class Dataset:
    """Observations in file order together with where they came from"""
    points: Tuple[Observation, ...]
    provenance: str = "synthetic"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Observation]:
        return iter(self.points)

    def __getitem__(self, index: int) -> Observation:
        return self.points[index]

    def with_points(self, points: Sequence[Observation]) -> "Dataset":
        """Same provenance, other points"""
        return Dataset(tuple(points), self.provenance)

    @property
    def has_audit_column(self) -> bool:
        """True when any record carries an original altitude"""
        return any(obs.original_altitude is not None for obs in self.points)

    def to_dataframe(self, schema: Optional[Sequence[str]] = None) -> pd.DataFrame:
        """Records as a DataFrame with one column per schema field, absent values as NaN"""
        if schema is None:
            schema = Field.getDefaultSchema()
            if self.has_audit_column:
                schema = schema + [Field.ORIGINAL_ALTITUDE]
        columns = {}
        for name in schema:
            values = [getattr(obs, name) for obs in self.points]
            if name == Field.DEVICE_ID:
                columns[name] = pd.Series(values, dtype="object")
            else:
                columns[name] = pd.Series([np.nan if v is None else v for v in values], dtype="float64")
        return pd.DataFrame(columns, columns=list(schema))


@dataclass(frozen=True)
class GeoPoint:
    """Longitude / latitude pair in degrees"""
    longitude: float
    latitude: float

    def __post_init__(self):
        if not -180.0 <= self.longitude <= 180.0:
            raise CoordinateOutOfRange(f"longitude {self.longitude} outside [-180, 180]")
        if not -90.0 <= self.latitude <= 90.0:
            raise CoordinateOutOfRange(f"latitude {self.latitude} outside [-90, 90]")


@dataclass(frozen=True)
class EarthModel:
    """Spherical earth"""
    radius_m: float = 6371008.8

    def __post_init__(self):
        if not self.radius_m > 0.0:
            raise ValueError(f"Earth radius must be positive, got {self.radius_m}")


@dataclass(frozen=True)
class LabeledPoint:
    """Feature vector with its altitude and altitude class"""
    features: np.ndarray
    altitude: float
    class_label: int


class LabeledSet(Sequence):
    """
    Array-backed sequence of LabeledPoint

    features is an N x I matrix in feature-index order, altitudes and labels have length N.
    Labels are 1-based class indices.
    """
    def __init__(self, features: np.ndarray, altitudes: Sequence[float], labels: Sequence[int]):
        self.features = np.atleast_2d(np.asarray(features, dtype=np.float64))
        self.altitudes = np.asarray(altitudes, dtype=np.float64).reshape(-1)
        self.labels = np.asarray(labels, dtype=np.int64).reshape(-1)
        if not len(self.features) == len(self.altitudes) == len(self.labels):
            raise ValueError(
                f"Length mismatch: {len(self.features)} features, {len(self.altitudes)} altitudes, "
                f"{len(self.labels)} labels"
            )

    @classmethod
    def from_points(cls, points: Sequence[LabeledPoint]) -> "LabeledSet":
        """Stack individual points"""
        if isinstance(points, LabeledSet):
            return points
        if not points:
            raise TooFewPoints("No labeled points")
        return cls(
            np.vstack([np.asarray(p.features, dtype=np.float64) for p in points]),
            [p.altitude for p in points],
            [p.class_label for p in points],
        )

    @property
    def dimension(self) -> int:
        """Feature dimension I"""
        return self.features.shape[1]

    def take(self, indices: Sequence[int]) -> "LabeledSet":
        """Subset in the given index order"""
        indices = np.asarray(indices, dtype=np.int64)
        return LabeledSet(self.features[indices], self.altitudes[indices], self.labels[indices])

    def __len__(self) -> int:
        return len(self.labels)

    @overload
    def __getitem__(self, index: int) -> LabeledPoint: ...

    @overload
    def __getitem__(self, index: slice) -> "LabeledSet": ...

    def __getitem__(self, index: Union[int, slice]):
        if isinstance(index, slice):
            return self.take(np.arange(len(self))[index])
        return LabeledPoint(self.features[index].copy(), float(self.altitudes[index]), int(self.labels[index]))

    def __repr__(self):
        return f"{self.__class__.__name__} (N: {len(self)}, I: {self.dimension})"


@dataclass(frozen=True)
class Trace:
    """Records of one device within a short time window, sorted by time"""
    device_id: str
    observations: Tuple[Observation, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.observations, key=lambda obs: obs.time))
        object.__setattr__(self, "observations", ordered)

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self) -> Iterator[Observation]:
        return iter(self.observations)

    @property
    def duration(self) -> float:
        """Seconds between the first and the last record"""
        if not self.observations:
            return 0.0
        return self.observations[-1].time - self.observations[0].time

    @property
    def mean_speed(self) -> float:
        """Mean of the recorded speeds; records without speed are left out, no speed at all gives 0"""
        speeds = [obs.speed for obs in self.observations if obs.speed is not None]
        if not speeds:
            return 0.0
        return float(np.mean(speeds))

    @property
    def longitudes(self) -> np.ndarray:
        return np.array([obs.longitude for obs in self.observations], dtype=np.float64)

    @property
    def latitudes(self) -> np.ndarray:
        return np.array([obs.latitude for obs in self.observations], dtype=np.float64)


@dataclass(frozen=True)
class OutlierVerdict:
    """Majority-distance vote for one trace position"""
    index: int
    exceed_fraction: float
    is_outlier: bool


@dataclass(frozen=True)
class SigmaStats:
    """Mean and sample standard deviation (n - 1 denominator) of one monitored field"""
    mean: float
    std: float
    n: int


@dataclass(frozen=True)
class SigmaFilterResult:
    """Outcome of the 3-sigma rule"""
    kept: Tuple[int, ...]
    removed: Tuple[int, ...]
    stats: Dict[str, SigmaStats]

    @property
    def retained_fraction(self) -> float:
        total = len(self.kept) + len(self.removed)
        return len(self.kept) / total if total else 0.0


@dataclass(frozen=True)
class Scaler:
    """
    Per-feature standardization fitted on training data

    With lower/upper set, the standardized values are additionally rescaled to [0, 1]
    using the standardized training range.
    """
    mean: Tuple[float, ...]
    std: Tuple[float, ...]
    names: Tuple[str, ...] = ()
    lower: Optional[Tuple[float, ...]] = None
    upper: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "mean", tuple(float(v) for v in self.mean))
        object.__setattr__(self, "std", tuple(float(v) for v in self.std))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(len(self.mean))))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.mean) != len(self.std) or len(self.names) != len(self.mean):
            raise ValueError("Scaler columns differ in length")
        if any(not s > 0.0 for s in self.std):
            raise ValueError("Scaler standard deviations must be positive")
        if (self.lower is None) != (self.upper is None):
            raise ValueError("lower and upper must be given together")
        if self.lower is not None:
            object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
            object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))

    @property
    def dimension(self) -> int:
        return len(self.mean)

    @property
    def minmax(self) -> bool:
        """True when the [0, 1] rescaling is active"""
        return self.lower is not None


@dataclass(frozen=True)
class QuantizationScheme:
    """
    Altitude <-> class table

    Class k covers (h_min + (k-1) delta, h_min + k delta], h_min itself belongs to class 1,
    and the class altitude is the interval center (k - 1/2) delta + h_min.
    """
    h_min: float
    h_max: float
    delta: float
    num_classes: int = field(default=0)

    def __post_init__(self):
        if not self.delta > 0.0:
            raise ValueError(f"Quantization step must be positive, got {self.delta}")
        if not self.h_min < self.h_max:
            raise ValueError(f"h_min ({self.h_min}) must be below h_max ({self.h_max})")
        expected = int(math.ceil((self.h_max - self.h_min) / self.delta)) + 1
        if self.num_classes == 0:
            object.__setattr__(self, "num_classes", expected)
        elif self.num_classes != expected:
            raise ValueError(f"num_classes {self.num_classes} does not match the class table ({expected})")

    @property
    def upper_edge(self) -> float:
        """Upper edge of the top class, h_min + K delta"""
        return self.h_min + self.num_classes * self.delta

    @property
    def centers(self) -> np.ndarray:
        """Class altitudes for k = 1..K"""
        return (np.arange(1, self.num_classes + 1) - 0.5) * self.delta + self.h_min


@dataclass(frozen=True)
class GroundTruth:
    """True altitudes and injected-outlier flags aligned with a synthetic dataset"""
    true_altitude: Tuple[float, ...]
    is_injected_outlier: Tuple[bool, ...]
    device_bias_hpa: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "true_altitude", tuple(float(v) for v in self.true_altitude))
        object.__setattr__(self, "is_injected_outlier", tuple(bool(v) for v in self.is_injected_outlier))
        if len(self.true_altitude) != len(self.is_injected_outlier):
            raise ValueError("Ground truth columns differ in length")

    def __len__(self) -> int:
        return len(self.true_altitude)

    @property
    def outlier_indices(self) -> List[int]:
        return [i for i, flag in enumerate(self.is_injected_outlier) if flag]


@dataclass(frozen=True, order=True)
class Version:
    """Version information with major and minor part"""
    major: int
    minor: int
    micro: int = 0

    def __str__(self):
        if self.micro > 0:
            return f"{self.major}.{self.minor}.{self.micro}"
        return f"{self.major}.{self.minor}"

    def supports(self, major: int, minor: int) -> bool:
        """Same major version and at least the given minor version"""
        return self.major == major and self.minor >= minor

    @staticmethod
    def parse(string: str) -> "Version":
        """
        Parses a string MAJOR.MINOR[.MICRO]
        """
        parts = string.strip().split(".")
        if len(parts) < 2:
            raise ValueError(f"Not a valid version string: {string!r}")
        return Version(*[int(x) for x in parts[:3]])