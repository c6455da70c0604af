"""
Copyright 2026 pyWmlr contributors

WMLR library - Synthetic GPS + barometer traces with injected outliers

The barometric formula h = 44330.8 - 4946.54 p^0.1902632 is evaluated with p in pascal;
only then does it give altitudes near 0 m at sea-level pressure. Pressures written to
datasets are hectopascal.
"""


import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
import pandas as pd
from ._dataset import DEFAULT_SEED
from ._geo import DEFAULT_EARTH, haversine_array
from .data_types import Dataset, GroundTruth, Observation
from .errors import AltitudeAboveModelCeiling, NonPositivePressure

logger = logging.getLogger(__name__)

BAROMETRIC_OFFSET = 44330.8
BAROMETRIC_SCALE = 4946.54
BAROMETRIC_EXPONENT = 0.1902632
PA_PER_HPA = 100.0

# 2018-10-05 00:00:00 UTC
BASE_EPOCH = 1538697600.0
GROUND_TRUTH_COLUMNS = ["index", "true_altitude", "is_outlier"]


def barometric_altitude(pressure_pa: float) -> float:
    """Altitude in meters for a pressure in pascal"""
    if not (math.isfinite(pressure_pa) and pressure_pa > 0.0):
        raise NonPositivePressure(f"pressure must be positive, got {pressure_pa} Pa")
    return BAROMETRIC_OFFSET - BAROMETRIC_SCALE * pressure_pa ** BAROMETRIC_EXPONENT


def inverse_barometric_pressure(h: float) -> float:
    """Pressure in pascal at which the barometric formula gives altitude h"""
    if not h < BAROMETRIC_OFFSET:
        raise AltitudeAboveModelCeiling(f"altitude {h} m is not below {BAROMETRIC_OFFSET} m")
    return ((BAROMETRIC_OFFSET - h) / BAROMETRIC_SCALE) ** (1.0 / BAROMETRIC_EXPONENT)


@dataclass(frozen=True)
class SynthConfig:
    """Generator settings; the defaults follow the ranges of the cleaned campaign data"""
    n_devices: int = 20
    points_per_device: int = 500
    altitude_range: Tuple[float, float] = (0.0, 80.0)
    pressure_noise_sd: float = 0.05
    altitude_noise_sd: float = 2.0
    device_pressure_bias_sd: float = 0.3
    outlier_fraction: float = 0.05
    outlier_offset: float = 50.0
    speed_range: Tuple[float, float] = (0.0, 26.0)
    seed: int = DEFAULT_SEED
    longitude_range: Tuple[float, float] = (121.5708, 121.5820)
    latitude_range: Tuple[float, float] = (31.2566, 31.2653)
    sample_interval: float = 5.0
    # Extra distance beyond the guaranteed detection radius for displaced points, meters
    outlier_jump_m: float = 1000.0

    def __post_init__(self):
        if self.n_devices < 1 or self.points_per_device < 1:
            raise ValueError("n_devices and points_per_device must be at least 1")
        for name in ("pressure_noise_sd", "altitude_noise_sd", "device_pressure_bias_sd", "outlier_offset",
                     "outlier_jump_m"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must not be negative")
        if not 0.0 <= self.outlier_fraction < 1.0:
            raise ValueError(f"outlier_fraction must lie in [0, 1), got {self.outlier_fraction}")
        low, high = self.altitude_range
        if not low < high < BAROMETRIC_OFFSET:
            raise ValueError(f"invalid altitude_range {self.altitude_range}")
        if not 0.0 <= self.speed_range[0] <= self.speed_range[1]:
            raise ValueError(f"invalid speed_range {self.speed_range}")
        for low, high in (self.longitude_range, self.latitude_range):
            if not low < high:
                raise ValueError("coordinate ranges must be increasing")
        if not self.sample_interval > 0.0:
            raise ValueError("sample_interval must be positive")

    @property
    def size(self) -> int:
        """Total number of records"""
        return self.n_devices * self.points_per_device


class _Box:
    """Local metric frame of the longitude / latitude box"""
    def __init__(self, config: SynthConfig, radius_m: float):
        self.lon0, lon1 = config.longitude_range
        self.lat0, lat1 = config.latitude_range
        mid_lat = math.radians((self.lat0 + lat1) / 2.0)
        self.m_per_deg_lat = math.radians(1.0) * radius_m
        self.m_per_deg_lon = self.m_per_deg_lat * math.cos(mid_lat)
        self.width = (lon1 - self.lon0) * self.m_per_deg_lon
        self.height = (lat1 - self.lat0) * self.m_per_deg_lat

    @staticmethod
    def reflect(values: np.ndarray, size: float) -> np.ndarray:
        folded = np.mod(values, 2.0 * size)
        return np.where(folded <= size, folded, 2.0 * size - folded)

    def to_degrees(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.lon0 + x / self.m_per_deg_lon, self.lat0 + y / self.m_per_deg_lat

    def terrain(self, x: np.ndarray, y: np.ndarray, altitude_range: Tuple[float, float]) -> np.ndarray:
        """Plane rising from the south-west to the north-east corner across the altitude range"""
        low, high = altitude_range
        return low + (high - low) * (x / self.width + y / self.height) / 2.0


def _generate_device(device_id: str, rng: np.random.Generator, config: SynthConfig, box: _Box):
    n = config.points_per_device
    speeds = rng.uniform(config.speed_range[0], config.speed_range[1], size=n)
    headings = rng.uniform(0.0, 2.0 * math.pi, size=n)
    start = rng.uniform(0.0, 1.0, size=2) * (box.width, box.height)
    steps = np.zeros((n, 2))
    steps[1:, 0] = speeds[:-1] * config.sample_interval * np.cos(headings[:-1])
    steps[1:, 1] = speeds[:-1] * config.sample_interval * np.sin(headings[:-1])
    x = box.reflect(start[0] + np.cumsum(steps[:, 0]), box.width)
    y = box.reflect(start[1] + np.cumsum(steps[:, 1]), box.height)
    longitudes, latitudes = box.to_degrees(x, y)

    true_altitude = box.terrain(x, y, config.altitude_range)
    bias = float(rng.normal(0.0, config.device_pressure_bias_sd))
    pressure_noise = rng.normal(0.0, config.pressure_noise_sd, size=n)
    altitude_noise = rng.normal(0.0, config.altitude_noise_sd, size=n)
    pressures = np.array([inverse_barometric_pressure(h) for h in true_altitude]) / PA_PER_HPA + bias + pressure_noise
    recorded = true_altitude + altitude_noise

    t0 = BASE_EPOCH + float(rng.uniform(0.0, 86400.0))
    points = [
        Observation(device_id, t0 + i * config.sample_interval, float(longitudes[i]), float(latitudes[i]),
                    float(speeds[i]), float(pressures[i]), float(recorded[i]))
        for i in range(n)
    ]
    max_outliers = (n - 1) // 2
    flags = np.flatnonzero(rng.random(n) < config.outlier_fraction)[:max_outliers] if n >= 3 else np.array([], int)
    return points, true_altitude, bias, flags


def generate_dataset(config: Optional[SynthConfig] = None) -> Tuple[Dataset, GroundTruth]:
    """
    Random-walk traces for n_devices devices, fully determined by config.seed

    Every device gets its own generator derived from the seed. Outliers are drawn per point
    with probability outlier_fraction (at most (n-1)/2 per device) and displaced by inject_outliers.
    """
    config = config or SynthConfig()
    box = _Box(config, DEFAULT_EARTH.radius_m)
    children = np.random.SeedSequence(config.seed).spawn(config.n_devices + 1)

    points: List[Observation] = []
    true_altitude: List[float] = []
    biases: Dict[str, float] = {}
    outlier_indices: List[int] = []
    for device, child in enumerate(children[:-1]):
        device_id = f"dev{device:03d}"
        rng = np.random.default_rng(child)
        device_points, device_truth, bias, flags = _generate_device(device_id, rng, config, box)
        outlier_indices.extend(len(points) + int(i) for i in flags)
        points.extend(device_points)
        true_altitude.extend(float(h) for h in device_truth)
        biases[device_id] = bias

    data = Dataset(tuple(points), "synthetic")
    truth = GroundTruth(tuple(true_altitude), (False,) * len(points), biases)
    data, truth = inject_outliers(data, truth, outlier_indices, config, children[-1])
    logger.info("Generated %d records of %d devices, %d outliers", len(data), config.n_devices,
                len(truth.outlier_indices))
    return data, truth


def _destination(lon: float, lat: float, bearing: float, distance_m: float, radius_m: float) -> Tuple[float, float]:
    """Point at the given great-circle distance and bearing"""
    phi1, lambda1 = math.radians(lat), math.radians(lon)
    angle = distance_m / radius_m
    phi2 = math.asin(math.sin(phi1) * math.cos(angle) + math.cos(phi1) * math.sin(angle) * math.cos(bearing))
    lambda2 = lambda1 + math.atan2(math.sin(bearing) * math.sin(angle) * math.cos(phi1),
                                   math.cos(angle) - math.sin(phi1) * math.sin(phi2))
    return (math.degrees(lambda2) + 540.0) % 360.0 - 180.0, math.degrees(phi2)


def inject_outliers(data: Dataset, truth: GroundTruth, indices: Sequence[int], config: Optional[SynthConfig] = None,
                    seed=DEFAULT_SEED) -> Tuple[Dataset, GroundTruth]:
    """
    Turn the given records into outliers

    A displaced record moves away from its device's first regular record by
    max speed x device duration + 2 x (largest distance of a regular record from that anchor)
    + outlier_jump_m, farther than the detection radius of any trace of the device, and
    its altitude becomes the true altitude +/- outlier_offset.
    """
    config = config or SynthConfig()
    if len(truth) != len(data):
        raise ValueError(f"ground truth of {len(truth)} records for a dataset of {len(data)}")
    targets = sorted(set(int(i) for i in indices))
    if targets and (targets[0] < 0 or targets[-1] >= len(data)):
        raise IndexError("outlier index outside the dataset")
    target_set = set(targets)
    rng = np.random.default_rng(seed)

    points = list(data)
    flags = list(truth.is_injected_outlier)
    for i in targets:
        flags[i] = True
    by_device: Dict[str, List[int]] = {}
    for i, obs in enumerate(points):
        by_device.setdefault(obs.device_id, []).append(i)

    for device_id, members in by_device.items():
        chosen = [i for i in members if i in target_set]
        if not chosen:
            continue
        regular = sorted((i for i in members if not flags[i]), key=lambda i: points[i].time)
        if not regular:
            raise ValueError(f"device {device_id} would have no regular record left")
        anchor = points[regular[0]]
        lon = np.array([points[i].longitude for i in regular])
        lat = np.array([points[i].latitude for i in regular])
        spread = float(np.max(haversine_array(anchor.longitude, anchor.latitude, lon, lat, DEFAULT_EARTH.radius_m)))
        times = [points[i].time for i in members]
        max_speed = max((points[i].speed or 0.0) for i in members)
        distance = max_speed * (max(times) - min(times)) + 2.0 * spread + config.outlier_jump_m
        for i in chosen:
            bearing = float(rng.uniform(0.0, 2.0 * math.pi))
            sign = 1.0 if rng.random() < 0.5 else -1.0
            new_lon, new_lat = _destination(anchor.longitude, anchor.latitude, bearing, distance,
                                            DEFAULT_EARTH.radius_m)
            obs = points[i]
            points[i] = Observation(obs.device_id, obs.time, new_lon, new_lat, obs.speed, obs.pressure,
                                    truth.true_altitude[i] + sign * config.outlier_offset)

    return data.with_points(points), GroundTruth(truth.true_altitude, tuple(flags), dict(truth.device_bias_hpa))


def write_ground_truth(truth: GroundTruth, path: str) -> None:
    """Ground-truth CSV with columns index,true_altitude,is_outlier; flags are written as 0/1"""
    frame = pd.DataFrame({"index": np.arange(len(truth.true_altitude)),
                          "true_altitude": np.asarray(truth.true_altitude, dtype=np.float64),
                          "is_outlier": np.asarray(truth.is_injected_outlier, dtype=np.int64)},
                         columns=GROUND_TRUTH_COLUMNS)
    frame.to_csv(path, index=False, lineterminator="\n")


def read_ground_truth(path: str) -> GroundTruth:
    """Inverse of write_ground_truth (device biases are not stored)"""
    frame = pd.read_csv(path, float_precision="round_trip", dtype={"is_outlier": str})
    flags = frame["is_outlier"].str.strip().isin(["1", "True", "true"])
    return GroundTruth(tuple(float(value) for value in frame["true_altitude"]),
                       tuple(bool(flag) for flag in flags))
