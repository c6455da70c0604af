"""
Copyright 2026 pyWmlr contributors

WMLR library - Spherical distances on a spherical earth
"""


from typing import Optional, Tuple
import numpy as np
from .data_types import EarthModel, GeoPoint

DEFAULT_EARTH = EarthModel()


def haversine_array(lon_a, lat_a, lon_b, lat_b, radius_m: float) -> np.ndarray:
    """Great-circle distance for degree arrays, broadcasting like any numpy ufunc"""
    lon_a, lat_a, lon_b, lat_b = (np.radians(np.asarray(v, dtype=np.float64)) for v in (lon_a, lat_a, lon_b, lat_b))
    sin_dlat = np.sin((lat_b - lat_a) / 2.0)
    sin_dlon = np.sin((lon_b - lon_a) / 2.0)
    h = sin_dlat * sin_dlat + np.cos(lat_a) * np.cos(lat_b) * (sin_dlon * sin_dlon)
    return 2.0 * radius_m * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


def haversine_distance(a: GeoPoint, b: GeoPoint, earth: Optional[EarthModel] = None) -> float:
    """Great-circle distance in meters between two points"""
    earth = earth or DEFAULT_EARTH
    return float(haversine_array(a.longitude, a.latitude, b.longitude, b.latitude, earth.radius_m))


def haversine_matrix(longitudes: np.ndarray, latitudes: np.ndarray, earth: Optional[EarthModel] = None) -> np.ndarray:
    """
    Pairwise distances of n points as an exactly symmetric n x n matrix with zero diagonal
    """
    earth = earth or DEFAULT_EARTH
    lon = np.asarray(longitudes, dtype=np.float64).reshape(-1)
    lat = np.asarray(latitudes, dtype=np.float64).reshape(-1)
    full = haversine_array(lon[:, None], lat[:, None], lon[None, :], lat[None, :], earth.radius_m)
    upper = np.triu(full, k=1)
    return upper + upper.T


def chord_distances(a: GeoPoint, b: GeoPoint, earth: Optional[EarthModel] = None) -> Tuple[float, float]:
    """
    Auxiliary chords along the two parallels: (2R sin(dlon/2) cos(lat_a), 2R sin(dlon/2) cos(lat_b))
    """
    earth = earth or DEFAULT_EARTH
    half = abs(np.sin(np.radians(b.longitude - a.longitude) / 2.0))
    d_ad = 2.0 * earth.radius_m * half * np.cos(np.radians(a.latitude))
    d_cb = 2.0 * earth.radius_m * half * np.cos(np.radians(b.latitude))
    return float(d_ad), float(d_cb)


def diameter_threshold(mean_speed: float, duration: float) -> float:
    """d_max = mean speed x measuring time"""
    if mean_speed < 0.0:
        raise ValueError(f"mean_speed must not be negative, got {mean_speed}")
    if duration < 0.0:
        raise ValueError(f"duration must not be negative, got {duration}")
    return float(mean_speed) * float(duration)
