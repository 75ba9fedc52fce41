"""Geodesic primitives on a spherical Earth.

Distances, bearings, destination points, and circular geofence membership.
A sphere of radius 6,371,000 m is used throughout; at the sub-hundred-km
scales of spectrum coordination the difference from an ellipsoid is orders
of magnitude below protection-decision granularity. Swapping in an
ellipsoidal engine would only touch this module and `_kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .errors import CoincidentPoints

EARTH_RADIUS_M = _kernels.EARTH_RADIUS_M


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude position with height above ground level."""

    lat_deg: float
    lon_deg: float
    height_m: float = 0.0

    def __post_init__(self):
        if not (-90.0 <= self.lat_deg <= 90.0):
            raise ValueError(f"latitude {self.lat_deg} outside [-90, 90]")
        if not (-180.0 <= self.lon_deg <= 180.0):
            raise ValueError(f"longitude {self.lon_deg} outside [-180, 180]")
        if not (math.isfinite(self.height_m) and self.height_m >= 0.0):
            raise ValueError(f"height {self.height_m} must be finite and >= 0")


@dataclass(frozen=True)
class LocationEllipse:
    """A position estimate with its uncertainty ellipse and GPS time.

    orientation_deg is the major-axis bearing, clockwise from true north,
    in [0, 180). gps_time is UTC seconds since the epoch as reported by
    the receiver (not necessarily the true time).
    """

    center: GeoPoint
    major_axis_m: float
    minor_axis_m: float
    orientation_deg: float
    gps_time: float

    def __post_init__(self):
        if self.major_axis_m < 0.0 or self.minor_axis_m < 0.0:
            raise ValueError("ellipse axes must be >= 0")
        if self.minor_axis_m > self.major_axis_m:
            raise ValueError("minor axis exceeds major axis")
        if not (0.0 <= self.orientation_deg < 180.0):
            raise ValueError(f"orientation {self.orientation_deg} outside [0, 180)")
        if not math.isfinite(self.gps_time):
            raise ValueError("gps_time must be finite")


@dataclass(frozen=True)
class Geofence:
    """A circular region; membership is boundary-inclusive."""

    center: GeoPoint
    radius_m: float

    def __post_init__(self):
        if not (math.isfinite(self.radius_m) and self.radius_m > 0.0):
            raise ValueError("geofence radius must be > 0")


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points, in meters."""
    return float(_kernels.haversine_m(a.lat_deg, a.lon_deg, b.lat_deg, b.lon_deg))


def initial_bearing_deg(a: GeoPoint, b: GeoPoint) -> float:
    """Initial great-circle bearing from a to b, clockwise from north, [0, 360)."""
    if a.lat_deg == b.lat_deg and a.lon_deg == b.lon_deg:
        raise CoincidentPoints("bearing undefined for coincident points")
    return float(
        _kernels.initial_bearing_raw_deg(a.lat_deg, a.lon_deg, b.lat_deg, b.lon_deg)
    )


def destination_point(origin: GeoPoint, bearing_deg: float, distance_m: float) -> GeoPoint:
    """Point reached by travelling distance_m from origin along bearing_deg.

    Height is carried over from the origin unchanged.
    """
    if distance_m < 0.0:
        raise ValueError("distance must be >= 0")
    lat, lon = _kernels.destination_latlon(
        origin.lat_deg, origin.lon_deg, bearing_deg, distance_m
    )
    return GeoPoint(float(lat), float(lon), origin.height_m)


def within_geofence(p: GeoPoint, fence: Geofence) -> bool:
    """True iff p lies within the fence (boundary inclusive)."""
    return haversine_distance(p, fence.center) <= fence.radius_m
