"""Spherical geometry on WGS84 lon/lat coordinates.

All distances use a great-circle model with a fixed mean earth radius;
the error stays far below data noise at the scale of a single mountain
region.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence

EARTH_RADIUS_M = 6_371_000.0

#: The 8 compass bins in clockwise order starting at north.
COMPASS_BINS = ("N", "NE", "E", "SE", "S", "SW", "W", "NW")


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84 coordinate, optionally carrying an elevation in meters."""

    lon: float
    lat: float
    ele: float | None = None

    def __post_init__(self) -> None:
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")


def distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters (haversine)."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def bearing(a: GeoPoint, b: GeoPoint) -> float:
    """Initial bearing from a to b, degrees clockwise from north in [0, 360)."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dlam = math.radians(b.lon - a.lon)
    y = math.sin(dlam) * math.cos(phi2)
    x = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(dlam)
    return math.degrees(math.atan2(y, x)) % 360.0


def compass_bin(bearing_deg: float) -> str:
    """Bin a bearing into one of 8 directions.

    Bins are 45 degrees wide and centered on the headings, so N covers
    [-22.5, 22.5).
    """
    return COMPASS_BINS[int(((bearing_deg + 22.5) % 360.0) // 45.0)]


def opposite_compass(name: str) -> str:
    return COMPASS_BINS[(COMPASS_BINS.index(name) + 4) % 8]


def interpolate(a: GeoPoint, b: GeoPoint, f: float) -> GeoPoint:
    """Point at fraction f of the way from a to b.

    Linear in lon/lat, which is accurate to millimeters at sub-kilometer
    spans.
    """
    return GeoPoint(a.lon + (b.lon - a.lon) * f, a.lat + (b.lat - a.lat) * f)


def cumulative_lengths(points: Sequence[GeoPoint]) -> list[float]:
    """Arc position of every vertex along a polyline, starting at 0."""
    out = [0.0]
    for prev, cur in zip(points, points[1:]):
        out.append(out[-1] + distance(prev, cur))
    return out


def polyline_length(points: Sequence[GeoPoint]) -> float:
    return cumulative_lengths(points)[-1]


def point_at(points: Sequence[GeoPoint], cum: Sequence[float], s: float) -> GeoPoint:
    """Point at arc position s along a polyline with precomputed vertex positions."""
    if s <= 0.0:
        return points[0]
    if s >= cum[-1]:
        return points[-1]
    i = bisect.bisect_right(cum, s) - 1
    i = min(i, len(points) - 2)
    span = cum[i + 1] - cum[i]
    f = 0.0 if span <= 0.0 else (s - cum[i]) / span
    return interpolate(points[i], points[i + 1], f)


class LocalFrame:
    """Equirectangular meter frame around an origin for local planar math."""

    def __init__(self, origin: GeoPoint):
        self.origin = origin
        self._coslat = math.cos(math.radians(origin.lat))

    def to_xy(self, p: GeoPoint) -> tuple[float, float]:
        x = math.radians(p.lon - self.origin.lon) * EARTH_RADIUS_M * self._coslat
        y = math.radians(p.lat - self.origin.lat) * EARTH_RADIUS_M
        return x, y

    def from_xy(self, x: float, y: float) -> GeoPoint:
        lon = self.origin.lon + math.degrees(x / (EARTH_RADIUS_M * self._coslat))
        lat = self.origin.lat + math.degrees(y / EARTH_RADIUS_M)
        return GeoPoint(lon, lat)


def point_segment_distance_xy(
    p: tuple[float, float], a: tuple[float, float], b: tuple[float, float]
) -> tuple[float, float]:
    """Distance from p to segment ab in a planar frame.

    Returns (distance, t) where t is the clamped projection parameter.
    """
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    t = 0.0 if den == 0.0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / den))
    cx, cy = ax + t * dx, ay + t * dy
    return math.hypot(px - cx, py - cy), t
