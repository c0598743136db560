"""Geodetic <-> local Cartesian conversion.

Positions travel between vehicles as latitude/longitude; planning and
control work in a flat, metre-scaled frame anchored at a reference point
and optionally rotated to the track's principal axis.

Headings everywhere in the package are measured clockwise from north
(the +y axis of the unrotated frame), in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError

EARTH_RADIUS_M = 6_371_000.0


class GeoCoordinate(NamedTuple):
    lat: float  # radians
    lon: float  # radians

    @classmethod
    def from_degrees(cls, lat_deg: float, lon_deg: float) -> "GeoCoordinate":
        return cls(math.radians(lat_deg), math.radians(lon_deg))

    def degrees(self) -> tuple[float, float]:
        return math.degrees(self.lat), math.degrees(self.lon)


class LocalPoint(NamedTuple):
    qx: float
    qy: float


@dataclass(frozen=True)
class FrameConfig:
    ref: GeoCoordinate
    rotation: float = 0.0
    earth_radius: float = EARTH_RADIUS_M

    def __post_init__(self) -> None:
        _check_geo(self.ref)
        if not (math.isfinite(self.earth_radius) and self.earth_radius > 0):
            raise DomainError(f"earth_radius must be positive, got {self.earth_radius}")
        if not (-math.pi < self.rotation <= math.pi):
            raise DomainError(f"rotation must lie in (-pi, pi], got {self.rotation}")


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"non-finite input: {v!r}")


def _check_geo(geo: GeoCoordinate) -> None:
    _check_finite(geo.lat, geo.lon)
    if abs(geo.lat) > math.pi / 2:
        raise DomainError(f"latitude out of range: {geo.lat} rad")
    if abs(geo.lon) > math.pi:
        raise DomainError(f"longitude out of range: {geo.lon} rad")


def project(geo: GeoCoordinate, frame: FrameConfig) -> tuple[float, float]:
    """Equirectangular east/north offsets of ``geo`` from the frame reference."""
    _check_geo(geo)
    lat_c, lon_c = frame.ref
    r = frame.earth_radius
    x = r * math.cos((geo.lat + lat_c) / 2.0) * (geo.lon - lon_c)
    y = r * (geo.lat - lat_c)
    return x, y


def rotate(p: tuple[float, float], theta: float) -> LocalPoint:
    x, y = p
    _check_finite(x, y, theta)
    c, s = math.cos(theta), math.sin(theta)
    return LocalPoint(c * x - s * y, s * x + c * y)


def to_local(geo: GeoCoordinate, frame: FrameConfig) -> LocalPoint:
    return rotate(project(geo, frame), frame.rotation)


def from_local(p: LocalPoint, frame: FrameConfig) -> GeoCoordinate:
    """Inverse of :func:`to_local`.

    Latitude follows directly from the north offset, so the midpoint
    cosine in the east equation is known exactly and no iteration is
    needed beyond a single evaluation.
    """
    qx, qy = p
    _check_finite(qx, qy)
    c, s = math.cos(frame.rotation), math.sin(frame.rotation)
    # transpose of the rotation matrix
    x = c * qx + s * qy
    y = -s * qx + c * qy
    lat_c, lon_c = frame.ref
    r = frame.earth_radius
    lat = lat_c + y / r
    if abs(lat) > math.pi / 2:
        raise DomainError(f"latitude out of range after inverse projection: {lat} rad")
    lon = lon_c + x / (r * math.cos((lat + lat_c) / 2.0))
    # wrap across the antimeridian
    lon = (lon + math.pi) % (2 * math.pi) - math.pi
    return GeoCoordinate(lat, lon)


def heading_to_local(heading: float, frame: FrameConfig) -> float:
    """Convert a compass heading (clockwise from true north) into the rotated frame."""
    return heading - frame.rotation


def heading_from_local(heading: float, frame: FrameConfig) -> float:
    return heading + frame.rotation


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    w = math.fmod(a + math.pi, 2 * math.pi)
    if w <= 0:
        w += 2 * math.pi
    return w - math.pi
