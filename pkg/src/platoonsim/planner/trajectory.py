"""Short-horizon trajectory models of a predecessor and path-error queries.

A model is a low-order polynomial ``w(u)`` in a frame whose ``u`` axis runs
along the predecessor's direction of travel (the chord from its oldest
to its newest sample). The frame is a pure rotation of the local
frame, so data that is exactly polynomial in those axes is recovered
exactly. Arc length is measured from the oldest sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from ..errors import DegenerateFitError
from ..geoframe import FrameConfig, GeoCoordinate, LocalPoint, to_local

Kind = Literal["straight", "quadratic"]
_DEGREE = {"straight": 1, "quadratic": 2}


@dataclass(frozen=True)
class TrajectoryModel:
    kind: str
    coeffs: np.ndarray  # w(u), highest power first
    axis_angle: float  # direction of +u, radians counter-clockwise from +x
    u_start: float
    u_end: float
    residual: float  # sum of squared lateral residuals
    end_speed: float = 0.0

    @property
    def length(self) -> float:
        return self.arc_length(self.u_start, self.u_end)

    def _to_global(self, u: float, w: float) -> LocalPoint:
        c, s = math.cos(self.axis_angle), math.sin(self.axis_angle)
        return LocalPoint(u * c - w * s, u * s + w * c)

    def _to_aligned(self, p: Sequence[float]) -> tuple[float, float]:
        c, s = math.cos(self.axis_angle), math.sin(self.axis_angle)
        return p[0] * c + p[1] * s, -p[0] * s + p[1] * c

    def _slope(self, u: float) -> float:
        return float(np.polyval(np.polyder(self.coeffs), u))

    def arc_length(self, u0: float, u1: float) -> float:
        """Signed curve length between two values of the travel coordinate."""
        if self.kind == "straight" or abs(self.coeffs[0]) < 1e-12:
            # slope is (near) constant; midpoint value avoids dividing by a ~ 0
            return (u1 - u0) * math.hypot(1.0, self._slope(0.5 * (u0 + u1)))
        a, b = float(self.coeffs[0]), float(self.coeffs[1])

        def primitive(u: float) -> float:
            z = 2 * a * u + b
            return (z * math.sqrt(1 + z * z) + math.asinh(z)) / (4 * a)

        return primitive(u1) - primitive(u0)

    def u_at(self, s: float) -> float:
        """Travel coordinate at arc length ``s``; extrapolates outside [0, S]."""
        u = self.u_start + s / math.hypot(1.0, self._slope(self.u_start))
        for _ in range(60):
            f = self.arc_length(self.u_start, u) - s
            step = f / math.hypot(1.0, self._slope(u))
            u -= step
            if abs(step) < 1e-14 * max(1.0, abs(u)):
                break
        return u

    def point(self, s: float) -> LocalPoint:
        u = self.u_at(s)
        return self._to_global(u, float(np.polyval(self.coeffs, u)))

    def heading(self, s: float) -> float:
        """Tangent direction atan2(dy/ds, dx/ds), counter-clockwise from +x."""
        u = self.u_at(s)
        return self.axis_angle + math.atan(self._slope(u))

    def compass_heading(self, s: float) -> float:
        """Tangent direction in the package's clockwise-from-north convention."""
        return math.pi / 2 - self.heading(s)

    def foot_point(self, p: Sequence[float]) -> tuple[float, LocalPoint]:
        """Arc length and location of the closest point on the curve to ``p``."""
        eu, ew = self._to_aligned(p)
        poly = np.poly1d(self.coeffs)
        # stationary points of squared distance: (u - eu) + (w(u) - ew) w'(u) = 0
        stationary = np.poly1d([1.0, -eu]) + (poly - ew) * poly.deriv()
        roots = np.roots(stationary.coeffs)
        candidates = [float(r.real) for r in roots if abs(r.imag) < 1e-9 * max(1.0, abs(r.real))]
        if not candidates:
            candidates = [eu]
        best_u = min(candidates, key=lambda u: (u - eu) ** 2 + (poly(u) - ew) ** 2)
        foot = self._to_global(best_u, float(poly(best_u)))
        return self.arc_length(self.u_start, best_u), foot


@dataclass(frozen=True)
class GapPolicy:
    mode: Literal["distance", "time"] = "distance"
    distance: float = 0.0
    headway: float = 0.0

    def __post_init__(self) -> None:
        if self.mode not in ("distance", "time"):
            raise ValueError(f"unknown gap policy mode {self.mode!r}")
        if self.distance < 0 or self.headway < 0:
            raise ValueError("gap distance and headway must be non-negative")

    def gap(self, predecessor_speed: float) -> float:
        if self.mode == "time":
            return predecessor_speed * self.headway
        return self.distance


@dataclass(frozen=True)
class PathError:
    cross_track: float  # positive when ego is left of the direction of travel
    preview_point: LocalPoint
    preview_speed: float


def fit_trajectory(samples: Sequence[Sequence[float]], kind: Kind = "straight", end_speed: float = 0.0) -> TrajectoryModel:
    if kind not in _DEGREE:
        raise ValueError(f"unknown trajectory kind {kind!r}")
    deg = _DEGREE[kind]
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("samples must be a sequence of (x, y) points")
    if len(pts) < deg + 1:
        raise DegenerateFitError(f"{kind} fit needs at least {deg + 1} samples, got {len(pts)}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("samples must be finite")

    offsets = pts - pts[0]
    dist = np.hypot(offsets[:, 0], offsets[:, 1])
    far = int(np.argmax(dist))
    if dist[far] < 1e-12:
        raise DegenerateFitError("all samples coincide")
    # the oldest->newest chord sets the travel axis unless the path has looped back
    ref = len(pts) - 1 if dist[-1] >= 0.5 * dist[far] else far
    axis = math.atan2(offsets[ref, 1], offsets[ref, 0])
    c, s = math.cos(axis), math.sin(axis)
    u = pts[:, 0] * c + pts[:, 1] * s
    w = -pts[:, 0] * s + pts[:, 1] * c
    if len(np.unique(np.round(u, 12))) < deg + 1:
        raise DegenerateFitError(f"samples do not span enough distinct positions for a {kind} fit")

    vander = np.vander(u, deg + 1)
    coeffs, *_ = np.linalg.lstsq(vander, w, rcond=None)
    resid = float(np.sum((vander @ coeffs - w) ** 2))
    return TrajectoryModel(
        kind=kind,
        coeffs=coeffs,
        axis_angle=axis,
        u_start=float(u[0]),
        u_end=float(u[-1]),
        residual=resid,
        end_speed=float(end_speed),
    )


def fit_history(messages, frame: FrameConfig, kind: Kind = "quadratic") -> TrajectoryModel:
    """Fit a model to a sender's buffered messages (oldest first)."""
    pts = [to_local(GeoCoordinate.from_degrees(m.lat, m.lon), frame) for m in messages]
    speed = messages[-1].speed if messages else 0.0
    return fit_trajectory(pts, kind, end_speed=speed)


def path_error(model: TrajectoryModel | None, ego: Sequence[float], policy: GapPolicy) -> PathError:
    """Cross-track error of ``ego`` and the preview point the gap policy asks it to occupy.

    The preview point sits ``d`` metres of arc length behind the predecessor's
    newest sample, where ``d`` comes from the distance- or time-gap policy.
    """
    if model is None:
        raise ValueError("no trajectory model")
    s_foot, foot = model.foot_point(ego)
    theta = model.heading(s_foot)
    tx, ty = math.cos(theta), math.sin(theta)
    rx, ry = ego[0] - foot.qx, ego[1] - foot.qy
    dist = math.hypot(rx, ry)
    cross = tx * ry - ty * rx
    signed = math.copysign(dist, cross) if dist > 0 else 0.0
    d = policy.gap(model.end_speed)
    preview = model.point(model.length - d)
    return PathError(cross_track=signed, preview_point=preview, preview_speed=model.end_speed)
