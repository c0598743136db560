"""Stadium-shaped test track, the leader's speed schedule, and pure pursuit."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..geoframe import LocalPoint, wrap_angle

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class OvalTrack:
    """Two straights joined by semicircles, centred on the origin.

    Travel is counter-clockwise seen from above: the lap starts at the west
    end of the southern straight heading east.
    """

    straight: float = 4.0
    radius: float = 2.0

    def __post_init__(self) -> None:
        if self.straight < 0 or not self.radius > 0:
            raise ValueError("track needs straight >= 0 and radius > 0")

    @property
    def lap_length(self) -> float:
        return 2 * self.straight + TWO_PI * self.radius

    @property
    def _breaks(self) -> tuple[float, float, float]:
        arc = math.pi * self.radius
        return self.straight, self.straight + arc, 2 * self.straight + arc

    def pose(self, s: float) -> tuple[LocalPoint, float]:
        """Point and heading (clockwise from north, in [0, 2pi)) at arc length ``s``."""
        s = s % self.lap_length
        half, r = self.straight / 2, self.radius
        b1, b2, b3 = self._breaks
        if s < b1:
            return LocalPoint(-half + s, -r), math.pi / 2
        if s < b2:
            phi = -math.pi / 2 + (s - b1) / r
            return LocalPoint(half + r * math.cos(phi), r * math.sin(phi)), (-phi) % TWO_PI
        if s < b3:
            return LocalPoint(half - (s - b2), r), 3 * math.pi / 2
        phi = math.pi / 2 + (s - b3) / r
        return LocalPoint(-half + r * math.cos(phi), r * math.sin(phi)), (-phi) % TWO_PI

    def project(self, p: tuple[float, float]) -> float:
        """Arc length in [0, lap) of the closest track point to ``p``."""
        x, y = p
        half, r = self.straight / 2, self.radius
        b1, b2, b3 = self._breaks
        cands = []
        u = min(max(x + half, 0.0), self.straight)
        cands.append((math.hypot(x - (-half + u), y + r), u))
        u = min(max(half - x, 0.0), self.straight)
        cands.append((math.hypot(x - (half - u), y - r), b2 + u))
        phi = math.atan2(y, x - half)  # right arc spans [-pi/2, pi/2]
        phi = min(max(phi, -math.pi / 2), math.pi / 2)
        cands.append((math.hypot(x - half - r * math.cos(phi), y - r * math.sin(phi)), b1 + (phi + math.pi / 2) * r))
        phi = math.atan2(y, x + half) % TWO_PI  # left arc spans [pi/2, 3pi/2]
        phi = min(max(phi, math.pi / 2), 3 * math.pi / 2)
        cands.append((math.hypot(x + half - r * math.cos(phi), y - r * math.sin(phi)), b3 + (phi - math.pi / 2) * r))
        return min(cands)[1] % self.lap_length


class ProgressTracker:
    """Unwrapped arc-length progress of a vehicle around the track."""

    def __init__(self, track: OvalTrack, start: float = 0.0):
        self.track = track
        self.s = start

    def update(self, p: tuple[float, float]) -> float:
        lap = self.track.lap_length
        s_mod = self.track.project(p)
        delta = (s_mod - self.s % lap + lap / 2) % lap - lap / 2
        self.s += delta
        return self.s

    @property
    def laps(self) -> float:
        return self.s / self.track.lap_length


@dataclass(frozen=True)
class LeaderSchedule:
    v_first_half: float = 1.0
    v_second_half: float = 2.0

    def speed(self, track: OvalTrack, s: float) -> float:
        return self.v_first_half if s % track.lap_length < track.lap_length / 2 else self.v_second_half


def leader_reference(track: OvalTrack, schedule: LeaderSchedule, s: float) -> tuple[LocalPoint, float, float]:
    if s < 0:
        raise ValueError(f"arc length must be >= 0, got {s}")
    point, heading = track.pose(s)
    return point, heading, schedule.speed(track, s)


def pure_pursuit_steer(position: tuple[float, float], heading: float, target: tuple[float, float], wheelbase: float) -> float:
    dx, dy = target[0] - position[0], target[1] - position[1]
    ld = math.hypot(dx, dy)
    if ld < 1e-9:
        return 0.0
    alpha = wrap_angle(math.atan2(dx, dy) - heading)
    return math.atan2(2.0 * wheelbase * math.sin(alpha), ld)
