"""Platooning cost: distance between where the ego will be and where it should be."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NoTargetError
from ..geoframe import FrameConfig, GeoCoordinate, heading_to_local, to_local
from ..messaging import BasicSafetyMessage, HistoryBuffer


@dataclass(frozen=True)
class PlannerConfig:
    follow_distance: float = 0.2
    bcast_interval: float = 0.1
    v_min: float = 0.0
    v_max: float = 3.0
    theta_max: float = 0.5
    car_number: int = 1
    grid_size: int = 21
    refine_iters: int = 20
    # prediction horizon for both vehicles; None means one broadcast interval
    horizon: float | None = None
    # dead-reckon each record from its timestamp to the planning instant
    extrapolate: bool = False

    def __post_init__(self) -> None:
        if not self.follow_distance > 0:
            raise ValueError(f"follow_distance must be > 0, got {self.follow_distance}")
        if self.bcast_interval < 0:
            raise ValueError(f"bcast_interval must be >= 0, got {self.bcast_interval}")
        if self.horizon is not None and not self.horizon > 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        if self.v_min > self.v_max:
            raise ValueError(f"v_min ({self.v_min}) exceeds v_max ({self.v_max})")
        if self.theta_max < 0:
            raise ValueError(f"theta_max must be >= 0, got {self.theta_max}")
        if self.grid_size < 2:
            raise ValueError("grid_size must be >= 2")

    @property
    def prediction_horizon(self) -> float:
        return self.bcast_interval if self.horizon is None else self.horizon


def tracked_records(buffer: HistoryBuffer, car_number: int, now: float) -> list[BasicSafetyMessage]:
    """Newest non-stale record of every vehicle ahead of ``car_number``."""
    out = []
    for sender in buffer.senders():
        if sender >= car_number:
            continue
        rec = buffer.latest_record(sender, now)
        if rec is not None:
            out.append(rec)
    return out


def platooning_cost(
    ego_v: float,
    ego_yaw: float,
    ego_geo: GeoCoordinate,
    buffer: HistoryBuffer,
    cfg: PlannerConfig,
    frame: FrameConfig,
    now: float,
) -> float:
    """Sum over tracked predecessors of the ego's predicted miss distance.

    ``ego_v``/``ego_yaw`` are the candidate speed and heading (local frame).
    Each predecessor is propagated one prediction horizon along its reported
    heading; the ego's goal is ``follow_distance * position`` behind that.
    """
    records = tracked_records(buffer, cfg.car_number, now)
    if not records:
        raise NoTargetError(f"vehicle {cfg.car_number}: no current predecessor record")
    dt = cfg.prediction_horizon
    x_ego, y_ego = to_local(ego_geo, frame)
    total = 0.0
    for rec in records:
        x_t, y_t = to_local(GeoCoordinate.from_degrees(rec.lat, rec.lon), frame)
        yaw_t = heading_to_local(math.radians(rec.heading), frame)
        v_t = rec.speed
        position = cfg.car_number - rec.event_flags["car"]
        gfd = cfg.follow_distance * position
        x_tf = x_t + v_t * math.sin(yaw_t) * dt
        y_tf = y_t + v_t * math.cos(yaw_t) * dt
        x_ef = x_ego + ego_v * math.sin(ego_yaw) * dt
        y_ef = y_ego + ego_v * math.cos(ego_yaw) * dt
        x_goal = x_tf - gfd * math.sin(yaw_t)
        y_goal = y_tf - gfd * math.cos(yaw_t)
        total += math.sqrt((x_goal - x_ef) ** 2 + (y_goal - y_ef) ** 2)
    return total


@dataclass(frozen=True)
class CostSurface:
    """The platooning cost with everything independent of (v, yaw) precomputed.

    ``goals`` are the per-predecessor goal points; evaluation is vectorised
    over candidate speed/heading arrays.
    """

    ego: tuple[float, float]
    goals: np.ndarray  # shape (n, 2)
    horizon: float

    def __call__(self, v, yaw):
        v = np.asarray(v, dtype=float)
        yaw = np.asarray(yaw, dtype=float)
        xf = self.ego[0] + v * np.sin(yaw) * self.horizon
        yf = self.ego[1] + v * np.cos(yaw) * self.horizon
        total = np.zeros(np.broadcast(xf, yf).shape)
        for gx, gy in self.goals:
            total = total + np.hypot(gx - xf, gy - yf)
        return total


def cost_surface(
    ego_geo: GeoCoordinate,
    buffer: HistoryBuffer,
    cfg: PlannerConfig,
    frame: FrameConfig,
    now: float,
) -> CostSurface:
    records = tracked_records(buffer, cfg.car_number, now)
    if not records:
        raise NoTargetError(f"vehicle {cfg.car_number}: no current predecessor record")
    dt = cfg.prediction_horizon
    goals = []
    for rec in records:
        x_t, y_t = to_local(GeoCoordinate.from_degrees(rec.lat, rec.lon), frame)
        yaw_t = heading_to_local(math.radians(rec.heading), frame)
        gfd = cfg.follow_distance * (cfg.car_number - rec.event_flags["car"])
        age = max(now - rec.t, 0.0) if cfg.extrapolate else 0.0
        reach = rec.speed * (dt + age) - gfd
        goals.append((x_t + reach * math.sin(yaw_t), y_t + reach * math.cos(yaw_t)))
    return CostSurface(tuple(to_local(ego_geo, frame)), np.array(goals, dtype=float), dt)

