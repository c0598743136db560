from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ..control import ControlCommand
from ..geoframe import LocalPoint


@dataclass(frozen=True)
class VehicleState:
    id: int
    position: LocalPoint
    heading: float  # radians clockwise from +y
    speed: float
    steer: float = 0.0
    t: float = 0.0


@dataclass(frozen=True)
class BicycleParams:
    wheelbase: float = 0.5
    max_steer: float = 0.5
    accel_min: float = -2.0
    accel_max: float = 2.0
    max_speed: float = 3.0

    def __post_init__(self) -> None:
        if not self.wheelbase > 0:
            raise ValueError(f"wheelbase must be > 0, got {self.wheelbase}")
        if not self.max_steer > 0:
            raise ValueError("max_steer must be > 0")
        if self.accel_min > self.accel_max:
            raise ValueError("accel_min exceeds accel_max")
        if self.max_speed < 0:
            raise ValueError("max_speed must be >= 0")


def bicycle_step(state: VehicleState, cmd: ControlCommand, params: BicycleParams, dt: float) -> VehicleState:
    """Advance the kinematic bicycle one explicit step (speed, then heading, then position)."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    accel = min(max(cmd.accel, params.accel_min), params.accel_max)
    steer = min(max(cmd.steer, -params.max_steer), params.max_steer)
    speed = min(max(state.speed + accel * dt, 0.0), params.max_speed)
    heading = state.heading + speed / params.wheelbase * math.tan(steer) * dt
    x = state.position.qx + speed * math.sin(heading) * dt
    y = state.position.qy + speed * math.cos(heading) * dt
    return replace(state, position=LocalPoint(x, y), heading=heading, speed=speed, steer=steer, t=state.t + dt)
