"""Low-level control: PID speed holding and Stanley steering.

Anything callable as ``controller(setpoint, state) -> ControlCommand`` can
stand in for :class:`PidStanleyController`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

from .geoframe import wrap_angle


@dataclass(frozen=True)
class ControlCommand:
    accel: float
    steer: float  # front-wheel angle; positive turns clockwise (heading increases)


@dataclass
class PidState:
    kp: float = 1.0
    ki: float = 0.2
    kd: float = 0.0
    integral_clamp: float = 1.0
    output_min: float = -2.0
    output_max: float = 2.0
    integral: float = 0.0
    prev_error: float | None = None

    def __post_init__(self) -> None:
        if self.integral_clamp < 0:
            raise ValueError("integral_clamp must be >= 0")
        if self.output_min > self.output_max:
            raise ValueError("output_min exceeds output_max")

    def reset(self) -> None:
        self.integral = 0.0
        self.prev_error = None


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def pid_step(pid: PidState, v_target: float, v_actual: float, dt: float) -> float:
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    error = v_target - v_actual
    pid.integral = _clamp(pid.integral + error * dt, -pid.integral_clamp, pid.integral_clamp)
    derivative = 0.0 if pid.prev_error is None else (error - pid.prev_error) / dt
    pid.prev_error = error
    out = pid.kp * error + pid.ki * pid.integral + pid.kd * derivative
    return _clamp(out, pid.output_min, pid.output_max)


@dataclass(frozen=True)
class StanleyConfig:
    k_e: float = 1.5
    v_epsilon: float = 0.1
    max_steer: float = 0.5

    def __post_init__(self) -> None:
        if not self.k_e > 0:
            raise ValueError("k_e must be > 0")
        if not self.v_epsilon > 0:
            raise ValueError("v_epsilon must be > 0")
        if not self.max_steer > 0:
            raise ValueError("max_steer must be > 0")


def stanley_step(cfg: StanleyConfig, heading_error: float, cross_track: float, v: float) -> float:
    """Steer angle from heading error and signed cross-track error (left positive)."""
    steer = wrap_angle(heading_error) + math.atan(cfg.k_e * cross_track / (max(v, 0.0) + cfg.v_epsilon))
    return _clamp(steer, -cfg.max_steer, cfg.max_steer)


class Controller(Protocol):
    def __call__(self, setpoint, state) -> ControlCommand: ...


def actuate(setpoint, state, pid: PidState, stanley: StanleyConfig, dt: float, cross_track: float = 0.0) -> ControlCommand:
    accel = pid_step(pid, setpoint.v_star, state.speed, dt)
    steer = stanley_step(stanley, setpoint.theta_star - state.heading, cross_track, state.speed)
    return ControlCommand(accel, steer)


class PidStanleyController:
    """Default controller pair used by the followers."""

    def __init__(self, pid: PidState, stanley: StanleyConfig, dt: float):
        self.pid = pid
        self.stanley = stanley
        self.dt = dt
        self.cross_track = 0.0  # set by a model-based planner; zero otherwise

    def __call__(self, setpoint, state) -> ControlCommand:
        return actuate(setpoint, state, self.pid, self.stanley, self.dt, self.cross_track)
