"""Constrained search for the speed/heading set-point minimising the platooning cost."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import NoTargetError
from ..geoframe import FrameConfig, from_local, wrap_angle
from ..messaging import HistoryBuffer
from .cost import PlannerConfig, cost_surface

INV_PHI = (math.sqrt(5) - 1) / 2
HOLD_DECAY = 0.9
_MAX_SWEEPS = 3


@dataclass(frozen=True)
class TargetSetpoint:
    v_star: float
    theta_star: float  # local-frame heading, clockwise from north


def golden_section(f: Callable[[float], float], a: float, b: float, iters: int) -> tuple[float, float]:
    """Approximate minimiser of a unimodal ``f`` on [a, b] and its value."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def minimize_box(
    cost: Callable[[np.ndarray, np.ndarray], np.ndarray],
    v_bounds: tuple[float, float],
    dtheta_max: float,
    v_current: float,
    grid_size: int = 21,
    refine_iters: int = 20,
    tie_tol: float = 1e-4,
) -> tuple[float, float, float]:
    """Minimise ``cost(v, dtheta)`` over [v_lo, v_hi] x [-dtheta_max, dtheta_max].

    Uniform grid first. Cells within ``tie_tol`` of the grid minimum count as
    ties, broken toward the smallest speed change and then the smallest
    heading change; sums of distances to several goals have flat valleys, and
    without this the chosen set-point wanders along them from one cycle to the
    next. Then alternating golden-section line searches within one grid cell
    of the incumbent. Returns (v, dtheta, cost).
    """
    v_lo, v_hi = v_bounds
    vs = np.linspace(v_lo, v_hi, grid_size)
    ths = np.linspace(-dtheta_max, dtheta_max, grid_size)
    V, TH = np.meshgrid(vs, ths, indexing="ij")
    J = cost(V, TH)
    near = (J <= J.min() + tie_tol).ravel()
    order = np.lexsort((np.abs(TH).ravel(), np.abs(V - v_current).ravel(), ~near))
    best = int(order[0])
    v, th, j = float(V.flat[best]), float(TH.flat[best]), float(J.flat[best])

    hv = (v_hi - v_lo) / (grid_size - 1)
    hth = 2 * dtheta_max / (grid_size - 1)
    for _ in range(_MAX_SWEEPS):
        j_start = j
        if hv > 0:
            lo, hi = max(v_lo, v - hv), min(v_hi, v + hv)
            cand, jc = golden_section(lambda x: float(cost(x, th)), lo, hi, refine_iters)
            if jc < j - tie_tol:
                v, j = cand, jc
        if hth > 0:
            lo, hi = max(-dtheta_max, th - hth), min(dtheta_max, th + hth)
            cand, jc = golden_section(lambda x: float(cost(v, x)), lo, hi, refine_iters)
            if jc < j - tie_tol:
                th, j = cand, jc
        if j_start - j <= tie_tol:
            break
    return v, th, j


def generate_target(state, buffer: HistoryBuffer, cfg: PlannerConfig, frame: FrameConfig, now: float) -> TargetSetpoint:
    """Best admissible (v*, theta*) for a vehicle given what it has heard.

    ``state`` needs ``position`` (local point), ``heading`` and ``speed``.
    Raises NoTargetError when no predecessor record is current.
    """
    surface = cost_surface(from_local(state.position, frame), buffer, cfg, frame, now)
    yaw = state.heading
    v, dth, _ = minimize_box(
        lambda v, th: surface(v, yaw + th),
        (cfg.v_min, cfg.v_max),
        cfg.theta_max,
        min(max(state.speed, cfg.v_min), cfg.v_max),
        cfg.grid_size,
        cfg.refine_iters,
    )
    return TargetSetpoint(v_star=v, theta_star=yaw + dth)


class PlatoonPlanner:
    """Per-vehicle planner that holds and decays its set-point when contact is lost."""

    def __init__(self, cfg: PlannerConfig, frame: FrameConfig, initial: TargetSetpoint | None = None):
        self.cfg = cfg
        self.frame = frame
        self.setpoint = initial
        self.holding = False

    def plan(self, state, buffer: HistoryBuffer, now: float) -> TargetSetpoint:
        try:
            self.setpoint = generate_target(state, buffer, self.cfg, self.frame, now)
            self.holding = False
        except NoTargetError:
            prev = self.setpoint or TargetSetpoint(state.speed, state.heading)
            self.setpoint = TargetSetpoint(prev.v_star * HOLD_DECAY, prev.theta_star)
            self.holding = True
        return self.setpoint


def setpoint_within_box(sp: TargetSetpoint, heading: float, cfg: PlannerConfig) -> bool:
    return (
        cfg.v_min <= sp.v_star <= cfg.v_max
        and abs(wrap_angle(sp.theta_star - heading)) <= cfg.theta_max + 1e-12
    )
