import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from platoonsim.control import (
    ControlCommand,
    PidStanleyController,
    PidState,
    StanleyConfig,
    actuate,
    pid_step,
    stanley_step,
)
from platoonsim.geoframe import LocalPoint
from platoonsim.planner import GapPolicy, TargetSetpoint, fit_trajectory, path_error
from platoonsim.simcore import BicycleParams, VehicleState, bicycle_step

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_pid_zero_error():
    assert pid_step(PidState(), 1.0, 1.0, 0.02) == 0.0


def test_pid_proportional_only():
    assert pid_step(PidState(kp=1.0, ki=0.0, kd=0.0), 1.5, 1.0, 0.02) == 0.5


def test_pid_rejects_bad_dt():
    with pytest.raises(ValueError):
        pid_step(PidState(), 1.0, 0.0, 0.0)


def pid_plant_oracle(kp, ki, kd, clamp, umin, umax, tau, dt, n, r):
    """Difference equations for PID + first-order lag plant v' = (u - v)/tau."""
    v, i_acc, e_prev, out = 0.0, 0.0, None, []
    for _ in range(n):
        e = r - v
        i_acc = max(-clamp, min(clamp, i_acc + e * dt))
        d = 0.0 if e_prev is None else (e - e_prev) / dt
        e_prev = e
        u = max(umin, min(umax, kp * e + ki * i_acc + kd * d))
        v = v + dt * (u - v) / tau
        out.append((u, v))
    return out


@pytest.mark.parametrize("kp, ki, kd", [(1.0, 0.2, 0.0), (2.0, 1.0, 0.05), (0.5, 3.0, 0.0)])
def test_pid_step_response_matches_difference_equations(kp, ki, kd):
    dt, tau = 0.02, 0.4
    pid = PidState(kp=kp, ki=ki, kd=kd)
    v, got = 0.0, []
    for _ in range(500):
        u = pid_step(pid, 1.0, v, dt)
        v = v + dt * (u - v) / tau
        got.append((u, v))
    assert got == pid_plant_oracle(kp, ki, kd, 1.0, -2.0, 2.0, tau, dt, 500, 1.0)


def test_integral_clamp_under_long_saturation():
    pid = PidState(kp=1.0, ki=0.2, integral_clamp=1.0)
    for _ in range(500):  # 10 s with the plant stuck
        pid_step(pid, 3.0, 0.0, 0.02)
        assert abs(pid.integral) <= 1.0
    # after the error flips sign the output leaves saturation promptly
    t, out = 0.0, 2.0
    while out > 0 and t < 5.0:
        out = pid_step(pid, 0.0, 0.5, 0.02)
        t += 0.02
    assert t <= 5 * (1.0 / (0.2 * 0.5))


@given(finite, finite, st.floats(1e-4, 1.0))
def test_pid_output_and_integral_clamped(r, v, dt):
    pid = PidState()
    for _ in range(3):
        u = pid_step(pid, r, v, dt)
        assert -2.0 <= u <= 2.0
        assert abs(pid.integral) <= pid.integral_clamp


def test_stanley_zero():
    assert stanley_step(StanleyConfig(), 0.0, 0.0, 1.0) == 0.0


def test_stanley_saturates():
    cfg = StanleyConfig()
    assert stanley_step(cfg, 0.0, 1e12, 1.0) == cfg.max_steer
    assert stanley_step(cfg, 0.0, -1e12, 1.0) == -cfg.max_steer


def test_stanley_hand_value():
    cfg = StanleyConfig(k_e=1.0, v_epsilon=0.1, max_steer=math.pi)
    assert stanley_step(cfg, 0.0, 0.1, 0.0) == pytest.approx(math.pi / 4, abs=1e-15)


def test_stanley_wraps_heading_error():
    cfg = StanleyConfig(max_steer=math.pi)
    assert stanley_step(cfg, 2 * math.pi + 0.1, 0.0, 1.0) == pytest.approx(0.1, abs=1e-12)


@given(finite, finite, finite)
def test_stanley_output_clamped(he, e, v):
    assert abs(stanley_step(StanleyConfig(), he, e, v)) <= 0.5


def test_actuate_setpoint_equals_motion():
    s = VehicleState(1, LocalPoint(0, 0), 0.3, 1.2)
    cmd = actuate(TargetSetpoint(1.2, 0.3), s, PidState(), StanleyConfig(), 0.02)
    assert cmd == ControlCommand(0.0, 0.0)


def test_actuate_heading_offset_gives_positive_steer():
    s = VehicleState(1, LocalPoint(0, 0), 0.0, 1.0)
    cmd = actuate(TargetSetpoint(1.0, 0.1), s, PidState(), StanleyConfig(), 0.02)
    assert cmd.steer == pytest.approx(0.1, abs=1e-15)
    # positive steer turns toward larger heading
    nxt = bicycle_step(s, cmd, BicycleParams(), 0.02)
    assert nxt.heading > s.heading


def test_controller_is_pluggable():
    def bang(setpoint, state):
        return ControlCommand(1.0, 0.0)

    s = VehicleState(1, LocalPoint(0, 0), 0.0, 0.0)
    for ctrl in (bang, PidStanleyController(PidState(), StanleyConfig(), 0.02)):
        s = bicycle_step(s, ctrl(TargetSetpoint(1.0, 0.0), s), BicycleParams(), 0.02)
    assert s.speed > 0


def straight_line_run(offset, seconds, dt=0.02):
    line = fit_trajectory([(0.0, 0.0), (0.0, 100.0)], "straight")
    state = VehicleState(1, LocalPoint(offset, 0.0), 0.0, 1.0)
    ctrl = PidStanleyController(PidState(), StanleyConfig(), dt)
    params = BicycleParams()
    errs = []
    for _ in range(int(round(seconds / dt))):
        ctrl.cross_track = path_error(line, state.position, GapPolicy()).cross_track
        cmd = ctrl(TargetSetpoint(1.0, 0.0), state)
        state = bicycle_step(state, cmd, params, dt)
        errs.append(abs(state.position.qx))
    return errs


def test_stanley_straight_line_convergence():
    errs = straight_line_run(-0.5, 30.0)
    assert min(i for i, e in enumerate(errs) if all(x < 0.05 for x in errs[i:])) * 0.02 < 15.0
    assert max(errs[len(errs) // 2:]) < 0.05
