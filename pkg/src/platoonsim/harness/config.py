"""INI experiment configuration.

One section per module; every key is optional and falls back to the
library default. Unknown sections and keys are rejected so that typos do
not silently run the default experiment.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, replace
from pathlib import Path

from ..errors import ConfigError
from ..geoframe import FrameConfig, GeoCoordinate
from ..simcore import DEFAULT_REF, LeaderSchedule, OvalTrack, SimConfig


def _bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _optional(conv):
    def parse(raw: str):
        return None if raw.strip().lower() in ("", "none") else conv(raw)

    return parse


SCHEMA: dict[str, dict[str, object]] = {
    "geoframe": {
        "ref_lat_deg": float,
        "ref_lon_deg": float,
        "rotation_deg": float,
        "earth_radius": float,
    },
    "messaging": {
        "bcast_interval": float,
        "drop_rate": float,
        "seed": int,
        "window": int,
        "staleness": float,
        "reception_policy": str,
    },
    "planner": {
        "follow_distance": float,
        "v_min": float,
        "v_max": float,
        "theta_max": float,
        "horizon": float,
        "plan_every": _optional(int),
        "grid_size": int,
        "refine_iters": int,
        "extrapolate": _bool,
    },
    "control": {
        "kp": float,
        "ki": float,
        "kd": float,
        "integral_clamp": float,
        "accel_min": float,
        "accel_max": float,
        "k_e": float,
        "v_epsilon": float,
        "max_steer": float,
    },
    "simcore": {
        "n_vehicles": int,
        "dt_control": float,
        "laps": int,
        "max_time": _optional(float),
        "wheelbase": float,
        "max_speed": float,
        "straight": float,
        "radius": float,
        "v_first_half": float,
        "v_second_half": float,
        "leader_lookahead": float,
    },
    "harness": {
        "warmup_laps": float,
        "out_dir": str,
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    sim: SimConfig
    warmup_laps: float = 1.0
    out_dir: str = "out"


def _typed(parser: configparser.ConfigParser) -> dict[str, dict[str, object]]:
    values: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]; expected one of {sorted(SCHEMA)}")
        keys = SCHEMA[section]
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in keys:
                raise ConfigError(f"[{section}] {key}: unknown key")
            conv = keys[key]
            try:
                val = conv(raw)
            except ValueError:
                name = getattr(conv, "__name__", "value")
                raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as {name}") from None
            if isinstance(val, float) and not math.isfinite(val):
                raise ConfigError(f"[{section}] {key}: must be finite, got {raw!r}")
            values[section][key] = val
    return values


def build_config(values: dict[str, dict[str, object]]) -> ExperimentConfig:
    """Assemble validated configs from typed section values; unset keys keep defaults."""
    g = values.get("geoframe", {})
    m = values.get("messaging", {})
    p = values.get("planner", {})
    c = values.get("control", {})
    s = values.get("simcore", {})
    h = values.get("harness", {})

    base = SimConfig()
    try:
        ref_lat, ref_lon = DEFAULT_REF.degrees()
        frame = FrameConfig(
            GeoCoordinate.from_degrees(g.get("ref_lat_deg", ref_lat), g.get("ref_lon_deg", ref_lon)),
            rotation=math.radians(g.get("rotation_deg", 0.0)),
            earth_radius=g.get("earth_radius", base.frame.earth_radius),
        )
        planner = replace(
            base.planner,
            **{k: p[k] for k in ("follow_distance", "v_min", "v_max", "theta_max", "grid_size", "refine_iters", "extrapolate") if k in p},
        )
        pid = replace(
            base.pid,
            **{k: c[k] for k in ("kp", "ki", "kd", "integral_clamp") if k in c},
            output_min=c.get("accel_min", base.pid.output_min),
            output_max=c.get("accel_max", base.pid.output_max),
        )
        stanley = replace(base.stanley, **{k: c[k] for k in ("k_e", "v_epsilon", "max_steer") if k in c})
        bicycle = replace(
            base.bicycle,
            wheelbase=s.get("wheelbase", base.bicycle.wheelbase),
            max_steer=c.get("max_steer", base.bicycle.max_steer),
            accel_min=c.get("accel_min", base.bicycle.accel_min),
            accel_max=c.get("accel_max", base.bicycle.accel_max),
            max_speed=s.get("max_speed", base.bicycle.max_speed),
        )
        track = OvalTrack(s.get("straight", base.track.straight), s.get("radius", base.track.radius))
        schedule = LeaderSchedule(
            s.get("v_first_half", base.schedule.v_first_half), s.get("v_second_half", base.schedule.v_second_half)
        )
        sim = SimConfig(
            n_vehicles=s.get("n_vehicles", base.n_vehicles),
            dt_control=s.get("dt_control", base.dt_control),
            bcast_interval=m.get("bcast_interval", base.bcast_interval),
            drop_rate=m.get("drop_rate", base.drop_rate),
            laps=s.get("laps", base.laps),
            seed=m.get("seed", base.seed),
            max_time=s.get("max_time", base.max_time),
            reception_policy=m.get("reception_policy", base.reception_policy),
            window=m.get("window", base.window),
            staleness=m.get("staleness", base.staleness),
            leader_lookahead=s.get("leader_lookahead", base.leader_lookahead),
            plan_every=p.get("plan_every", base.plan_every),
            plan_horizon=p.get("horizon", base.plan_horizon),
            frame=frame,
            planner=planner,
            pid=pid,
            stanley=stanley,
            bicycle=bicycle,
            track=track,
            schedule=schedule,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None
    warmup = h.get("warmup_laps", 1.0)
    if warmup < 0:
        raise ConfigError(f"[harness] warmup_laps: must be >= 0, got {warmup}")
    return ExperimentConfig(sim=sim, warmup_laps=warmup, out_dir=h.get("out_dir", "out"))


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return build_config(_typed(parser))


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def default_config_text() -> str:
    """A fully populated config document with the library defaults."""
    sim = SimConfig()
    lat, lon = sim.frame.ref.degrees()
    return f"""[geoframe]
ref_lat_deg = {lat}
ref_lon_deg = {lon}
rotation_deg = 0.0
earth_radius = {sim.frame.earth_radius}

[messaging]
bcast_interval = {sim.bcast_interval}
drop_rate = {sim.drop_rate}
seed = {sim.seed}
window = {sim.window}
staleness = {sim.staleness}
reception_policy = {sim.reception_policy}

[planner]
follow_distance = {sim.planner.follow_distance}
v_min = {sim.planner.v_min}
v_max = {sim.planner.v_max}
theta_max = {sim.planner.theta_max}
horizon = {sim.plan_horizon}
plan_every = none
grid_size = {sim.planner.grid_size}
refine_iters = {sim.planner.refine_iters}
extrapolate = {str(sim.planner.extrapolate).lower()}

[control]
kp = {sim.pid.kp}
ki = {sim.pid.ki}
kd = {sim.pid.kd}
integral_clamp = {sim.pid.integral_clamp}
accel_min = {sim.pid.output_min}
accel_max = {sim.pid.output_max}
k_e = {sim.stanley.k_e}
v_epsilon = {sim.stanley.v_epsilon}
max_steer = {sim.stanley.max_steer}

[simcore]
n_vehicles = {sim.n_vehicles}
dt_control = {sim.dt_control}
laps = {sim.laps}
max_time = none
wheelbase = {sim.bicycle.wheelbase}
max_speed = {sim.bicycle.max_speed}
straight = {sim.track.straight}
radius = {sim.track.radius}
v_first_half = {sim.schedule.v_first_half}
v_second_half = {sim.schedule.v_second_half}
leader_lookahead = {sim.leader_lookahead}

[harness]
warmup_laps = 1.0
out_dir = out
"""
