"""Discrete-time convoy simulation.

Every control tick runs the same fixed pipeline, vehicles in ascending id:

1. broadcast: each vehicle whose gate opens encodes its state and sends it
   through the lossy channel (and files it in its own buffer directly);
2. receive: delivered datagrams are decoded, filtered by the reception
   policy and inserted into the receiver's history buffer;
3. decide: the leader pure-pursues the oval at its scheduled speed;
   followers re-plan on broadcast ticks (by default) and run their controller;
4. integrate: every plant advances one kinematic bicycle step;
5. log: one row per vehicle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

from ..control import ControlCommand, PidStanleyController, PidState, StanleyConfig, pid_step
from ..geoframe import FrameConfig, GeoCoordinate, from_local, heading_from_local
from ..messaging import (
    BasicSafetyMessage,
    ChannelModel,
    HistoryBuffer,
    InProcessNetwork,
    MessageStats,
    TimeTriggeredGate,
    reception_policy,
)
from ..planner import PlannerConfig, PlatoonPlanner, TargetSetpoint
from .track import LeaderSchedule, OvalTrack, ProgressTracker, pure_pursuit_steer
from .vehicle import BicycleParams, VehicleState, bicycle_step

DEFAULT_REF = GeoCoordinate.from_degrees(40.0, -83.0)


@dataclass(frozen=True)
class LogRow:
    t: float
    vehicle: int
    qx: float
    qy: float
    heading_deg: float
    speed: float
    v_star: float
    steer: float
    gap_to_predecessor: float | None
    msgs_received: int


@dataclass(frozen=True)
class SimConfig:
    n_vehicles: int = 3
    dt_control: float = 0.02
    bcast_interval: float = 0.1
    drop_rate: float = 0.0
    laps: int = 5
    seed: int = 0
    max_time: float | None = None
    reception_policy: str = "all-predecessor"
    window: int = 20
    staleness: float = 1.0
    leader_lookahead: float = 0.5
    plan_every: int | None = None  # control ticks between re-plans; None = once per broadcast
    plan_horizon: float = 0.4  # planner prediction horizon, seconds
    frame: FrameConfig = field(default_factory=lambda: FrameConfig(DEFAULT_REF))
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    pid: PidState = field(default_factory=lambda: PidState(kp=8.0))
    stanley: StanleyConfig = field(default_factory=StanleyConfig)
    bicycle: BicycleParams = field(default_factory=BicycleParams)
    track: OvalTrack = field(default_factory=OvalTrack)
    schedule: LeaderSchedule = field(default_factory=LeaderSchedule)

    def __post_init__(self) -> None:
        if self.n_vehicles < 1:
            raise ValueError("n_vehicles must be >= 1")
        if not self.dt_control > 0:
            raise ValueError("dt_control must be > 0")
        if self.bcast_interval <= 0:
            raise ValueError("bcast_interval must be > 0")
        ratio = self.bcast_interval / self.dt_control
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(f"dt_control ({self.dt_control}) must divide bcast_interval ({self.bcast_interval})")
        if not 0.0 <= self.drop_rate <= 1.0:
            raise ValueError("drop_rate must lie in [0, 1]")
        if self.laps < 0:
            raise ValueError("laps must be >= 0")
        if self.leader_lookahead <= 0:
            raise ValueError("leader_lookahead must be > 0")
        if self.plan_every is not None and self.plan_every < 1:
            raise ValueError("plan_every must be >= 1")
        if not self.plan_horizon > 0:
            raise ValueError("plan_horizon must be > 0")
        reception_policy(self.reception_policy)

    @property
    def ticks_per_broadcast(self) -> int:
        return round(self.bcast_interval / self.dt_control)

    @property
    def plan_period(self) -> int:
        return self.plan_every or self.ticks_per_broadcast

    @property
    def time_limit(self) -> float:
        if self.max_time is not None:
            return self.max_time
        sched, lap = self.schedule, self.track.lap_length
        lap_time = lap / 2 / sched.v_first_half + lap / 2 / sched.v_second_half
        return 2 * self.laps * lap_time + 10.0


@dataclass
class Agent:
    state: VehicleState
    buffer: HistoryBuffer
    gate: TimeTriggeredGate
    pid: PidState
    planner: PlatoonPlanner | None = None
    controller: Callable[[TargetSetpoint, VehicleState], ControlCommand] | None = None
    setpoint: TargetSetpoint | None = None
    seq: int = 0
    received: int = 0
    command: ControlCommand = ControlCommand(0.0, 0.0)

    @property
    def id(self) -> int:
        return self.state.id


@dataclass
class World:
    config: SimConfig
    agents: list[Agent]
    network: InProcessNetwork
    leader_progress: ProgressTracker
    tick_index: int = 0
    rows: list[LogRow] = field(default_factory=list)

    @property
    def time(self) -> float:
        return self.tick_index * self.config.dt_control

    @property
    def laps_completed(self) -> int:
        return int(math.floor(self.leader_progress.laps + 1e-12))

    def message_stats(self) -> MessageStats:
        stats = MessageStats(
            sent=self.network.channel.stats.sent,
            delivered=self.network.channel.stats.delivered,
            dropped=self.network.channel.stats.dropped,
        )
        for a in self.agents:
            stats = stats.merge(
                MessageStats(
                    discarded_stale=a.buffer.stats.discarded_stale,
                    discarded_out_of_order=a.buffer.stats.discarded_out_of_order,
                )
            )
        return stats


def make_bsm(state: VehicleState, seq: int, frame: FrameConfig) -> BasicSafetyMessage:
    lat, lon = from_local(state.position, frame).degrees()
    heading = math.degrees(heading_from_local(state.heading, frame)) % 360.0
    if heading >= 360.0:  # modulo can round up to exactly 360
        heading = 0.0
    return BasicSafetyMessage(
        car=state.id,
        seq=seq,
        t=state.t,
        lat=lat,
        lon=lon,
        heading=heading,
        speed=state.speed,
        event_flags={"car": state.id},
    )


def init_world(config: SimConfig) -> World:
    """Leader at the start of the lap; followers on the track behind it at their set gaps."""
    track = config.track
    v0 = config.schedule.speed(track, 0.0)
    channel = ChannelModel(config.drop_rate, config.seed)
    network = InProcessNetwork(channel)
    agents = []
    for i in range(config.n_vehicles):
        s = (-i * config.planner.follow_distance) % track.lap_length
        point, heading = track.pose(s)
        if heading > math.pi:
            heading -= 2 * math.pi
        state = VehicleState(id=i, position=point, heading=heading, speed=v0, steer=0.0, t=0.0)
        pid = replace(config.pid, integral=0.0, prev_error=None)
        agent = Agent(
            state=state,
            buffer=HistoryBuffer(config.window, config.staleness),
            gate=TimeTriggeredGate(config.bcast_interval),
            pid=pid,
            setpoint=TargetSetpoint(v0, heading),
        )
        if i > 0:
            pcfg = replace(
                config.planner, car_number=i, bcast_interval=config.bcast_interval, horizon=config.plan_horizon
            )
            agent.planner = PlatoonPlanner(pcfg, config.frame, agent.setpoint)
            agent.controller = PidStanleyController(pid, config.stanley, config.dt_control)
        network.register(i)
        agents.append(agent)
    return World(config, agents, network, ProgressTracker(track, 0.0))


def leader_command(agent: Agent, cfg: SimConfig, s: float) -> ControlCommand:
    """Pure pursuit around the oval at the scheduled speed for progress ``s``."""
    target, _ = cfg.track.pose(s + cfg.leader_lookahead)
    steer = pure_pursuit_steer(agent.state.position, agent.state.heading, target, cfg.bicycle.wheelbase)
    v_ref = cfg.schedule.speed(cfg.track, s)
    agent.setpoint = TargetSetpoint(v_ref, agent.state.heading)
    return ControlCommand(pid_step(agent.pid, v_ref, agent.state.speed, cfg.dt_control), steer)


def tick(world: World, config: SimConfig | None = None) -> World:
    cfg = config or world.config
    now = world.time
    policy = reception_policy(cfg.reception_policy)
    ids = [a.id for a in world.agents]

    for agent in world.agents:
        if agent.gate.should_broadcast(agent.buffer, now):
            agent.seq += 1
            msg = make_bsm(agent.state, agent.seq, cfg.frame)
            agent.buffer.insert(msg)
            world.network.send(msg, [j for j in ids if j != agent.id])

    for agent in world.agents:
        agent.received = 0
        for msg in world.network.drain(agent.id):
            if policy(agent.id, msg.car) and agent.buffer.insert(msg, now):
                agent.received += 1

    plan_tick = world.tick_index % cfg.plan_period == 0
    for agent in world.agents:
        if agent.planner is None:
            agent.command = leader_command(agent, cfg, world.leader_progress.s)
            continue
        if plan_tick:
            agent.setpoint = agent.planner.plan(agent.state, agent.buffer, now)
        agent.command = agent.controller(agent.setpoint, agent.state)

    world.tick_index += 1
    t_next = world.time
    for agent in world.agents:
        agent.state = replace(bicycle_step(agent.state, agent.command, cfg.bicycle, cfg.dt_control), t=t_next)
    world.leader_progress.update(world.agents[0].state.position)

    prev = None
    for agent in world.agents:
        st = agent.state
        gap = None if prev is None else math.hypot(st.position.qx - prev.qx, st.position.qy - prev.qy)
        world.rows.append(
            LogRow(
                t=t_next,
                vehicle=agent.id,
                qx=st.position.qx,
                qy=st.position.qy,
                heading_deg=math.degrees(st.heading) % 360.0,
                speed=st.speed,
                v_star=agent.setpoint.v_star,
                steer=agent.command.steer,
                gap_to_predecessor=gap,
                msgs_received=agent.received,
            )
        )
        prev = st.position
    return world


def run_simulation(config: SimConfig) -> World:
    world = init_world(config)
    limit = config.time_limit
    while world.leader_progress.laps < config.laps and world.time < limit - 1e-9:
        tick(world, config)
    return world
