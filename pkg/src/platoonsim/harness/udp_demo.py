"""One convoy vehicle per process, exchanging safety messages over UDP.

Every process runs the same per-tick pipeline as the in-process simulator
but only for its own vehicle, paced by the wall clock. Start all vehicles
with the same ``epoch`` so their message timestamps share a time base.
This mode is not deterministic.
"""

from __future__ import annotations

import csv
import logging
import math
import sys
import time
from dataclasses import replace
from typing import TextIO

from ..messaging import ChannelModel, UdpTransport, reception_policy
from ..simcore import LogRow, ProgressTracker, SimConfig, bicycle_step, init_world, leader_command, make_bsm
from .logio import COLUMNS, format_row

log = logging.getLogger(__name__)


def run_udp_agent(
    cfg: SimConfig,
    vehicle: int,
    duration: float,
    epoch: float | None = None,
    port_base: int = 47000,
    host: str = "127.0.0.1",
    out: TextIO = sys.stdout,
) -> int:
    """Drive ``vehicle`` for ``duration`` seconds; returns the number of ticks run."""
    if not 0 <= vehicle < cfg.n_vehicles:
        raise ValueError(f"vehicle must be in [0, {cfg.n_vehicles}), got {vehicle}")
    agent = init_world(cfg).agents[vehicle]
    policy = reception_policy(cfg.reception_policy)
    others = [j for j in range(cfg.n_vehicles) if j != vehicle]
    progress = ProgressTracker(cfg.track, 0.0)
    epoch = time.time() if epoch is None else epoch
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)

    channel = ChannelModel(cfg.drop_rate, cfg.seed)
    ticks = 0
    with UdpTransport(vehicle, channel, port_base=port_base, host=host) as udp:
        while True:
            now = time.time() - epoch
            if now >= duration:
                break
            if now < 0:
                time.sleep(min(-now, cfg.dt_control))
                continue
            agent.state = replace(agent.state, t=now)
            if agent.gate.should_broadcast(agent.buffer, now):
                agent.seq += 1
                msg = make_bsm(agent.state, agent.seq, cfg.frame)
                agent.buffer.insert(msg)
                udp.send(msg, others)
            agent.received = 0
            for msg in udp.drain():
                if policy(vehicle, msg.car) and agent.buffer.insert(msg, now):
                    agent.received += 1
            if agent.planner is None:
                agent.command = leader_command(agent, cfg, progress.s)
            else:
                if ticks % cfg.plan_period == 0:
                    agent.setpoint = agent.planner.plan(agent.state, agent.buffer, now)
                agent.command = agent.controller(agent.setpoint, agent.state)
            agent.state = bicycle_step(agent.state, agent.command, cfg.bicycle, cfg.dt_control)
            if agent.planner is None:
                progress.update(agent.state.position)
            st = agent.state
            writer.writerow(
                format_row(
                    LogRow(
                        t=st.t,
                        vehicle=vehicle,
                        qx=st.position.qx,
                        qy=st.position.qy,
                        heading_deg=math.degrees(st.heading) % 360.0,
                        speed=st.speed,
                        v_star=agent.setpoint.v_star,
                        steer=agent.command.steer,
                        gap_to_predecessor=None,
                        msgs_received=agent.received,
                    )
                )
            )
            ticks += 1
            # pace to the wall clock; a late tick is simply not slept
            time.sleep(max(0.0, epoch + ticks * cfg.dt_control - time.time()))
        if udp.malformed:
            log.warning("vehicle %d rejected %d malformed datagrams", vehicle, udp.malformed)
    return ticks
