from .track import LeaderSchedule, OvalTrack, ProgressTracker, leader_reference, pure_pursuit_steer
from .vehicle import BicycleParams, VehicleState, bicycle_step
from .world import DEFAULT_REF, Agent, LogRow, SimConfig, World, init_world, leader_command, make_bsm, run_simulation, tick

__all__ = [
    "Agent",
    "BicycleParams",
    "DEFAULT_REF",
    "LeaderSchedule",
    "LogRow",
    "OvalTrack",
    "ProgressTracker",
    "SimConfig",
    "VehicleState",
    "World",
    "bicycle_step",
    "init_world",
    "leader_command",
    "leader_reference",
    "make_bsm",
    "pure_pursuit_steer",
    "run_simulation",
    "tick",
]
