from .cost import CostSurface, PlannerConfig, cost_surface, platooning_cost, tracked_records
from .target import PlatoonPlanner, TargetSetpoint, generate_target, golden_section, minimize_box
from .trajectory import GapPolicy, PathError, TrajectoryModel, fit_history, fit_trajectory, path_error

__all__ = [
    "CostSurface",
    "GapPolicy",
    "PathError",
    "PlannerConfig",
    "PlatoonPlanner",
    "TargetSetpoint",
    "TrajectoryModel",
    "cost_surface",
    "fit_history",
    "fit_trajectory",
    "generate_target",
    "golden_section",
    "minimize_box",
    "path_error",
    "platooning_cost",
    "tracked_records",
]
