from .config import ExperimentConfig, build_config, default_config_text, load_config, parse_config
from .experiment import DEFAULT_DROP_RATES, SWEEP_COLUMNS, ExperimentResult, run_experiment, sweep, write_metrics_table
from .logio import COLUMNS, format_row, parse_log, read_log, rows_to_csv, write_log
from .metrics import EmptyMetricsError, RunMetrics, compute_metrics, leader_progress, percentile_95
from .plot import emit_plot

__all__ = [
    "COLUMNS",
    "EmptyMetricsError",
    "ExperimentConfig",
    "ExperimentResult",
    "DEFAULT_DROP_RATES",
    "RunMetrics",
    "SWEEP_COLUMNS",
    "build_config",
    "compute_metrics",
    "default_config_text",
    "emit_plot",
    "format_row",
    "leader_progress",
    "load_config",
    "parse_config",
    "parse_log",
    "percentile_95",
    "read_log",
    "rows_to_csv",
    "run_experiment",
    "sweep",
    "write_log",
    "write_metrics_table",
]
