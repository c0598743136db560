import csv
import math
import random
import re
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from platoonsim.errors import ConfigError
from platoonsim.harness import (
    COLUMNS,
    SWEEP_COLUMNS,
    EmptyMetricsError,
    ExperimentConfig,
    compute_metrics,
    default_config_text,
    emit_plot,
    parse_config,
    parse_log,
    percentile_95,
    rows_to_csv,
    run_experiment,
    sweep,
)
from platoonsim.harness.cli import main
from platoonsim.simcore import LogRow, SimConfig, run_simulation

GOLDEN = Path(__file__).parent / "golden"
SHORT = SimConfig(max_time=2.0, laps=1)


def brute_p95(xs):
    s = sorted(xs)
    k = 0
    while k < len(s) and (k + 1) < 0.95 * len(s):
        k += 1
    return s[k]


# percentile


def test_percentile_examples():
    assert percentile_95(list(range(1, 101))) == 95
    assert percentile_95([7.5]) == 7.5
    with pytest.raises(EmptyMetricsError):
        percentile_95([])


def test_percentile_against_sort_oracle():
    rng = random.Random(11)
    for _ in range(1000):
        xs = [rng.uniform(-10, 10) for _ in range(rng.randint(1, 300))]
        assert percentile_95(xs) == brute_p95(xs)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200))
def test_percentile_property(xs):
    p = percentile_95(xs)
    assert p in xs
    assert sum(x <= p for x in xs) >= math.ceil(0.95 * len(xs))


# config


def test_default_config_text_round_trips():
    cfg = parse_config(default_config_text())
    assert cfg.sim == SimConfig()
    assert cfg.warmup_laps == 1.0


def test_config_overrides():
    cfg = parse_config("[messaging]\ndrop_rate = 0.4\nseed = 9\n[planner]\nfollow_distance = 0.3\n[control]\nkp = 2\n")
    assert cfg.sim.drop_rate == 0.4 and cfg.sim.seed == 9
    assert cfg.sim.planner.follow_distance == 0.3
    assert cfg.sim.pid.kp == 2.0


@pytest.mark.parametrize(
    "text, pattern",
    [
        ("[planner]\nv_max = fast\n", r"\[planner\] v_max"),
        ("[planr]\n", "unknown section"),
        ("[control]\ngain = 1\n", r"\[control\] gain: unknown key"),
        ("[messaging]\ndrop_rate = 1.5\n", "drop_rate"),
        ("[messaging]\nreception_policy = everyone\n", "everyone"),
        ("[simcore]\ndt_control = 0.03\n", "divide"),
        ("[planner]\nextrapolate = maybe\n", "extrapolate"),
        ("[simcore]\nlaps = nan\n", "laps"),
        ("not an ini", "malformed"),
    ],
)
def test_config_errors_name_the_field(text, pattern):
    with pytest.raises(ConfigError, match=pattern):
        parse_config(text)


# log I/O


def test_csv_fixed_format_and_round_trip():
    world = run_simulation(SHORT)
    text = rows_to_csv(world.rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert re.fullmatch(r"0\.020000,0,-?\d+\.\d{6},-?\d+\.\d{6},\d+\.\d{6},\d+\.\d{6},\d+\.\d{6},-?\d+\.\d{6},,\d+", lines[1])
    again = rows_to_csv(parse_log(text))
    assert again == text


def test_short_run_matches_golden_log():
    assert rows_to_csv(run_simulation(SHORT).rows) == (GOLDEN / "short_run.csv").read_text()


def test_parse_log_rejects_bad_header():
    with pytest.raises(ValueError):
        parse_log("a,b\n1,2\n")


# metrics


def test_metrics_from_log_equal_reported(tmp_path):
    res = run_experiment(ExperimentConfig(sim=SimConfig(laps=2, drop_rate=0.1)), tmp_path)
    assert res.log_path.read_text() == res.csv_text
    assert compute_metrics(parse_log(res.log_path.read_text())) == res.metrics


def test_warmup_excludes_first_lap():
    rows = parse_log((GOLDEN / "short_run.csv").read_text())
    with pytest.raises(EmptyMetricsError):
        compute_metrics(rows, warmup_laps=1.0)
    m = compute_metrics(rows, warmup_laps=0.0)
    assert m.samples == sum(1 for r in rows if r.vehicle > 0)


def test_zero_laps_is_an_error():
    with pytest.raises(EmptyMetricsError):
        run_experiment(ExperimentConfig(sim=SimConfig(laps=0)))


def test_same_config_same_metrics():
    cfg = ExperimentConfig(sim=SimConfig(laps=2, drop_rate=0.4, seed=2))
    assert run_experiment(cfg).metrics == run_experiment(cfg).metrics


def test_speed_spread_is_instantaneous_range():
    rows = [
        LogRow(0.1, 0, -2.0, -2.0, 90.0, 1.0, 1.0, 0.0, None, 0),
        LogRow(0.1, 1, -2.2, -2.0, 90.0, 1.5, 1.0, 0.0, 0.2, 0),
        LogRow(0.2, 0, -1.9, -2.0, 90.0, 1.0, 1.0, 0.0, None, 0),
        LogRow(0.2, 1, -2.1, -2.0, 90.0, 0.7, 1.0, 0.0, 0.25, 0),
    ]
    m = compute_metrics(rows, warmup_laps=0.0)
    assert m.speed_spread_p95 == pytest.approx(0.5)
    assert m.platooning_error_p95 == pytest.approx(5.0)


# plots


def test_plot_one_polyline_per_vehicle():
    svg = emit_plot(run_simulation(SHORT).rows, 0.0)
    assert svg.count("<polyline") == 3
    assert "drop rate 0" in svg


def test_plot_single_tick_is_valid():
    rows = [r for r in run_simulation(SHORT).rows if r.t == 0.02]
    svg = emit_plot(rows)
    assert svg.count("<circle") == 3 and svg.startswith("<svg")


def test_plot_empty_log_rejected():
    with pytest.raises(ValueError):
        emit_plot([])


def test_plot_matches_golden():
    rows = parse_log((GOLDEN / "short_run.csv").read_text())
    assert emit_plot(rows, 0.0) == (GOLDEN / "short_run.svg").read_text()


# sweep table and CLI


def test_sweep_table_layout(tmp_path):
    cfg = ExperimentConfig(sim=SimConfig(laps=2))
    results = sweep(cfg, [0.0, 0.5], tmp_path)
    rows = list(csv.reader((tmp_path / "metrics.csv").open()))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert [r[0] for r in rows[1:]] == ["0", "0.5"]
    assert (tmp_path / "drop_0.5" / "trajectories.svg").exists()
    assert float(rows[2][1]) == pytest.approx(results[1][1].metrics.platooning_error_p95, abs=1e-3)


def test_cli_run_metrics_plot(tmp_path, capsys):
    ini = tmp_path / "c.ini"
    ini.write_text("[simcore]\nlaps = 2\n")
    assert main(["run", "--config", str(ini), "--drop-rate", "0.1", "--out", str(tmp_path / "o")]) == 0
    out = capsys.readouterr().out
    assert "platooning error p95" in out
    log = tmp_path / "o" / "run.csv"
    assert main(["metrics", "--log", str(log)]) == 0
    reported = float(re.search(r"p95: ([\d.]+) cm", out).group(1))
    recomputed = float(capsys.readouterr().out.splitlines()[0].split(",")[1])
    assert recomputed == pytest.approx(reported, abs=0.005)
    assert main(["plot", "--log", str(log), "--out", str(tmp_path / "p.svg")]) == 0
    assert (tmp_path / "p.svg").read_text().count("<polyline") == 3


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[planner]\nv_max = fast\n")
    assert main(["run", "--config", str(bad)]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.ini")]) == 2
    assert main(["sweep", "--drop-rates", "x,y"]) == 2
    zero = tmp_path / "zero.ini"
    zero.write_text("[simcore]\nlaps = 0\n")
    assert main(["run", "--config", str(zero), "--out", str(tmp_path / "z")]) == 3
    assert main(["metrics", "--log", str(tmp_path / "missing.csv")]) == 3
    err = capsys.readouterr().err
    assert "v_max" in err


def test_cli_defaults_prints_loadable_config(capsys):
    assert main(["defaults"]) == 0
    assert parse_config(capsys.readouterr().out).sim == SimConfig()
