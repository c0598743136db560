"""Command-line entry point: ``platoonsim {run,sweep,metrics,plot,demo-udp,defaults}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..errors import ConfigError
from ..simcore import OvalTrack, SimConfig
from .config import ExperimentConfig, default_config_text, load_config
from .experiment import DEFAULT_DROP_RATES, run_experiment, sweep
from .logio import read_log
from .metrics import compute_metrics
from .plot import emit_plot

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

log = logging.getLogger("platoonsim")


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig(sim=SimConfig())
    sim = cfg.sim
    try:
        if getattr(args, "drop_rate", None) is not None:
            sim = replace(sim, drop_rate=args.drop_rate)
        if getattr(args, "seed", None) is not None:
            sim = replace(sim, seed=args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return replace(cfg, sim=sim)


def _drop_rates(text: str) -> list[float]:
    try:
        rates = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"--drop-rates: cannot parse {text!r}") from None
    if not rates:
        raise ConfigError("--drop-rates: empty list")
    return rates


def cmd_run(args) -> int:
    cfg = _load(args)
    out = Path(args.out or cfg.out_dir)
    res = run_experiment(cfg, out)
    (out / "trajectories.svg").write_text(emit_plot(read_log(res.log_path), cfg.sim.drop_rate), encoding="utf-8")
    m = res.metrics
    print(f"log: {res.log_path}")
    print(f"platooning error p95: {m.platooning_error_p95:.2f} cm")
    print(f"speed spread p95:     {m.speed_spread_p95:.3f} m/s")
    print(f"laps: {m.laps:.2f}  min gap: {m.min_gap if m.min_gap is None else round(m.min_gap, 4)} m")
    s = res.message_stats
    print(f"messages: sent {s.sent}, delivered {s.delivered}, dropped {s.dropped}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    rates = _drop_rates(args.drop_rates)
    out = Path(args.out or cfg.out_dir)
    results = sweep(cfg, rates, out)
    print(f"{'drop_rate':>9}  {'error_cm':>9}  {'speed_diff':>10}")
    for rate, res in results:
        print(f"{rate:>9g}  {res.metrics.platooning_error_p95:>9.2f}  {res.metrics.speed_spread_p95:>10.3f}")
    print(f"table: {out / 'metrics.csv'}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    track = OvalTrack(args.straight, args.radius)
    m = compute_metrics(read_log(args.log), args.follow_distance, args.warmup_laps, track)
    print(f"platooning_error_p95_cm,{m.platooning_error_p95:.6f}")
    print(f"speed_spread_p95_mps,{m.speed_spread_p95:.6f}")
    print(f"laps,{m.laps:.6f}")
    print(f"samples,{m.samples}")
    return EXIT_OK


def cmd_plot(args) -> int:
    svg = emit_plot(read_log(args.log), args.drop_rate)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_demo_udp(args) -> int:
    from .udp_demo import run_udp_agent

    cfg = _load(args)
    run_udp_agent(cfg.sim, args.vehicle, args.duration, args.epoch, args.port_base, args.host)
    return EXIT_OK


def cmd_defaults(args) -> int:
    sys.stdout.write(default_config_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="platoonsim", description="V2V convoy simulator and packet-loss experiments")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="simulate one configuration")
    r.add_argument("--config")
    r.add_argument("--drop-rate", type=float)
    r.add_argument("--seed", type=int)
    r.add_argument("--out", help="output directory (default from config)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="one run per drop rate, same seed")
    s.add_argument("--config")
    s.add_argument("--drop-rates", default=",".join(f"{x:g}" for x in DEFAULT_DROP_RATES))
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("metrics", help="recompute metrics from a CSV log")
    m.add_argument("--log", required=True)
    m.add_argument("--follow-distance", type=float, default=0.2)
    m.add_argument("--warmup-laps", type=float, default=1.0)
    m.add_argument("--straight", type=float, default=OvalTrack.straight, help="track straight length, m")
    m.add_argument("--radius", type=float, default=OvalTrack.radius, help="track end radius, m")
    m.set_defaults(func=cmd_metrics)

    pl = sub.add_parser("plot", help="plan-view SVG of a CSV log")
    pl.add_argument("--log", required=True)
    pl.add_argument("--out", required=True)
    pl.add_argument("--drop-rate", type=float)
    pl.set_defaults(func=cmd_plot)

    d = sub.add_parser("demo-udp", help="drive one vehicle over UDP (one process per vehicle)")
    d.add_argument("--config")
    d.add_argument("--vehicle", type=int, required=True)
    d.add_argument("--duration", type=float, default=30.0)
    d.add_argument("--epoch", type=float, help="shared unix start time for all vehicles")
    d.add_argument("--port-base", type=int, default=47000)
    d.add_argument("--host", default="127.0.0.1")
    d.add_argument("--drop-rate", type=float)
    d.add_argument("--seed", type=int)
    d.set_defaults(func=cmd_demo_udp)

    c = sub.add_parser("defaults", help="print a config file holding every default")
    c.set_defaults(func=cmd_defaults)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        log.debug("runtime failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
