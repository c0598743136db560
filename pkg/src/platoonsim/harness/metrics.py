"""Convoy performance metrics computed from a log alone."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import groupby
from typing import Sequence

from ..simcore import LogRow, OvalTrack, ProgressTracker


class EmptyMetricsError(ValueError):
    """No samples survive the warm-up cut, so percentiles are undefined."""


def percentile_95(samples: Sequence[float]) -> float:
    """Nearest-rank 95th percentile: the ceil(0.95 n)-th smallest sample."""
    if len(samples) == 0:
        raise EmptyMetricsError("percentile of an empty sample")
    ordered = sorted(samples)
    rank = math.ceil(0.95 * len(ordered))
    return ordered[max(rank, 1) - 1]


@dataclass(frozen=True)
class RunMetrics:
    platooning_error_p95: float  # cm
    speed_spread_p95: float  # m/s
    laps: float
    samples: int  # follower-ticks after warm-up
    msgs_received: int
    min_gap: float | None  # m, whole run

    def as_row(self, drop_rate: float) -> list[str]:
        return [f"{drop_rate:g}", f"{self.platooning_error_p95:.3f}", f"{self.speed_spread_p95:.4f}"]


def leader_progress(rows: Sequence[LogRow], track: OvalTrack) -> list[tuple[float, float]]:
    """(t, laps driven) of vehicle 0, from its logged positions projected onto the track."""
    tracker = None
    out = []
    for r in rows:
        if r.vehicle != 0:
            continue
        if tracker is None:
            tracker = ProgressTracker(track, track.project((r.qx, r.qy)))
            start = tracker.s
        tracker.update((r.qx, r.qy))
        out.append((r.t, (tracker.s - start) / track.lap_length))
    return out


def compute_metrics(
    rows: Sequence[LogRow],
    follow_distance: float = 0.2,
    warmup_laps: float = 1.0,
    track: OvalTrack | None = None,
) -> RunMetrics:
    """Gap error and speed spread after the leader has driven ``warmup_laps``.

    Lap progress comes from projecting the leader's logged positions onto
    the track, so the metrics depend on nothing but the log and the track.
    """
    if not rows:
        raise EmptyMetricsError("log has no rows")
    progress = leader_progress(rows, track or OvalTrack())
    if not progress:
        raise EmptyMetricsError("log has no leader rows")
    t_warm = next((t for t, laps in progress if laps >= warmup_laps - 1e-9), math.inf)

    errors, spreads = [], []
    gaps = [r.gap_to_predecessor for r in rows if r.gap_to_predecessor is not None]
    for t, group in groupby(rows, key=lambda r: r.t):
        if t < t_warm:
            continue
        speeds = []
        for r in group:
            speeds.append(r.speed)
            if r.gap_to_predecessor is not None:
                errors.append(abs(r.gap_to_predecessor - follow_distance) * 100.0)
        spreads.append(max(speeds) - min(speeds))
    if not errors:
        raise EmptyMetricsError(f"no follower samples after a {warmup_laps}-lap warm-up")
    return RunMetrics(
        platooning_error_p95=percentile_95(errors),
        speed_spread_p95=percentile_95(spreads),
        laps=progress[-1][1],
        samples=len(errors),
        msgs_received=sum(r.msgs_received for r in rows),
        min_gap=min(gaps) if gaps else None,
    )
