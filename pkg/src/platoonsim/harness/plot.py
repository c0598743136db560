"""Plan-view trajectory figure as a self-contained SVG."""

from __future__ import annotations

from itertools import groupby
from typing import Sequence
from xml.sax.saxutils import escape

from ..simcore import LogRow

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
WIDTH = 640
MARGIN = 40


def emit_plot(rows: Sequence[LogRow], drop_rate: float | None = None, title: str = "Plan-view trajectories") -> str:
    """One polyline per vehicle in the local frame, equal axis scaling."""
    if not rows:
        raise ValueError("cannot plot an empty log")
    tracks: dict[int, list[tuple[float, float]]] = {}
    for vid, group in groupby(sorted(rows, key=lambda r: (r.vehicle, r.t)), key=lambda r: r.vehicle):
        tracks[vid] = [(r.qx, r.qy) for r in group]

    xs = [p[0] for pts in tracks.values() for p in pts]
    ys = [p[1] for pts in tracks.values() for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-6)
    scale = (WIDTH - 2 * MARGIN) / span
    height = int(round((y1 - y0) * scale)) + 2 * MARGIN + 20

    def px(x: float, y: float) -> str:
        # SVG y grows downward; flip so north is up
        return f"{MARGIN + (x - x0) * scale:.2f},{height - MARGIN - (y - y0) * scale:.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">',
        f'<rect width="{WIDTH}" height="{height}" fill="white"/>',
        f'<text x="{MARGIN}" y="20" font-family="sans-serif" font-size="14">{escape(title)}</text>',
    ]
    for i, (vid, pts) in enumerate(sorted(tracks.items())):
        color = COLORS[i % len(COLORS)]
        if len(pts) == 1:
            cx, cy = px(*pts[0]).split(",")
            out.append(f'<circle class="vehicle-{vid}" cx="{cx}" cy="{cy}" r="2" fill="{color}"/>')
        else:
            coords = " ".join(px(x, y) for x, y in pts)
            out.append(f'<polyline class="vehicle-{vid}" fill="none" stroke="{color}" stroke-width="1" points="{coords}"/>')
    legend_y = 40
    label = "" if drop_rate is None else f"drop rate {drop_rate:g}: "
    for i, vid in enumerate(sorted(tracks)):
        color = COLORS[i % len(COLORS)]
        name = "leader" if vid == 0 else f"follower {vid}"
        y = legend_y + 16 * i
        out.append(f'<rect x="{WIDTH - 180}" y="{y - 9}" width="10" height="10" fill="{color}"/>')
        out.append(
            f'<text x="{WIDTH - 165}" y="{y}" font-family="sans-serif" font-size="11">{escape(label + name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
