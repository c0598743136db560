"""Fixed-format CSV logs of simulation rows."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable

from ..simcore import LogRow

COLUMNS = (
    "t",
    "vehicle",
    "qx",
    "qy",
    "heading_deg",
    "speed",
    "v_star",
    "steer",
    "gap_to_predecessor",
    "msgs_received",
)


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def format_row(row: LogRow) -> list[str]:
    gap = "" if row.gap_to_predecessor is None else _fmt(row.gap_to_predecessor)
    return [
        _fmt(row.t),
        str(row.vehicle),
        _fmt(row.qx),
        _fmt(row.qy),
        _fmt(row.heading_deg),
        _fmt(row.speed),
        _fmt(row.v_star),
        _fmt(row.steer),
        gap,
        str(row.msgs_received),
    ]


def rows_to_csv(rows: Iterable[LogRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow(format_row(row))
    return buf.getvalue()


def write_log(rows: Iterable[LogRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rows_to_csv(rows), encoding="utf-8")
    return path


def parse_log(text: str) -> list[LogRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise ValueError("empty log")
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected log header {header}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if len(rec) != len(COLUMNS):
            raise ValueError(f"line {lineno}: expected {len(COLUMNS)} fields, got {len(rec)}")
        try:
            rows.append(
                LogRow(
                    t=float(rec[0]),
                    vehicle=int(rec[1]),
                    qx=float(rec[2]),
                    qy=float(rec[3]),
                    heading_deg=float(rec[4]),
                    speed=float(rec[5]),
                    v_star=float(rec[6]),
                    steer=float(rec[7]),
                    gap_to_predecessor=None if rec[8] == "" else float(rec[8]),
                    msgs_received=int(rec[9]),
                )
            )
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return rows


def read_log(path: str | Path) -> list[LogRow]:
    return parse_log(Path(path).read_text(encoding="utf-8"))
