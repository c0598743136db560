"""Basic safety message and its datagram codec.

Wire format: one UTF-8 JSON object per datagram with flat keys. The
``event_flags`` map is flattened into ``event_flags.<name>`` entries so the
payload stays a single level deep and readable in a packet capture::

    {"car": 1, "seq": 42, "t": 4.2, "lat": 28.6, "lon": -81.2,
     "heading": 90.0, "speed": 1.0, "event_flags.car": 1}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..errors import DecodeError

MAX_DATAGRAM = 65507
FLAG_PREFIX = "event_flags."

_INT_FIELDS = ("car", "seq")
_FLOAT_FIELDS = ("t", "lat", "lon", "heading", "speed")
_FIELDS = _INT_FIELDS + _FLOAT_FIELDS


@dataclass(frozen=True)
class BasicSafetyMessage:
    car: int
    seq: int
    t: float
    lat: float  # degrees
    lon: float  # degrees
    heading: float  # degrees clockwise from north, [0, 360)
    speed: float
    event_flags: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in _INT_FIELDS:
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValueError(f"{name} must be an integer, got {v!r}")
        for name in _FLOAT_FIELDS:
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError(f"{name} must be a number, got {v!r}")
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.car < 0:
            raise ValueError(f"car must be non-negative, got {self.car}")
        if self.speed < 0:
            raise ValueError(f"speed must be >= 0, got {self.speed}")
        if not 0.0 <= self.heading < 360.0:
            raise ValueError(f"heading must lie in [0, 360), got {self.heading}")
        if abs(self.lat) > 90.0:
            raise ValueError(f"lat out of range: {self.lat}")
        if abs(self.lon) > 180.0:
            raise ValueError(f"lon out of range: {self.lon}")
        flags = dict(self.event_flags)
        if "car" not in flags:
            flags["car"] = self.car
        for k, v in flags.items():
            if not isinstance(k, str) or not k:
                raise ValueError(f"event flag names must be non-empty strings, got {k!r}")
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValueError(f"event flag {k!r} must be an integer, got {v!r}")
        if flags["car"] != self.car:
            raise ValueError(f"event_flags['car']={flags['car']} does not match car={self.car}")
        object.__setattr__(self, "event_flags", flags)


def encode(msg: BasicSafetyMessage) -> bytes:
    obj: dict[str, Any] = {name: getattr(msg, name) for name in _FIELDS}
    for k in sorted(msg.event_flags):
        obj[FLAG_PREFIX + k] = msg.event_flags[k]
    data = json.dumps(obj, allow_nan=False, separators=(",", ":")).encode("utf-8")
    if len(data) > MAX_DATAGRAM:
        raise ValueError(f"encoded message is {len(data)} bytes, above the datagram limit")
    return data


def _reject_constant(name: str) -> Any:
    raise DecodeError(f"non-finite number {name} not allowed")


def _no_duplicates(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in pairs:
        if k in out:
            raise DecodeError(f"duplicate key {k!r}")
        out[k] = v
    return out


def decode(data: bytes) -> BasicSafetyMessage:
    if not data:
        raise DecodeError("empty datagram")
    if len(data) > MAX_DATAGRAM:
        raise DecodeError(f"datagram of {len(data)} bytes exceeds {MAX_DATAGRAM}")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(f"not valid UTF-8: {exc.reason}") from None
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"malformed payload: {exc.msg} at offset {exc.pos}") from None
    if not isinstance(obj, dict):
        raise DecodeError(f"payload must be an object, got {type(obj).__name__}")

    missing = [name for name in _FIELDS if name not in obj]
    if missing:
        raise DecodeError(f"missing field(s): {', '.join(missing)}")
    flags: dict[str, int] = {}
    for key, value in obj.items():
        if key in _FIELDS:
            continue
        if not key.startswith(FLAG_PREFIX):
            raise DecodeError(f"unknown field {key!r}")
        name = key[len(FLAG_PREFIX):]
        if not name:
            raise DecodeError("empty event flag name")
        if isinstance(value, bool) or not isinstance(value, int):
            raise DecodeError(f"event flag {name!r} must be an integer")
        flags[name] = value
    if "car" not in flags:
        raise DecodeError("missing field event_flags.car")

    for name in _INT_FIELDS:
        v = obj[name]
        if isinstance(v, bool) or not isinstance(v, int):
            raise DecodeError(f"field {name!r} must be an integer, got {v!r}")
    for name in _FLOAT_FIELDS:
        v = obj[name]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise DecodeError(f"field {name!r} must be a number, got {v!r}")

    try:
        return BasicSafetyMessage(
            car=obj["car"],
            seq=obj["seq"],
            t=obj["t"],
            lat=obj["lat"],
            lon=obj["lon"],
            heading=obj["heading"],
            speed=obj["speed"],
            event_flags=flags,
        )
    except ValueError as exc:
        raise DecodeError(f"invalid message: {exc}") from None
