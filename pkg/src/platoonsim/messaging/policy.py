"""Reception policies (who stores whose messages) and broadcast gates."""

from __future__ import annotations

import math
from typing import Callable, Protocol

from ..errors import ConfigError
from .buffer import HistoryBuffer

ReceptionPolicy = Callable[[int, int], int]

# absorbs float error when control ticks are multiples of dt
_GATE_EPS = 1e-9


def all_broadcast(receiver: int, sender: int) -> int:
    return 1


def leader_only(receiver: int, sender: int) -> int:
    return int(sender == 0)


def all_predecessor(receiver: int, sender: int) -> int:
    return int(sender < receiver)


RECEPTION_POLICIES: dict[str, ReceptionPolicy] = {
    "all-broadcast": all_broadcast,
    "leader-only": leader_only,
    "all-predecessor": all_predecessor,
}


def reception_policy(name: str) -> ReceptionPolicy:
    try:
        return RECEPTION_POLICIES[name]
    except KeyError:
        known = ", ".join(sorted(RECEPTION_POLICIES))
        raise ConfigError(f"unknown reception policy {name!r} (expected one of: {known})") from None


def accept(policy: ReceptionPolicy, receiver: int, sender: int) -> int:
    return policy(receiver, sender)


class BroadcastGate(Protocol):
    def should_broadcast(self, buffer: HistoryBuffer, now: float) -> int: ...


class TimeTriggeredGate:
    """Opens once at least ``interval`` seconds have passed since the last accepted broadcast."""

    def __init__(self, interval: float):
        if interval < 0 or not math.isfinite(interval):
            raise ValueError(f"broadcast interval must be finite and >= 0, got {interval}")
        self.interval = interval
        self.last_broadcast = -math.inf

    def should_broadcast(self, buffer: HistoryBuffer, now: float) -> int:
        if now - self.last_broadcast >= self.interval - _GATE_EPS:
            self.last_broadcast = now
            return 1
        return 0


class AlwaysGate:
    def should_broadcast(self, buffer: HistoryBuffer, now: float) -> int:
        return 1


def should_broadcast(gate: BroadcastGate, buffer: HistoryBuffer, now: float) -> int:
    return gate.should_broadcast(buffer, now)
