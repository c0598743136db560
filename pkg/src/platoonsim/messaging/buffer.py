from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .bsm import BasicSafetyMessage

DEFAULT_WINDOW = 20  # 2 s of history at 10 Hz
DEFAULT_STALENESS = 1.0


@dataclass
class MessageStats:
    sent: int = 0
    delivered: int = 0
    dropped: int = 0
    discarded_stale: int = 0
    discarded_out_of_order: int = 0

    def merge(self, other: "MessageStats") -> "MessageStats":
        return MessageStats(
            self.sent + other.sent,
            self.delivered + other.delivered,
            self.dropped + other.dropped,
            self.discarded_stale + other.discarded_stale,
            self.discarded_out_of_order + other.discarded_out_of_order,
        )


class HistoryBuffer:
    """Per-sender sliding window of the most recent messages a vehicle holds."""

    def __init__(self, window: int = DEFAULT_WINDOW, staleness: float = DEFAULT_STALENESS):
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        if staleness <= 0:
            raise ValueError(f"staleness must be > 0, got {staleness}")
        self.window = window
        self.staleness = staleness
        self.stats = MessageStats()
        self._entries: dict[int, deque[BasicSafetyMessage]] = {}

    def insert(self, msg: BasicSafetyMessage, now: float | None = None) -> bool:
        """Append ``msg`` to its sender's window; returns False if it was discarded.

        Messages whose seq does not exceed the sender's newest seq are dropped,
        as are messages already older than the staleness horizon at ``now``.
        """
        if now is not None and now - msg.t > self.staleness:
            self.stats.discarded_stale += 1
            return False
        window = self._entries.get(msg.car)
        if window is None:
            window = self._entries[msg.car] = deque(maxlen=self.window)
        elif window and msg.seq <= window[-1].seq:
            self.stats.discarded_out_of_order += 1
            return False
        window.append(msg)
        return True

    def latest_record(self, sender: int, now: float) -> BasicSafetyMessage | None:
        window = self._entries.get(sender)
        if not window:
            return None
        msg = window[-1]
        if now - msg.t > self.staleness:
            return None
        return msg

    def history(self, sender: int, now: float | None = None) -> list[BasicSafetyMessage]:
        window = self._entries.get(sender, ())
        if now is None:
            return list(window)
        return [m for m in window if now - m.t <= self.staleness]

    def senders(self) -> list[int]:
        return sorted(self._entries)

    def __len__(self) -> int:
        return sum(len(w) for w in self._entries.values())


def insert(buffer: HistoryBuffer, msg: BasicSafetyMessage, now: float | None = None) -> HistoryBuffer:
    buffer.insert(msg, now)
    return buffer


def latest_record(buffer: HistoryBuffer, sender: int, now: float) -> BasicSafetyMessage | None:
    return buffer.latest_record(sender, now)
