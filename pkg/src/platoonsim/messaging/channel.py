from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from typing import Iterable

from .bsm import BasicSafetyMessage
from .buffer import MessageStats

_MASK64 = (1 << 64) - 1


def drop_draw(seed: int, sender: int, seq: int, receiver: int) -> float:
    """Uniform [0, 1) variate hashed from the (seed, sender, seq, receiver) tuple.

    Hashing rather than drawing from a shared stream keeps every loss decision
    independent of the order in which vehicles transmit.
    """
    key = struct.pack("<QQQQ", seed & _MASK64, sender & _MASK64, seq & _MASK64, receiver & _MASK64)
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "little") / 2.0**64


@dataclass
class ChannelModel:
    drop_probability: float = 0.0
    rng_seed: int = 0
    stats: MessageStats = field(default_factory=MessageStats)

    def __post_init__(self) -> None:
        if not 0.0 <= self.drop_probability <= 1.0:
            raise ValueError(f"drop_probability must lie in [0, 1], got {self.drop_probability}")

    def delivers(self, msg: BasicSafetyMessage, receiver: int) -> bool:
        return drop_draw(self.rng_seed, msg.car, msg.seq, receiver) >= self.drop_probability

    def transmit(self, msg: BasicSafetyMessage, receivers: Iterable[int]) -> list[int]:
        """Receivers (in the given order) that get this message."""
        self.stats.sent += 1
        delivered = []
        for r in receivers:
            if self.delivers(msg, r):
                delivered.append(r)
                self.stats.delivered += 1
            else:
                self.stats.dropped += 1
        return delivered


def transmit(channel: ChannelModel, msg: BasicSafetyMessage, receivers: Iterable[int]) -> set[int]:
    return set(channel.transmit(msg, receivers))
