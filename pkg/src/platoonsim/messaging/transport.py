"""Datagram transports: deterministic in-process delivery and UDP sockets.

Both apply the same :class:`ChannelModel` on the sending side, so a given
(seed, sender, seq, receiver) is lost or delivered identically regardless
of the transport.
"""

from __future__ import annotations

import logging
import queue
import socket
import threading
from typing import Iterable

from ..errors import DecodeError
from .bsm import BasicSafetyMessage, decode, encode
from .channel import ChannelModel

log = logging.getLogger(__name__)

DEFAULT_PORT_BASE = 47000


class InProcessNetwork:
    """Loss-emulating broadcast medium for the single-threaded simulator."""

    def __init__(self, channel: ChannelModel):
        self.channel = channel
        self._inboxes: dict[int, list[bytes]] = {}

    def register(self, vehicle: int) -> None:
        self._inboxes.setdefault(vehicle, [])

    def send(self, msg: BasicSafetyMessage, receivers: Iterable[int]) -> list[int]:
        data = encode(msg)
        delivered = self.channel.transmit(msg, receivers)
        for r in delivered:
            self._inboxes[r].append(data)
        return delivered

    def drain(self, vehicle: int) -> list[BasicSafetyMessage]:
        pending = self._inboxes[vehicle]
        self._inboxes[vehicle] = []
        return [decode(d) for d in pending]


class UdpTransport:
    """One vehicle's UDP endpoint.

    Vehicle ``j`` listens on ``port_base + j``. Received datagrams are decoded
    on a background thread and handed to the owning agent through a
    thread-safe queue; malformed datagrams are logged and counted.
    """

    def __init__(
        self,
        vehicle: int,
        channel: ChannelModel,
        port_base: int = DEFAULT_PORT_BASE,
        host: str = "127.0.0.1",
        bind_host: str = "",
    ):
        self.vehicle = vehicle
        self.channel = channel
        self.port_base = port_base
        self.host = host
        self.malformed = 0
        self._queue: queue.Queue[BasicSafetyMessage] = queue.Queue()
        self._stop = threading.Event()

        self._rx = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._rx.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._rx.bind((bind_host, port_base + vehicle))
        self._rx.settimeout(0.1)
        self._tx = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._tx.setsockopt(socket.SOL_SOCKET, socket.SO_BROADCAST, 1)
        self._thread = threading.Thread(target=self._receive_loop, name=f"udp-rx-{vehicle}", daemon=True)

    @property
    def port(self) -> int:
        return self.port_base + self.vehicle

    def start(self) -> "UdpTransport":
        self._thread.start()
        return self

    def send(self, msg: BasicSafetyMessage, receivers: Iterable[int]) -> list[int]:
        data = encode(msg)
        delivered = self.channel.transmit(msg, receivers)
        for r in delivered:
            self._tx.sendto(data, (self.host, self.port_base + r))
        return delivered

    def drain(self) -> list[BasicSafetyMessage]:
        out = []
        while True:
            try:
                out.append(self._queue.get_nowait())
            except queue.Empty:
                return out

    def _receive_loop(self) -> None:
        while not self._stop.is_set():
            try:
                data, addr = self._rx.recvfrom(65535)
            except socket.timeout:
                continue
            except OSError:
                break
            try:
                self._queue.put(decode(data))
            except DecodeError as exc:
                self.malformed += 1
                log.warning("vehicle %d: dropped datagram from %s: %s", self.vehicle, addr, exc)

    def close(self) -> None:
        self._stop.set()
        if self._thread.is_alive():
            self._thread.join(timeout=1.0)
        self._rx.close()
        self._tx.close()

    def __enter__(self) -> "UdpTransport":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.close()
