from .bsm import BasicSafetyMessage, decode, encode
from .buffer import DEFAULT_STALENESS, DEFAULT_WINDOW, HistoryBuffer, MessageStats, insert, latest_record
from .channel import ChannelModel, drop_draw, transmit
from .policy import (
    RECEPTION_POLICIES,
    AlwaysGate,
    BroadcastGate,
    ReceptionPolicy,
    TimeTriggeredGate,
    accept,
    all_broadcast,
    all_predecessor,
    leader_only,
    reception_policy,
    should_broadcast,
)
from .transport import DEFAULT_PORT_BASE, InProcessNetwork, UdpTransport

__all__ = [
    "AlwaysGate",
    "BasicSafetyMessage",
    "BroadcastGate",
    "ChannelModel",
    "DEFAULT_PORT_BASE",
    "DEFAULT_STALENESS",
    "DEFAULT_WINDOW",
    "HistoryBuffer",
    "InProcessNetwork",
    "MessageStats",
    "RECEPTION_POLICIES",
    "ReceptionPolicy",
    "TimeTriggeredGate",
    "UdpTransport",
    "accept",
    "all_broadcast",
    "all_predecessor",
    "decode",
    "drop_draw",
    "encode",
    "insert",
    "latest_record",
    "leader_only",
    "reception_policy",
    "should_broadcast",
    "transmit",
]
