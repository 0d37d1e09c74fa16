from .link import (
    DIRECTIONS,
    OPERATOR_TO_ROBOT,
    ROBOT_TO_OPERATOR,
    LinkConfig,
    LinkStats,
    LossyLink,
)
from .ping import (
    CODE_OK,
    CODE_TIMEOUT,
    DEBOUNCE_K,
    PING_INTERVAL,
    PING_TIMEOUT,
    Connectivity,
    ConnectivityStatus,
    PingMonitor,
    PingRecord,
    classify_connectivity,
)
from .wire import EnvelopeConnection, EnvelopeServer, WireError, connect, decode_envelope, encode_envelope

__all__ = [
    "DIRECTIONS",
    "OPERATOR_TO_ROBOT",
    "ROBOT_TO_OPERATOR",
    "LinkConfig",
    "LinkStats",
    "LossyLink",
    "CODE_OK",
    "CODE_TIMEOUT",
    "DEBOUNCE_K",
    "PING_INTERVAL",
    "PING_TIMEOUT",
    "Connectivity",
    "ConnectivityStatus",
    "PingMonitor",
    "PingRecord",
    "classify_connectivity",
    "EnvelopeConnection",
    "EnvelopeServer",
    "WireError",
    "connect",
    "decode_envelope",
    "encode_envelope",
]
