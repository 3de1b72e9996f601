"""Session transport: server, client, health probe, chunk broker."""

from .broker import ActionChunkBroker
from .client import DEFAULT_TIMEOUT_S, RemotePolicy, client_connect
from .frames import (
    CLOSE_INTERNAL_ERROR,
    CLOSE_NORMAL,
    FRAME_TYPES,
    BindFailed,
    ConnectFailed,
    Phase,
    ProtocolViolation,
    ServerInferenceError,
    ServerMetadata,
    ServerTiming,
    SessionStateMachine,
    SessionTerminated,
    ShapeMismatch,
    TransportError,
    action_frame,
    error_frame,
    frame_type,
    obs_frame,
)
from .server import PolicyServer, Unreachable, healthz_probe, serve

__all__ = [
    "ActionChunkBroker",
    "BindFailed",
    "CLOSE_INTERNAL_ERROR",
    "CLOSE_NORMAL",
    "ConnectFailed",
    "DEFAULT_TIMEOUT_S",
    "FRAME_TYPES",
    "Phase",
    "PolicyServer",
    "ProtocolViolation",
    "RemotePolicy",
    "ServerInferenceError",
    "ServerMetadata",
    "ServerTiming",
    "SessionStateMachine",
    "SessionTerminated",
    "ShapeMismatch",
    "TransportError",
    "Unreachable",
    "action_frame",
    "client_connect",
    "error_frame",
    "frame_type",
    "healthz_probe",
    "obs_frame",
    "serve",
]
