"""Session frames and the legality state machine.

One WebSocket binary frame carries one wire-codec document. Every document
is a map whose "type" key names its role:

  metadata  first server frame of a session; action_dim, policy_name,
            checkpoint, execute_steps, plus pass-through extras
  obs       client request; "data" holds the observation map
  action    server reply; "data" holds the action map, "server_timing"
            holds {"infer_ms", "prev_total_ms"}
  error     server-side failure text, followed by close code 1011

A session has three phases, Connecting -> Looping -> Terminated, and
exactly one outstanding request at a time; anything else is a
ProtocolViolation on the receiving side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

FRAME_TYPES = ("metadata", "obs", "action", "error")

# close-code mapping: the symbolic internal-error code is 1011, normal close 1000
CLOSE_NORMAL = 1000
CLOSE_INTERNAL_ERROR = 1011

METADATA_RESERVED_KEYS = ("type", "action_dim", "policy_name", "checkpoint", "execute_steps")


class TransportError(Exception):
    """Base class for session transport failures."""


class ProtocolViolation(TransportError):
    """A frame arrived (or was about to be sent) out of legal order."""


class BindFailed(TransportError):
    """The server could not bind its listener."""


class ConnectFailed(TransportError):
    """The client could not reach or handshake with the server."""


class SessionTerminated(TransportError):
    """The session closed mid-exchange; carries the close code."""

    def __init__(self, message: str, close_code: int | None = None):
        super().__init__(message)
        self.close_code = close_code


class ServerInferenceError(TransportError):
    """The server reported a policy failure; carries the server's text."""


class ShapeMismatch(TransportError):
    """An action chunk had the wrong horizon or trailing dimension."""


@dataclass(frozen=True)
class ServerMetadata:
    action_dim: int
    policy_name: str = "policy"
    checkpoint: str = ""
    execute_steps: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.action_dim < 1:
            raise ValueError(f"action_dim must be >= 1, got {self.action_dim}")
        if self.execute_steps < 1:
            raise ValueError(f"execute_steps must be >= 1, got {self.execute_steps}")
        for key in self.extra:
            if key in METADATA_RESERVED_KEYS:
                raise ValueError(f"extra key {key!r} collides with a reserved metadata key")

    def to_frame(self) -> dict:
        frame = {
            "type": "metadata",
            "action_dim": self.action_dim,
            "policy_name": self.policy_name,
            "checkpoint": self.checkpoint,
            "execute_steps": self.execute_steps,
        }
        frame.update(self.extra)  # unknown keys are preserved, never rejected
        return frame

    @classmethod
    def from_frame(cls, frame: dict) -> "ServerMetadata":
        try:
            return cls(
                action_dim=int(frame["action_dim"]),
                policy_name=str(frame.get("policy_name", "policy")),
                checkpoint=str(frame.get("checkpoint", "")),
                execute_steps=int(frame.get("execute_steps", 1)),
                extra={k: v for k, v in frame.items() if k not in METADATA_RESERVED_KEYS},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolViolation(f"malformed metadata frame: {exc}") from exc


@dataclass(frozen=True)
class ServerTiming:
    infer_ms: float
    prev_total_ms: float

    def __post_init__(self):
        for name, value in (("infer_ms", self.infer_ms), ("prev_total_ms", self.prev_total_ms)):
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")

    def to_dict(self) -> dict:
        return {"infer_ms": self.infer_ms, "prev_total_ms": self.prev_total_ms}

    @classmethod
    def from_dict(cls, doc: dict) -> "ServerTiming":
        try:
            return cls(infer_ms=float(doc["infer_ms"]), prev_total_ms=float(doc["prev_total_ms"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolViolation(f"malformed server_timing: {exc}") from exc


def obs_frame(obs: dict) -> dict:
    return {"type": "obs", "data": obs}


def action_frame(action: dict, timing: ServerTiming) -> dict:
    return {"type": "action", "data": action, "server_timing": timing.to_dict()}


def error_frame(message: str) -> dict:
    return {"type": "error", "message": message}


def frame_type(frame) -> str:
    if not isinstance(frame, dict):
        raise ProtocolViolation(f"frame is {type(frame).__name__}, not a map")
    kind = frame.get("type")
    if kind not in FRAME_TYPES:
        raise ProtocolViolation(f"unknown frame type {kind!r}")
    return kind


class Phase(Enum):
    CONNECTING = "Connecting"
    LOOPING = "Looping"
    TERMINATED = "Terminated"


class SessionStateMachine:
    """Tracks one side of a session and rejects illegal frame orderings.

    The machine is symmetric: a client feeds sends of obs and receives of
    metadata/action/error; a server feeds receives of obs and sends of
    metadata/action/error. Legality is the same from both seats:

      * the first server-to-client frame must be metadata, exactly once
      * obs and action alternate strictly (one outstanding request)
      * error terminates; nothing may follow termination
    """

    def __init__(self, role: str):
        if role not in ("client", "server"):
            raise ValueError(f"role must be 'client' or 'server', got {role!r}")
        self.role = role
        self.phase = Phase.CONNECTING
        self.outstanding = False
        self.frames_exchanged = 0

    def _fail(self, message: str):
        self.phase = Phase.TERMINATED
        raise ProtocolViolation(message)

    def _event(self, kind: str, direction: str) -> None:
        if self.phase is Phase.TERMINATED:
            self._fail(f"{kind} after session termination")
        if kind == "metadata":
            if self.phase is not Phase.CONNECTING:
                self._fail("double metadata: metadata frame after the session was already established")
            self.phase = Phase.LOOPING
        elif kind == "obs":
            if self.phase is Phase.CONNECTING:
                self._fail("obs before metadata: session not established yet")
            if self.outstanding:
                self._fail("pipelined obs: previous request still awaiting its action")
            self.outstanding = True
        elif kind == "action":
            if self.phase is Phase.CONNECTING:
                self._fail("action before metadata")
            if not self.outstanding:
                self._fail("action without a pending obs")
            self.outstanding = False
        elif kind == "error":
            self.phase = Phase.TERMINATED
        else:
            self._fail(f"unknown frame type {kind!r}")
        self.frames_exchanged += 1

    def on_send(self, kind: str) -> None:
        expected = {"client": ("obs",), "server": ("metadata", "action", "error")}[self.role]
        if kind not in expected:
            self._fail(f"a {self.role} never sends {kind} frames")
        self._event(kind, "send")

    def on_receive(self, kind: str) -> None:
        expected = {"client": ("metadata", "action", "error"), "server": ("obs",)}[self.role]
        if kind not in expected:
            self._fail(f"a {self.role} never receives {kind} frames")
        self._event(kind, "receive")

    def on_close(self) -> None:
        self.phase = Phase.TERMINATED
