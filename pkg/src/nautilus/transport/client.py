"""Session client: a remote policy handle satisfying the Policy contract.

client_connect() performs the WebSocket handshake, consumes the mandatory
metadata frame, and returns a handle whose infer() does one strict
request/response round trip per call. The handle is not safe for concurrent
calls; callers serialize. reset() is a local no-op: the session protocol
carries no reset frame, so chunked policies are reset where they live, on
the server side.
"""

from __future__ import annotations

from websockets.exceptions import ConnectionClosed, InvalidHandshake
from websockets.sync.client import connect as ws_connect

from ..contracts.base import Action, Observation, Policy
from ..wire import decode, encode
from .frames import (
    ConnectFailed,
    ProtocolViolation,
    ServerInferenceError,
    ServerMetadata,
    ServerTiming,
    SessionStateMachine,
    SessionTerminated,
    frame_type,
    obs_frame,
)

DEFAULT_TIMEOUT_S = 60.0


class RemotePolicy(Policy):
    def __init__(self, host: str, port: int, timeout: float = DEFAULT_TIMEOUT_S):
        self.host = host
        self.port = port
        self.timeout = timeout
        self.timings: list[ServerTiming] = []
        self._machine = SessionStateMachine("client")
        try:
            self._connection = ws_connect(f"ws://{host}:{port}/", open_timeout=timeout, max_size=None)
        except (OSError, InvalidHandshake, TimeoutError) as exc:
            raise ConnectFailed(f"cannot connect to ws://{host}:{port}/: {exc}") from exc
        try:
            self._metadata = self._recv_metadata()
        except BaseException:
            self._connection.close()
            raise

    def _recv_metadata(self) -> ServerMetadata:
        frame = self._recv_frame()
        kind = frame_type(frame)
        if kind != "metadata":
            self._machine._fail(f"first server frame must be metadata, got {kind!r}")
        self._machine.on_receive("metadata")
        return ServerMetadata.from_frame(frame)

    def _recv_frame(self) -> dict:
        try:
            raw = self._connection.recv(timeout=self.timeout)
        except ConnectionClosed as exc:
            self._machine.on_close()
            code = exc.rcvd.code if exc.rcvd is not None else None
            raise SessionTerminated(f"session closed with code {code}", close_code=code) from exc
        except TimeoutError as exc:
            raise SessionTerminated(f"no server frame within {self.timeout}s", close_code=None) from exc
        return decode(raw)

    def get_server_metadata(self) -> ServerMetadata:
        return self._metadata

    @property
    def frames_exchanged(self) -> int:
        return self._machine.frames_exchanged

    def infer(self, obs: Observation) -> Action:
        self._machine.on_send("obs")
        try:
            self._connection.send(encode(obs_frame(obs)))
        except ConnectionClosed as exc:
            self._machine.on_close()
            code = exc.rcvd.code if exc.rcvd is not None else None
            raise SessionTerminated(f"session closed with code {code}", close_code=code) from exc

        frame = self._recv_frame()
        kind = frame_type(frame)
        if kind == "error":
            self._machine.on_receive("error")
            raise ServerInferenceError(str(frame.get("message", "")))
        self._machine.on_receive(kind)
        action = frame.get("data")
        if not isinstance(action, dict):
            raise ProtocolViolation("action frame carries no data map")
        self.timings.append(ServerTiming.from_dict(frame.get("server_timing", {})))
        return action

    def reset(self) -> None:
        return None  # no reset frame in the protocol; see module docstring

    def wait_close_code(self, timeout: float = 5.0) -> int | None:
        """After an error frame, wait for the server's close and return its code."""
        try:
            self._connection.recv(timeout=timeout)
        except ConnectionClosed as exc:
            self._machine.on_close()
            return exc.rcvd.code if exc.rcvd is not None else None
        raise ProtocolViolation("server sent another frame instead of closing")

    def close(self) -> None:
        self._connection.close()
        self._machine.on_close()

    def __enter__(self) -> "RemotePolicy":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def client_connect(host: str, port: int, timeout: float = DEFAULT_TIMEOUT_S) -> RemotePolicy:
    return RemotePolicy(host, port, timeout=timeout)
