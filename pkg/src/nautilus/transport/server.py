"""WebSocket policy server with an HTTP liveness probe on the same port.

Each connection is one session handled in its own thread: metadata is
pushed immediately, then the obs/action loop runs until the client closes.
Policy exceptions become an error frame carrying the formatted traceback,
followed by a close with the internal-error code 1011; they never take the
server process down. GET /healthz answers over plain HTTP on the same
listener (the handshake hook short-circuits before the WebSocket upgrade),
so the probe works before, during, and between sessions.

By default a single guard serializes infer calls across sessions; pass
shareable=True when the policy is safe to call concurrently.
"""

from __future__ import annotations

import http
import http.client
import socket
import threading
import time
import traceback

from websockets.exceptions import ConnectionClosed
from websockets.frames import CloseCode
from websockets.sync.server import serve as ws_serve

from ..contracts.base import Policy
from ..wire import decode, encode
from .frames import (
    BindFailed,
    ProtocolViolation,
    ServerMetadata,
    ServerTiming,
    SessionStateMachine,
    TransportError,
    action_frame,
    error_frame,
    frame_type,
)


class Unreachable(TransportError):
    """The liveness probe could not reach a live server."""


class PolicyServer:
    def __init__(
        self,
        policy: Policy,
        metadata: ServerMetadata,
        host: str = "127.0.0.1",
        port: int = 0,
        shareable: bool = False,
    ):
        self.policy = policy
        self.metadata = metadata
        self.host = host
        try:
            self._sock = socket.create_server((host, port))
        except OSError as exc:
            raise BindFailed(f"cannot bind {host}:{port}: {exc}") from exc
        self.port = self._sock.getsockname()[1]
        self._guard = None if shareable else threading.Lock()
        self.session_frames: list[int] = []  # frames_exchanged per finished session
        self._conn_lock = threading.Lock()
        self._connections: set = set()
        self._server = ws_serve(
            self._handle_session,
            sock=self._sock,
            process_request=self._process_request,
            max_size=None,
        )
        self._thread: threading.Thread | None = None

    # --- lifecycle ---------------------------------------------------------

    def start(self) -> "PolicyServer":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True, name=f"policy-server-{self.port}")
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        with self._conn_lock:
            open_connections = list(self._connections)
        for connection in open_connections:  # shutdown() only stops the listener
            try:
                connection.close(code=CloseCode.GOING_AWAY)
            except Exception:
                pass
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    def __enter__(self) -> "PolicyServer":
        return self

    def __exit__(self, *exc_info) -> None:
        self.stop()

    # --- request handling --------------------------------------------------

    def _process_request(self, connection, request):
        if request.path == "/healthz":
            return connection.respond(http.HTTPStatus.OK, "ok")
        return None

    def _infer(self, obs):
        if self._guard is None:
            return self.policy.infer(obs)
        with self._guard:
            return self.policy.infer(obs)

    def _handle_session(self, connection) -> None:
        machine = SessionStateMachine("server")
        with self._conn_lock:
            self._connections.add(connection)
        try:
            self._run_session(connection, machine)
        finally:
            with self._conn_lock:
                self._connections.discard(connection)
            self.session_frames.append(machine.frames_exchanged)

    def _run_session(self, connection, machine: SessionStateMachine) -> None:
        machine.on_send("metadata")
        connection.send(encode(self.metadata.to_frame()))
        prev_total_ms = 0.0

        while True:
            try:
                raw = connection.recv()
            except ConnectionClosed:
                machine.on_close()
                return

            started = time.perf_counter()
            try:
                frame = decode(raw)
                kind = frame_type(frame)
                machine.on_receive(kind)
                obs = frame.get("data")
                if not isinstance(obs, dict):
                    raise ProtocolViolation("obs frame carries no data map")

                infer_started = time.perf_counter()
                action = self._infer(obs)
                infer_ms = (time.perf_counter() - infer_started) * 1000.0

                timing = ServerTiming(infer_ms=infer_ms, prev_total_ms=prev_total_ms)
                machine.on_send("action")
                connection.send(encode(action_frame(action, timing)))
                prev_total_ms = (time.perf_counter() - started) * 1000.0
            except ConnectionClosed:
                machine.on_close()
                return
            except Exception:
                # failure text travels to the client, then the session closes 1011;
                # bypasses the machine: the error path terminates unconditionally
                try:
                    connection.send(encode(error_frame(traceback.format_exc())))
                    connection.close(code=CloseCode.INTERNAL_ERROR)
                except ConnectionClosed:
                    pass
                return


def serve(
    policy: Policy,
    metadata: ServerMetadata,
    host: str = "127.0.0.1",
    port: int = 0,
    shareable: bool = False,
    start: bool = True,
) -> PolicyServer:
    """Bind and (by default) start a policy server; returns the running handle."""
    server = PolicyServer(policy, metadata, host=host, port=port, shareable=shareable)
    return server.start() if start else server


def healthz_probe(host: str, port: int, timeout: float = 5.0) -> str:
    """Return "OK" when the server's event loop answers the liveness probe."""
    conn = http.client.HTTPConnection(host, port, timeout=timeout)
    try:
        conn.request("GET", "/healthz")
        response = conn.getresponse()
        body = response.read()
    except OSError as exc:
        raise Unreachable(f"{host}:{port} liveness probe failed: {exc}") from exc
    finally:
        conn.close()
    if response.status != 200 or body.strip() != b"ok":
        raise Unreachable(f"{host}:{port} answered {response.status} {body!r}")
    return "OK"
