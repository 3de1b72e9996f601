"""Read-only registry query service.

One dispatch table serves two transports: direct in-process calls and a
loopback TCP endpoint. TCP frames are length-prefixed: a 4-byte
big-endian frame length followed by that many bytes of a wire-codec
document. Requests are {"verb": str, "params": map}; responses are
{"ok": true, "result": ...} or {"ok": false, "error": {"type": ...,
"message": ..., ...}}. The read verbs are

    lookup_policy / lookup_benchmark / lookup_robot  {"query": str}
    list_entries                                     {"kind"?: str}
    quick_start                                      {"query": str}

Every other verb is answered with MutationRejected; the service holds
no write path at all. An undecodable frame gets a BadRequest response
and the connection is closed, since framing may have desynced.
"""

from __future__ import annotations

import socket
import socketserver
import struct
import threading
from typing import Any

from ..wire import WireCodecError, decode, encode
from .lookup import lookup
from .model import Ambiguous, LookupFailed, MutationRejected, NotFound, RegistryError
from .store import RegistryStore

MAX_FRAME_BYTES = 64 * 1024 * 1024

READ_VERBS = ("lookup_policy", "lookup_benchmark", "lookup_robot", "list_entries", "quick_start")

_LOOKUP_KINDS = {
    "lookup_policy": "policy",
    "lookup_benchmark": "benchmark",
    "lookup_robot": "robot",
}


class BadRequest(RegistryError):
    pass


def _error_doc(exc: Exception) -> dict[str, Any]:
    doc: dict[str, Any] = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, NotFound):
        doc["near_misses"] = list(exc.near_misses)
    elif isinstance(exc, Ambiguous):
        doc["tier"] = exc.tier
        doc["names"] = list(exc.names)
    elif isinstance(exc, MutationRejected):
        doc["verb"] = exc.verb
    return doc


def raise_from_error_doc(doc: dict[str, Any]) -> None:
    """Rebuild the typed error a remote dispatch serialized."""
    kind = doc.get("type", "")
    message = doc.get("message", "")
    if kind == "NotFound":
        raise NotFound(query=message, near_misses=tuple(doc.get("near_misses", ())))
    if kind == "Ambiguous":
        raise Ambiguous(query=message, tier=doc.get("tier", ""), names=tuple(doc.get("names", ())))
    if kind == "MutationRejected":
        raise MutationRejected(doc.get("verb", ""))
    if kind == "BadRequest":
        raise BadRequest(message)
    raise RegistryError(f"{kind}: {message}")


class RegistryService:
    """Verb dispatcher over one store; shared by both transports."""

    def __init__(self, store: RegistryStore):
        self.store = store

    def dispatch(self, request: Any) -> dict[str, Any]:
        """Answer one request document; typed failures become error docs."""
        try:
            result = self._dispatch_inner(request)
        except (LookupFailed, MutationRejected, BadRequest) as exc:
            return {"ok": False, "error": _error_doc(exc)}
        return {"ok": True, "result": result}

    def call(self, verb: str, params: dict | None = None) -> Any:
        """In-process convenience: returns the result or raises typed errors."""
        response = self.dispatch({"verb": verb, "params": params or {}})
        if response["ok"]:
            return response["result"]
        raise_from_error_doc(response["error"])

    def _dispatch_inner(self, request: Any) -> Any:
        if not isinstance(request, dict) or not isinstance(request.get("verb"), str):
            raise BadRequest("request must be a map with a string 'verb'")
        verb = request["verb"]
        params = request.get("params", {})
        if not isinstance(params, dict):
            raise BadRequest("'params' must be a map")
        if verb not in READ_VERBS:
            raise MutationRejected(verb)

        snapshot = self.store.snapshot()
        if verb in _LOOKUP_KINDS:
            query = params.get("query")
            if not isinstance(query, str):
                raise BadRequest(f"{verb} requires a string 'query'")
            return lookup(snapshot, query, kind=_LOOKUP_KINDS[verb]).to_dict()
        if verb == "list_entries":
            kind = params.get("kind")
            if kind is not None and not isinstance(kind, str):
                raise BadRequest("'kind' must be a string when given")
            entries = [e.to_dict() for e in snapshot if kind is None or e.kind == kind]
            return {"entries": entries}
        if verb == "quick_start":
            query = params.get("query")
            if not isinstance(query, str):
                raise BadRequest("quick_start requires a string 'query'")
            found = lookup(snapshot, query)
            return {"name": found.entry.name, "quick_start": list(found.entry.quick_start)}
        raise MutationRejected(verb)


def _recv_exact(sock: socket.socket, n: int) -> bytes | None:
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            return None
        buf.extend(chunk)
    return bytes(buf)


def read_frame(sock: socket.socket) -> bytes | None:
    """One length-prefixed frame, or None on clean EOF."""
    header = _recv_exact(sock, 4)
    if header is None:
        return None
    (length,) = struct.unpack(">I", header)
    if length > MAX_FRAME_BYTES:
        raise BadRequest(f"frame of {length} bytes exceeds the {MAX_FRAME_BYTES} byte limit")
    body = _recv_exact(sock, length)
    if body is None:
        raise BadRequest("connection closed mid-frame")
    return body


def write_frame(sock: socket.socket, payload: bytes) -> None:
    sock.sendall(struct.pack(">I", len(payload)) + payload)


class _Handler(socketserver.BaseRequestHandler):
    def handle(self) -> None:
        service: RegistryService = self.server.service  # type: ignore[attr-defined]
        sock = self.request
        while True:
            try:
                frame = read_frame(sock)
            except (BadRequest, OSError):
                return
            if frame is None:
                return
            try:
                request = decode(frame)
            except WireCodecError as exc:
                response = {"ok": False, "error": _error_doc(BadRequest(f"undecodable request: {exc}"))}
                try:
                    write_frame(sock, encode(response))
                finally:
                    return
            write_frame(sock, encode(service.dispatch(request)))


class _TCPServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class RegistryQueryServer:
    """Loopback TCP front end for a RegistryService."""

    def __init__(self, store: RegistryStore, host: str = "127.0.0.1", port: int = 0):
        self.service = RegistryService(store)
        self._server = _TCPServer((host, port), _Handler)
        self._server.service = self.service  # type: ignore[attr-defined]
        self.host, self.port = self._server.server_address[:2]
        self._thread: threading.Thread | None = None

    def start(self) -> "RegistryQueryServer":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
            self._thread = None

    def __enter__(self) -> "RegistryQueryServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()


class RegistryServiceClient:
    """Blocking client for the TCP transport; raises the same typed
    errors as RegistryService.call."""

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)

    def request(self, verb: str, params: dict | None = None) -> Any:
        write_frame(self._sock, encode({"verb": verb, "params": params or {}}))
        frame = read_frame(self._sock)
        if frame is None:
            raise ConnectionError("service closed the connection")
        response = decode(frame)
        if response.get("ok"):
            return response["result"]
        raise_from_error_doc(response["error"])

    def close(self) -> None:
        self._sock.close()

    def __enter__(self) -> "RegistryServiceClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
