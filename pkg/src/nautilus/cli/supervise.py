"""Launch and tear down policy endpoints for the eval loop.

Two flavors behind one interface: SubprocessEndpoint runs the policy in a
child process (the realistic path: the orchestrator learns the port from
the child's "PORT <n>" line, then health-probes it), InProcessEndpoint
runs it on a thread in this process (fast path for tests). Both expose
host/port after start() and guarantee stop() leaves nothing running.
"""

import queue
import subprocess
import sys
import threading
import time

from ..contracts.base import Policy
from ..transport import PolicyServer, ServerMetadata, Unreachable, healthz_probe

PORT_DEADLINE_S = 10.0
PROBE_DEADLINE_S = 10.0
PROBE_RETRY_S = 0.05
STOP_GRACE_S = 5.0

STAGES = ("start", "probe", "session", "shutdown")


class EndpointFailure(RuntimeError):
    """An endpoint could not be started, probed, used, or stopped."""

    def __init__(self, stage: str, message: str):
        if stage not in STAGES:
            raise ValueError(f"unknown endpoint stage {stage!r}")
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.message = message


def wait_healthy(host: str, port: int, deadline_s: float = PROBE_DEADLINE_S) -> None:
    """Poll GET /healthz until it answers; EndpointFailure at the deadline."""
    deadline = time.monotonic() + deadline_s
    while True:
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            raise EndpointFailure("probe", f"no healthz answer from {host}:{port} within {deadline_s:.1f}s")
        try:
            healthz_probe(host, port, timeout=max(remaining, 0.01))
            return
        except Unreachable:
            time.sleep(min(PROBE_RETRY_S, max(remaining, 0.0)))


class InProcessEndpoint:
    """Policy served from a thread in this process."""

    def __init__(self, policy: Policy, metadata: ServerMetadata):
        self._server = PolicyServer(policy, metadata, port=0)
        self.host = "127.0.0.1"
        self.port = 0

    def start(self) -> "InProcessEndpoint":
        self._server.start()
        self.host = self._server.host
        self.port = self._server.port
        return self

    def stop(self) -> None:
        self._server.stop()


class SubprocessEndpoint:
    """Policy served from a child python process.

    start() blocks until the child has printed its port and the healthz
    probe answers; stop() terminates, waits STOP_GRACE_S, then kills.
    """

    def __init__(self, server_args: list[str]):
        self._args = list(server_args)
        self._proc: subprocess.Popen | None = None
        self.host = "127.0.0.1"
        self.port = 0

    def start(self) -> "SubprocessEndpoint":
        argv = [sys.executable, "-m", "nautilus.endpoints.policy_server", *self._args]
        self._proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
        )
        try:
            self.port = self._read_port()
            wait_healthy(self.host, self.port)
        except Exception:
            self.stop()
            raise
        return self

    def _read_port(self) -> int:
        # The child may take arbitrarily long to import; a reader thread
        # plus a queue gives us a deadline without platform-specific fd polling.
        lines: queue.Queue = queue.Queue()
        stdout = self._proc.stdout

        def pump():
            for line in stdout:
                lines.put(line)
            lines.put(None)

        threading.Thread(target=pump, daemon=True).start()
        deadline = time.monotonic() + PORT_DEADLINE_S
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise EndpointFailure("start", f"child did not announce a port within {PORT_DEADLINE_S:.1f}s")
            try:
                line = lines.get(timeout=remaining)
            except queue.Empty:
                continue
            if line is None:
                code = self._proc.poll()
                raise EndpointFailure("start", f"child exited (code {code}) before announcing a port")
            if line.startswith("PORT "):
                try:
                    return int(line.split(maxsplit=1)[1])
                except (IndexError, ValueError):
                    raise EndpointFailure("start", f"malformed port line {line.strip()!r}") from None

    def stop(self) -> None:
        proc = self._proc
        if proc is None or proc.poll() is not None:
            return
        proc.terminate()
        try:
            proc.wait(timeout=STOP_GRACE_S)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
