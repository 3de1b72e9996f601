"""Lifecycle smoke for policy endpoints.

Five stages, run in order: start, probe, obs, action, shutdown. A stage
failure raises LifecycleFailure naming the stage and marks the stages
behind it skipped in the attached report.

Modes:
  with_ckpt     the caller supplies endpoint_factory, which starts the
                real endpoint (weights and all) and returns its handle
  mock_forward  no checkpoint needed: an in-process server answers with
                a random action tensor of the declared shape
  skipped       record that the check was deliberately not run; every
                stage reports skipped and nothing is started
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from ..contracts import PolicySpec, RandomPolicy, draw_observation
from ..transport import PolicyServer, ServerMetadata, Unreachable, client_connect, healthz_probe

MODES = ("with_ckpt", "mock_forward", "skipped")
STAGES = ("start", "probe", "obs", "action", "shutdown")

PROBE_DEADLINE_S = 10.0
PROBE_RETRY_S = 0.05

# an endpoint handle exposes host, port, and stop()
EndpointFactory = Callable[[], object]


@dataclass(frozen=True)
class StageOutcome:
    stage: str
    status: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"stage": self.stage, "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class PolicySmokeReport:
    mode: str
    stages: tuple[StageOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(s.status == "pass" for s in self.stages)

    def to_dict(self) -> dict:
        return {"mode": self.mode, "stages": [s.to_dict() for s in self.stages]}

    def to_text(self) -> str:
        lines = [f"mode: {self.mode}"]
        for stage in self.stages:
            suffix = f" ({stage.detail})" if stage.detail and stage.status == "fail" else ""
            lines.append(f"{stage.stage}: {stage.status}{suffix}")
        return "\n".join(lines)


class LifecycleFailure(RuntimeError):
    """A lifecycle stage failed; carries the stage name and the partial report."""

    def __init__(self, stage: str, message: str, report: PolicySmokeReport | None = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.message = message
        self.report = report


def _report_after_failure(mode: str, done: list[StageOutcome], stage: str, message: str) -> PolicySmokeReport:
    stages = list(done)
    stages.append(StageOutcome(stage, "fail", message))
    remaining = STAGES[STAGES.index(stage) + 1 :]
    stages.extend(StageOutcome(s, "skipped", f"halted at {stage}") for s in remaining)
    return PolicySmokeReport(mode=mode, stages=tuple(stages))


def _probe_until(host: str, port: int, deadline_s: float) -> None:
    deadline = time.monotonic() + deadline_s
    while True:
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            raise Unreachable(f"{host}:{port} did not answer the liveness probe within {deadline_s}s")
        try:
            healthz_probe(host, port, timeout=remaining)
            return
        except Unreachable:
            if deadline - time.monotonic() <= 0:
                raise
            time.sleep(PROBE_RETRY_S)


def run_policy_smoke(
    policy_spec: PolicySpec,
    mode: str = "mock_forward",
    endpoint_factory: EndpointFactory | None = None,
    probe_timeout: float = PROBE_DEADLINE_S,
    seed: int = 0,
) -> PolicySmokeReport:
    """Drive one endpoint lifecycle and return the per-stage report.

    Raises LifecycleFailure (with the partial report attached) as soon as a
    stage fails; whatever was started is stopped before raising.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if mode == "skipped":
        return PolicySmokeReport(
            mode=mode, stages=tuple(StageOutcome(s, "skipped", "mode=skipped") for s in STAGES)
        )

    done: list[StageOutcome] = []

    def fail(stage: str, message: str) -> LifecycleFailure:
        return LifecycleFailure(stage, message, _report_after_failure(mode, done, stage, message))

    # start
    endpoint = None
    try:
        if mode == "with_ckpt":
            if endpoint_factory is None:
                raise ValueError("with_ckpt mode needs an endpoint_factory that loads the checkpoint")
            endpoint = endpoint_factory()
        else:
            policy = RandomPolicy(policy_spec.action_dim, policy_spec.action_horizon, seed=seed)
            metadata = ServerMetadata(
                action_dim=policy_spec.action_dim,
                policy_name="mock-forward",
                execute_steps=policy_spec.action_horizon,
            )
            endpoint = PolicyServer(policy, metadata, port=0).start()
        host, port = endpoint.host, endpoint.port
    except Exception as exc:
        _stop_quietly(endpoint)
        raise fail("start", f"{type(exc).__name__}: {exc}") from exc
    done.append(StageOutcome("start", "pass"))

    try:
        # probe
        try:
            _probe_until(host, port, probe_timeout)
        except Exception as exc:
            raise fail("probe", f"{type(exc).__name__}: {exc}") from exc
        done.append(StageOutcome("probe", "pass"))

        # obs: establish the session and deliver one conformant observation
        remote = None
        try:
            remote = client_connect(host, port)
            obs = draw_observation(policy_spec.obs_schema, seed=seed)
        except Exception as exc:
            if remote is not None:
                remote.close()
            raise fail("obs", f"{type(exc).__name__}: {exc}") from exc
        done.append(StageOutcome("obs", "pass"))

        # action: one inference, shape checked against the declared contract
        try:
            action = remote.infer(obs)
            tensor = action.get("actions")
            expected = (
                (policy_spec.action_horizon, policy_spec.action_dim)
                if policy_spec.action_horizon > 1
                else (policy_spec.action_dim,)
            )
            if tensor is None or tuple(tensor.shape) != expected:
                got = None if tensor is None else tuple(tensor.shape)
                raise ValueError(f"expected action shape {expected}, got {got}")
        except Exception as exc:
            remote.close()
            raise fail("action", f"{type(exc).__name__}: {exc}") from exc
        done.append(StageOutcome("action", "pass"))

        # shutdown
        try:
            remote.close()
            _stop_quietly(endpoint, swallow=False)
            endpoint = None
        except Exception as exc:
            raise fail("shutdown", f"{type(exc).__name__}: {exc}") from exc
        done.append(StageOutcome("shutdown", "pass"))
    finally:
        _stop_quietly(endpoint)

    return PolicySmokeReport(mode=mode, stages=tuple(done))


def _stop_quietly(endpoint, swallow: bool = True) -> None:
    if endpoint is None:
        return
    try:
        endpoint.stop()
    except Exception:
        if not swallow:
            raise
