"""The eval loop: resolve refs, gate, adapt, launch, roll episodes, report.

Ordering is load-bearing here. The compatibility verdict is computed and
written to the run log strictly before any endpoint starts, so the log
itself witnesses that an incompatible pair never got a process launched.
A gate-blocked run still writes cross-eval-report.md (bucket, rules,
outcome, latency as n/a): downstream tooling reads the report without
caring whether the run got past the gate.
"""

import math
import statistics
from dataclasses import dataclass, field

from ..contracts.base import Benchmark
from ..gate.adapters import compile_adapter
from ..gate.compare import CompatReport, compare_specs
from ..registry.lookup import lookup
from ..registry.model import LookupResult
from ..registry.store import RegistryStore
from ..transport import ActionChunkBroker, ServerMetadata, client_connect
from ..endpoints import benchmark_from_entry, policy_from_entry, policy_server_args
from ..workspace.receipts import write_receipts
from ..workspace.runlog import RunEvent, RunRecord, append_log, now_iso
from .supervise import EndpointFailure, InProcessEndpoint, SubprocessEndpoint

EVAL_TASK = "eval"

# CLI conveniences, not protocol constants: one episode keeps ad-hoc runs
# cheap, and 200 steps caps a benchmark that never reports done.
DEFAULT_EPISODES = 1
DEFAULT_MAX_STEPS = 200


class GateBlocked(RuntimeError):
    """The compatibility gate refused the pair before anything launched."""

    def __init__(self, report: CompatReport):
        reasons = "; ".join(report.blocking) or "incompatible"
        super().__init__(f"gate blocked the pair ({report.bucket}): {reasons}")
        self.report = report


@dataclass(frozen=True)
class EvalConfig:
    policy: str
    benchmark: str
    episodes: int = DEFAULT_EPISODES
    max_steps: int = DEFAULT_MAX_STEPS
    seed: int = 0
    in_process: bool = False

    def __post_init__(self):
        if self.episodes < 1:
            raise ValueError(f"episodes must be >= 1, got {self.episodes}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True)
class EvalOutcome:
    bucket: str
    rules: tuple[str, ...]
    outcome: str  # "completed" | "gate_blocked"
    episodes: int
    successes: int
    success_rate: float  # percent, 0..100
    median_ms: float | None
    p95_ms: float | None
    steps_total: int = 0
    timings_ms: tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "bucket": self.bucket,
            "rules": list(self.rules),
            "outcome": self.outcome,
            "episodes": self.episodes,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "median_ms": self.median_ms,
            "p95_ms": self.p95_ms,
            "steps_total": self.steps_total,
        }


def latency_summary(samples_ms) -> tuple[float | None, float | None]:
    """(median, p95) over per-step server inference times, nearest-rank p95."""
    values = sorted(float(v) for v in samples_ms)
    if not values:
        return None, None
    median = statistics.median(values)
    p95 = values[max(0, math.ceil(0.95 * len(values)) - 1)]
    return median, p95


class _EvalRun:
    """One eval invocation: accumulates log events, then writes artefacts."""

    def __init__(self, store: RegistryStore, workspace_root, run_id: str | None = None):
        self.store = store
        self.root = workspace_root
        self.run_id = run_id
        self.record: RunRecord | None = None

    def log(self, tool: str, command: str, result: str) -> None:
        event = RunEvent(
            timestamp=now_iso(),
            tool=tool,
            subagent="orchestrator",
            command=command,
            result_line=result,
        )
        path = append_log(self.root, EVAL_TASK, event)
        if self.record is None:
            self.record = RunRecord(run_id=self.run_id or path.stem, events=[], meta={})
        self.record.append(event)


def _resolve(run: _EvalRun, ref: str, kind: str) -> LookupResult:
    hit = lookup(run.store.snapshot(), ref, kind=kind)
    run.log("registry", f"lookup {ref}", f"{hit.entry.name} via {hit.tier}")
    return hit


def _episode(env: Benchmark, policy, adapter, seed: int, max_steps: int, run: _EvalRun) -> tuple[bool, int]:
    """Run one episode; returns (success, steps). Success must be reported
    by the benchmark at done; a done without the flag counts as failure."""
    obs = env.reset(seed=seed)
    policy.reset()
    for step in range(1, max_steps + 1):
        action = policy.infer(adapter.obs_transform(obs))
        transition = env.step(adapter.action_transform(action))
        obs = transition.obs
        if transition.done:
            if "success" not in transition.info:
                run.log("eval", f"episode seed={seed}", "done without a success flag; counted as failure")
                return False, step
            return bool(transition.info["success"]), step
    return False, max_steps


def _write_artefacts(run: _EvalRun, outcome: EvalOutcome, policy_hit, bench_hit, config: EvalConfig) -> None:
    record = run.record
    entry = bench_hit.entry
    record.meta.update(
        {
            "source_commit": entry.commit,
            "image_digest": entry.image_digest or None,
            "environment": {
                "registry": str(run.store.root),
                "policy": policy_hit.entry.name,
                "benchmark": entry.name,
                "seed": config.seed,
            },
            "rerun_recipe": [
                f"harness eval --policy {config.policy} --benchmark {config.benchmark}"
                f" --episodes {config.episodes} --seed {config.seed} --max-steps {config.max_steps}",
            ],
            "decisions": [
                f"gate bucket {outcome.bucket}; applied rules: {', '.join(outcome.rules) or '(none)'}",
                f"run outcome {outcome.outcome}",
            ],
            "protocol_summary": entry.spec.success_criterion,
            "cross_eval": {
                "bucket": outcome.bucket,
                "rules": list(outcome.rules),
                "outcome": outcome.outcome,
                "episodes": outcome.episodes,
                "success_rate": outcome.success_rate,
                "median_ms": outcome.median_ms,
                "p95_ms": outcome.p95_ms,
            },
        }
    )
    paths = write_receipts(record, root=run.root)
    run.log("workspace", "write receipts", " ".join(path.name for path in paths))


def run_eval(
    config: EvalConfig,
    store: RegistryStore,
    workspace_root,
    run_id: str | None = None,
) -> EvalOutcome:
    """Drive one policy/benchmark evaluation end to end.

    Raises LookupFailed before anything is written, GateBlocked after the
    report artefacts exist, EndpointFailure or ContractViolation from the
    live phase.
    """
    run = _EvalRun(store, workspace_root, run_id=run_id)
    policy_hit = _resolve(run, config.policy, kind="policy")
    bench_hit = _resolve(run, config.benchmark, kind="benchmark")
    policy_spec = policy_hit.entry.spec
    bench_spec = bench_hit.entry.spec

    report = compare_specs(policy_spec, bench_spec)
    rules = tuple(app.to_text() for app in report.plan)
    run.log(
        "gate",
        f"compare {policy_hit.entry.name} {bench_hit.entry.name}",
        f"bucket={report.bucket} rules=[{', '.join(rules) or 'none'}]",
    )

    if report.bucket == "incompatible_action":
        outcome = EvalOutcome(
            bucket=report.bucket,
            rules=rules,
            outcome="gate_blocked",
            episodes=0,
            successes=0,
            success_rate=0.0,
            median_ms=None,
            p95_ms=None,
        )
        run.log("gate", "verdict", f"blocked: {'; '.join(report.blocking)}")
        _write_artefacts(run, outcome, policy_hit, bench_hit, config)
        raise GateBlocked(report)

    adapter = compile_adapter(report.plan, policy_spec, bench_spec)
    env = benchmark_from_entry(bench_hit.entry)

    if config.in_process:
        endpoint = InProcessEndpoint(
            policy_from_entry(policy_hit.entry),
            _server_metadata(policy_hit.entry),
        ).start()
    else:
        endpoint = SubprocessEndpoint(policy_server_args(policy_hit.entry)).start()
    run.log("endpoint", f"start policy-server {policy_hit.entry.name}", f"listening on port {endpoint.port}")

    successes = 0
    steps_total = 0
    try:
        with client_connect(endpoint.host, endpoint.port) as remote:
            chunk = report.plan.chunk_params()
            policy = ActionChunkBroker(remote, *chunk) if chunk else remote
            for index in range(config.episodes):
                success, steps = _episode(env, policy, adapter, config.seed + index, config.max_steps, run)
                successes += success
                steps_total += steps
                run.log(
                    "eval",
                    f"episode {index + 1}/{config.episodes}",
                    f"{'success' if success else 'failure'} after {steps} steps",
                )
            samples = [timing.infer_ms for timing in remote.timings]
    except OSError as exc:
        raise EndpointFailure("session", str(exc)) from exc
    finally:
        endpoint.stop()
    run.log("endpoint", "stop policy-server", "stopped")

    median_ms, p95_ms = latency_summary(samples)
    outcome = EvalOutcome(
        bucket=report.bucket,
        rules=rules,
        outcome="completed",
        episodes=config.episodes,
        successes=successes,
        success_rate=100.0 * successes / config.episodes,
        median_ms=median_ms,
        p95_ms=p95_ms,
        steps_total=steps_total,
        timings_ms=tuple(samples),
    )
    _write_artefacts(run, outcome, policy_hit, bench_hit, config)
    return outcome


def _server_metadata(entry):
    return ServerMetadata(
        action_dim=entry.spec.action_dim,
        policy_name=entry.name,
        execute_steps=entry.spec.action_horizon,
    )
