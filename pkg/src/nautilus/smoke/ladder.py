"""Tiered smoke ladder for benchmark endpoints.

Each tier is a cheap necessary condition, ordered so that a failure is
diagnosed at the shallowest layer that can catch it:

  L1     reset + 10 random in-range steps, no exception, observations
         match the declared schema (resetting again whenever done is hit)
  L2     100-step rollout, every reward finite, trace non-constant
  L3_IL  random-action policy server on an ephemeral port, one complete
         client round trip against a live environment observation
  L3_RL  100 trainer steps, every loss finite, least-squares slope < 0

The run halts at the first failing tier; tiers behind it report skipped,
never pass. Which L3 runs follows the IL/RL verdict for the benchmark.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..contracts import Benchmark, BenchmarkSpec, RandomPolicy, make_action, validate_observation
from ..gate.ilrl import ILRLVerdict, classify_il_rl
from ..transport import ServerMetadata, client_connect, serve
from .trainer import TrainerFn, default_trainer

TIERS = ("L1", "L2", "L3_IL", "L3_RL")
STATUSES = ("pass", "fail", "skipped")

L1_STEPS = 10
L2_STEPS = 100
L3_RL_STEPS = 100
REWARD_FLATNESS_EPS = 1e-9


class SmokeFailure(RuntimeError):
    """A tier criterion was violated; names the tier and the criterion."""

    def __init__(self, tier: str, criterion: str, message: str):
        super().__init__(f"{tier} {criterion}: {message}")
        self.tier = tier
        self.criterion = criterion
        self.message = message


@dataclass(frozen=True)
class TierOutcome:
    tier: str
    status: str
    detail: str = ""

    def __post_init__(self):
        if self.tier not in TIERS:
            raise ValueError(f"unknown tier {self.tier!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def to_dict(self) -> dict:
        return {"tier": self.tier, "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class SmokeReport:
    outcomes: tuple[TierOutcome, ...]
    failing_tier: str | None = None
    artifacts: dict = field(default_factory=dict)

    def __post_init__(self):
        seen_fail = False
        for outcome in self.outcomes:
            if seen_fail and outcome.status == "pass":
                raise ValueError("a tier behind a failure cannot pass")
            if outcome.status == "fail":
                seen_fail = True
        failed = [o.tier for o in self.outcomes if o.status == "fail"]
        if (failed[0] if failed else None) != self.failing_tier:
            raise ValueError("failing_tier does not match the outcomes")

    @property
    def passed(self) -> bool:
        return self.failing_tier is None and all(o.status == "pass" for o in self.outcomes)

    def outcome(self, tier: str) -> TierOutcome:
        for entry in self.outcomes:
            if entry.tier == tier:
                return entry
        raise KeyError(tier)

    def to_dict(self) -> dict:
        return {
            "outcomes": [o.to_dict() for o in self.outcomes],
            "failing_tier": self.failing_tier,
            "artifacts": self.artifacts,
        }

    def to_text(self) -> str:
        lines = []
        for outcome in self.outcomes:
            suffix = f" ({outcome.detail})" if outcome.detail and outcome.status != "pass" else ""
            lines.append(f"{outcome.tier}: {outcome.status}{suffix}")
        return "\n".join(lines)


def _random_action(rng: np.random.Generator, action_dim: int):
    return make_action(rng.uniform(-1.0, 1.0, size=action_dim))


def _run_l1(env: Benchmark, spec: BenchmarkSpec, seed: int, artifacts: dict) -> None:
    rng = np.random.default_rng(seed)
    try:
        obs = env.reset(seed)
    except Exception as exc:
        raise SmokeFailure("L1", "reset", f"reset raised {type(exc).__name__}: {exc}") from exc
    _check_obs("L1", spec, obs, artifacts)
    reseed = seed
    for _ in range(L1_STEPS):
        try:
            transition = env.step(_random_action(rng, spec.action_dim))
        except Exception as exc:
            raise SmokeFailure("L1", "step", f"step raised {type(exc).__name__}: {exc}") from exc
        _check_obs("L1", spec, transition.obs, artifacts)
        if transition.done:
            reseed += 1
            try:
                obs = env.reset(reseed)
            except Exception as exc:
                raise SmokeFailure("L1", "reset", f"reset raised {type(exc).__name__}: {exc}") from exc
            _check_obs("L1", spec, obs, artifacts)


def _check_obs(tier: str, spec: BenchmarkSpec, obs, artifacts: dict) -> None:
    try:
        validate_observation(spec.obs_schema, obs)
    except Exception as exc:
        raise SmokeFailure(tier, "obs_schema", str(exc)) from exc
    artifacts.setdefault("obs_shapes", {key: list(value.shape) for key, value in obs.items()})


def _run_l2(env: Benchmark, spec: BenchmarkSpec, seed: int, artifacts: dict) -> None:
    rng = np.random.default_rng(seed)
    rewards: list[float] = []
    try:
        env.reset(seed)
        reseed = seed
        while len(rewards) < L2_STEPS:
            transition = env.step(_random_action(rng, spec.action_dim))
            rewards.append(float(transition.reward))
            if transition.done and len(rewards) < L2_STEPS:
                reseed += 1
                env.reset(reseed)
    except Exception as exc:
        raise SmokeFailure("L2", "rollout", f"{type(exc).__name__}: {exc}") from exc
    artifacts["reward_trace"] = rewards
    trace = np.asarray(rewards, dtype=np.float64)
    if not np.all(np.isfinite(trace)):
        bad = int(np.flatnonzero(~np.isfinite(trace))[0])
        raise SmokeFailure("L2", "reward_finite", f"non-finite reward {rewards[bad]!r} at step {bad}")
    if float(trace.max() - trace.min()) <= REWARD_FLATNESS_EPS:
        raise SmokeFailure(
            "L2", "reward_nonconstant", f"all {len(rewards)} rewards within {REWARD_FLATNESS_EPS} of {rewards[0]}"
        )


def _run_l3_il(env: Benchmark, spec: BenchmarkSpec, seed: int, artifacts: dict) -> None:
    policy = RandomPolicy(spec.action_dim, seed=seed)
    metadata = ServerMetadata(action_dim=spec.action_dim, policy_name="smoke-random")
    try:
        server = serve(policy, metadata, port=0)
    except Exception as exc:
        raise SmokeFailure("L3_IL", "server_start", f"{type(exc).__name__}: {exc}") from exc
    try:
        obs = env.reset(seed)
        with client_connect(server.host, server.port) as remote:
            action = remote.infer(obs)
            tensor = action.get("actions")
            if tensor is None or tuple(tensor.shape) != (spec.action_dim,):
                got = None if tensor is None else tuple(tensor.shape)
                raise SmokeFailure(
                    "L3_IL", "round_trip", f"expected action shape ({spec.action_dim},), got {got}"
                )
            env.step(action)
            artifacts["round_trip_frames"] = remote.frames_exchanged
    except SmokeFailure:
        raise
    except Exception as exc:
        raise SmokeFailure("L3_IL", "round_trip", f"{type(exc).__name__}: {exc}") from exc
    finally:
        server.stop()


def _run_l3_rl(trainer: TrainerFn, seed: int, artifacts: dict) -> None:
    step = trainer if trainer is not None else default_trainer(seed)
    losses: list[float] = []
    try:
        for k in range(L3_RL_STEPS):
            losses.append(float(step(k)))
    except Exception as exc:
        raise SmokeFailure("L3_RL", "trainer_step", f"step {len(losses)} raised {type(exc).__name__}: {exc}") from exc
    artifacts["loss_trace"] = losses
    trace = np.asarray(losses, dtype=np.float64)
    if not np.all(np.isfinite(trace)):
        bad = int(np.flatnonzero(~np.isfinite(trace))[0])
        raise SmokeFailure("L3_RL", "loss_finite", f"non-finite loss {losses[bad]!r} at step {bad}")
    slope = float(np.polyfit(np.arange(L3_RL_STEPS, dtype=np.float64), trace, 1)[0])
    artifacts["loss_slope"] = slope
    if not slope < 0:
        raise SmokeFailure("L3_RL", "loss_decreasing", f"least-squares slope {slope:.6g} is not negative")


def select_tiers(verdict: ILRLVerdict | str) -> tuple[str, ...]:
    """L1 and L2 always; the verdict picks which L3 applies."""
    regime = verdict if isinstance(verdict, str) else verdict.regime
    return ("L1", "L2", "L3_IL") if regime == "IL" else ("L1", "L2", "L3_RL")


def run_ladder(
    env: Benchmark,
    spec: BenchmarkSpec | None = None,
    verdict: ILRLVerdict | None = None,
    trainer: TrainerFn | None = None,
    seed: int = 0,
    tiers: tuple[str, ...] | None = None,
) -> SmokeReport:
    """Run the selected tiers in ladder order and report one line per tier.

    spec defaults to env.spec(); the verdict (classified from the spec when
    not supplied) decides between L3_IL and L3_RL unless tiers overrides
    the selection explicitly.
    """
    if spec is None:
        spec = env.spec()
    if tiers is None:
        tiers = select_tiers(verdict if verdict is not None else classify_il_rl(spec))
    unknown = [t for t in tiers if t not in TIERS]
    if unknown:
        raise ValueError(f"unknown tiers {unknown}; expected a subset of {TIERS}")
    selected = tuple(t for t in TIERS if t in tiers)

    artifacts: dict = {}
    outcomes: list[TierOutcome] = []
    failure: SmokeFailure | None = None
    for tier in selected:
        if failure is not None:
            outcomes.append(TierOutcome(tier, "skipped", f"halted at {failure.tier}"))
            continue
        try:
            if tier == "L1":
                _run_l1(env, spec, seed, artifacts)
            elif tier == "L2":
                _run_l2(env, spec, seed, artifacts)
            elif tier == "L3_IL":
                _run_l3_il(env, spec, seed, artifacts)
            else:
                _run_l3_rl(trainer, seed, artifacts)
            outcomes.append(TierOutcome(tier, "pass"))
        except SmokeFailure as exc:
            failure = exc
            outcomes.append(TierOutcome(tier, "fail", f"{exc.criterion}: {exc.message}"))
    return SmokeReport(
        outcomes=tuple(outcomes),
        failing_tier=failure.tier if failure is not None else None,
        artifacts=artifacts,
    )
