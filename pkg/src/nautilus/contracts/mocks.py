"""Deterministic mock endpoints.

The mock benchmark draws every observation from a generator seeded at
reset(seed), so equal seeds give byte-equal episodes under a deterministic
policy. Success is defined as the cumulative L2 norm of applied action
vectors crossing a configured threshold — chosen so a scripted policy can
be constructed that succeeds in an exactly computable number of steps.
"""

from __future__ import annotations


from dataclasses import dataclass, field

import numpy as np

from ..wire import TensorValue
from .base import Action, Benchmark, ContractViolation, Observation, Policy, Robot, SafeStopActive, Transition, action_tensor
from .specs import ArraySpec, BenchmarkSpec, PolicySpec, RobotSpec, SpecError

POLICY_KINDS = ("random", "zero", "scripted-success", "raising")


class ConfigInvalid(ValueError):
    """Mock configuration violates its constraints."""


DEFAULT_OBS_SCHEMA = {
    "agentview_rgb": ArraySpec("u8", (64, 64, 3)),
    "state": ArraySpec("f32", (7,)),
}


@dataclass(frozen=True)
class MockBenchmarkConfig:
    obs_schema: dict[str, ArraySpec] = field(default_factory=lambda: dict(DEFAULT_OBS_SCHEMA))
    action_dim: int = 7
    control_mode: str = "joint"
    reward_structure: str = "none"
    episode_length: int = 10
    success_threshold: float = 0.0  # 0 disables the success rule
    gripper_sign: int = 1
    has_training_entrypoint: bool = False
    success_criterion: str = "cumulative action norm crosses threshold"
    seed_protocol: str = "integer seed per reset"
    task_count: int = 1

    def __post_init__(self):
        if not self.obs_schema:
            raise ConfigInvalid("obs_schema must name at least one tensor key")
        if self.action_dim < 1:
            raise ConfigInvalid(f"action_dim must be >= 1, got {self.action_dim}")
        if self.episode_length < 1:
            raise ConfigInvalid(f"episode_length must be >= 1, got {self.episode_length}")
        if self.success_threshold < 0:
            raise ConfigInvalid("success_threshold must be >= 0")

    def spec(self) -> BenchmarkSpec:
        return BenchmarkSpec(
            obs_schema=dict(self.obs_schema),
            action_dim=self.action_dim,
            control_mode=self.control_mode,
            gripper_sign=self.gripper_sign,
            reward_structure=self.reward_structure,
            has_training_entrypoint=self.has_training_entrypoint,
            success_criterion=self.success_criterion,
            seed_protocol=self.seed_protocol,
            task_count=self.task_count,
        )


def _draw_entry(rng: np.random.Generator, entry: ArraySpec) -> TensorValue:
    if entry.dtype == "u8":
        array = rng.integers(0, 256, size=entry.shape, dtype=np.uint8)
    elif entry.dtype in ("f32", "f64"):
        array = rng.uniform(-1.0, 1.0, size=entry.shape).astype(np.float32 if entry.dtype == "f32" else np.float64)
    elif entry.dtype in ("i32", "i64"):
        array = rng.integers(-100, 100, size=entry.shape, dtype=np.int32 if entry.dtype == "i32" else np.int64)
    elif entry.dtype == "boolean":
        array = rng.integers(0, 2, size=entry.shape).astype(bool)
    else:  # unreachable: ArraySpec already validated the dtype
        raise ConfigInvalid(f"cannot generate dtype {entry.dtype}")
    return TensorValue.from_numpy(array)


def draw_observation(obs_schema: dict[str, ArraySpec], seed: int = 0) -> Observation:
    """One schema-conformant observation with seeded random content."""
    rng = np.random.default_rng(seed)
    return {key: _draw_entry(rng, entry) for key, entry in obs_schema.items()}


class MockBenchmark(Benchmark):
    def __init__(self, config: MockBenchmarkConfig | None = None):
        self.config = config or MockBenchmarkConfig()
        self._rng: np.random.Generator | None = None
        self._step_count = 0
        self._cumulative_norm = 0.0
        self._done = False

    def spec(self) -> BenchmarkSpec:
        return self.config.spec()

    def reset(self, seed: int) -> Observation:
        self._rng = np.random.default_rng(seed)
        self._step_count = 0
        self._cumulative_norm = 0.0
        self._done = False
        return self._observe()

    def _observe(self) -> Observation:
        return {key: _draw_entry(self._rng, entry) for key, entry in self.config.obs_schema.items()}

    def step(self, action: Action) -> Transition:
        if self._rng is None:
            raise ContractViolation("step called before reset")
        if self._done:
            raise ContractViolation("step called after done; reset first")
        tensor = action_tensor(action)
        if tensor.shape[-1] != self.config.action_dim:
            raise ContractViolation(
                f"action dim {tensor.shape[-1]} does not match benchmark action_dim {self.config.action_dim}"
            )
        vector = tensor.to_numpy().reshape(-1)[: self.config.action_dim].astype(np.float64)

        self._step_count += 1
        norm = float(np.linalg.norm(vector))
        self._cumulative_norm += norm

        success = bool(
            self.config.success_threshold > 0 and self._cumulative_norm >= self.config.success_threshold - 1e-9
        )
        done = success or self._step_count >= self.config.episode_length
        reward = self._reward(norm, success)
        obs = self._observe()
        info: dict = {"step": self._step_count}
        if done:
            info["success"] = success
            self._done = True
        return Transition(obs=obs, reward=reward, done=done, info=info)

    def _reward(self, norm: float, success: bool) -> float:
        # the numeric trace stays non-constant for any action source;
        # reward_structure is a spec-level statement consumed by classification
        wiggle = 0.05 * norm + 0.01 * (self._step_count % 7)
        if self.config.reward_structure == "sparse":
            return 1.0 if success else 0.0
        if self.config.reward_structure == "dense":
            progress = self._cumulative_norm / self.config.success_threshold if self.config.success_threshold else 0.0
            return wiggle + 0.5 * min(progress, 1.0)
        return wiggle


class _BasePolicy(Policy):
    def __init__(self, action_dim: int, horizon: int = 1):
        if action_dim < 1:
            raise ConfigInvalid(f"action_dim must be >= 1, got {action_dim}")
        if horizon < 1:
            raise ConfigInvalid(f"horizon must be >= 1, got {horizon}")
        self.action_dim = action_dim
        self.horizon = horizon

    def _wrap(self, array: np.ndarray) -> Action:
        return {"actions": TensorValue.from_numpy(array.astype(np.float32))}


class ZeroPolicy(_BasePolicy):
    def infer(self, obs: Observation) -> Action:
        shape = (self.horizon, self.action_dim) if self.horizon > 1 else (self.action_dim,)
        return self._wrap(np.zeros(shape, dtype=np.float32))


class RandomPolicy(_BasePolicy):
    def __init__(self, action_dim: int, horizon: int = 1, seed: int = 0):
        super().__init__(action_dim, horizon)
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def infer(self, obs: Observation) -> Action:
        shape = (self.horizon, self.action_dim) if self.horizon > 1 else (self.action_dim,)
        return self._wrap(self._rng.uniform(-1.0, 1.0, size=shape))

    def reset(self) -> None:
        self._rng = np.random.default_rng(self.seed)


class ScriptedSuccessPolicy(_BasePolicy):
    """Constant basis-vector action (1, 0, ..., 0): its L2 norm is exactly 1.0
    in both f32 and f64, so the cumulative norm after k steps is exactly k and
    success against a threshold-T mock happens at step ceil(T)."""

    def infer(self, obs: Observation) -> Action:
        row = np.zeros(self.action_dim, dtype=np.float32)
        row[0] = 1.0
        if self.horizon > 1:
            return self._wrap(np.tile(row, (self.horizon, 1)))
        return self._wrap(row)


class RaisingPolicy(_BasePolicy):
    def infer(self, obs: Observation) -> Action:
        raise RuntimeError("injected inference failure")


def mock_policy(kind: str, action_dim: int, horizon: int = 1, seed: int = 0) -> Policy:
    if kind == "zero":
        return ZeroPolicy(action_dim, horizon)
    if kind == "random":
        return RandomPolicy(action_dim, horizon, seed)
    if kind == "scripted-success":
        return ScriptedSuccessPolicy(action_dim, horizon)
    if kind == "raising":
        return RaisingPolicy(action_dim, horizon)
    raise ConfigInvalid(f"unknown policy kind {kind!r}; expected one of {POLICY_KINDS}")


def mock_policy_spec(action_dim: int = 7, horizon: int = 1, obs_schema: dict | None = None) -> PolicySpec:
    return PolicySpec(
        obs_schema=dict(obs_schema or DEFAULT_OBS_SCHEMA),
        action_dim=action_dim,
        action_horizon=horizon,
        control_mode="joint",
    )


def standard_mock_pair(action_dim: int = 7, episodes_threshold: float = 5.0, episode_length: int = 10):
    """A (policy, benchmark) pair where the scripted policy always succeeds:
    unit-norm steps against a threshold reachable inside the episode."""
    if episodes_threshold > episode_length:
        raise ConfigInvalid("threshold unreachable inside the episode")
    config = MockBenchmarkConfig(
        action_dim=action_dim,
        episode_length=episode_length,
        success_threshold=episodes_threshold,
    )
    return ScriptedSuccessPolicy(action_dim), MockBenchmark(config)


class MockRobot(Robot):
    """Kinematic echo: records applied actions, serves schema-conformant frames."""

    def __init__(self, obs_schema: dict[str, ArraySpec] | None = None, action_dim: int = 7, seed: int = 0):
        self.obs_schema = dict(obs_schema or DEFAULT_OBS_SCHEMA)
        self.action_dim = action_dim
        self.seed = seed
        self.applied: list[TensorValue] = []
        self._rng = np.random.default_rng(seed)
        self._stopped = False

    def spec(self) -> RobotSpec:
        return RobotSpec(obs_schema=dict(self.obs_schema), action_dim=self.action_dim)

    def reset(self) -> Observation:
        self._rng = np.random.default_rng(self.seed)
        self._stopped = False
        self.applied.clear()
        return self.get_observation()

    def get_observation(self) -> Observation:
        return {key: _draw_entry(self._rng, entry) for key, entry in self.obs_schema.items()}

    def apply_action(self, action: Action) -> None:
        if self._stopped:
            raise SafeStopActive("robot is safe-stopped; reset before applying actions")
        tensor = action_tensor(action)
        if tensor.shape[-1] != self.action_dim:
            raise ContractViolation(f"action dim {tensor.shape[-1]} != robot action_dim {self.action_dim}")
        self.applied.append(tensor)

    def safe_stop(self) -> None:
        # idempotent by design: the second call observes the stopped state and does nothing
        self._stopped = True


def benchmark_from_spec(spec: BenchmarkSpec, episode_length: int = 10, success_threshold: float = 0.0) -> MockBenchmark:
    """Materialize a mock behind a registry benchmark entry."""
    config = MockBenchmarkConfig(
        obs_schema=dict(spec.obs_schema),
        action_dim=spec.action_dim,
        control_mode=spec.control_mode,
        reward_structure=spec.reward_structure,
        episode_length=episode_length,
        success_threshold=success_threshold,
        gripper_sign=spec.gripper_sign,
        has_training_entrypoint=spec.has_training_entrypoint,
        success_criterion=spec.success_criterion,
        seed_protocol=spec.seed_protocol,
        task_count=spec.task_count,
    )
    return MockBenchmark(config)
