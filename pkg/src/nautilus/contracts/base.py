"""The three typed endpoint contracts and the values they exchange.

Observation is a string-keyed map of wire values (tensors, scalars, text).
Action is a map whose "actions" key holds a TensorValue of shape (act_dim,)
or (H, act_dim). Any Policy implementation — local mock, chunk-brokered, or
a remote session handle — is interchangeable in the rollout loop.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, field
from typing import Any

from ..wire import TensorValue

Observation = dict[str, Any]
Action = dict[str, Any]


class ContractViolation(RuntimeError):
    """A caller broke a contract precondition (step before reset, ...)."""


class SafeStopActive(ContractViolation):
    """apply_action was called after safe_stop and before reset."""


@dataclass
class Transition:
    """One step result; info carries the success flag when the episode ends."""

    obs: Observation
    reward: float
    done: bool
    info: dict = field(default_factory=dict)


class Policy(abc.ABC):
    """infer(obs) -> action; reset() is optional and defaults to a no-op."""

    @abc.abstractmethod
    def infer(self, obs: Observation) -> Action: ...

    def reset(self) -> None:
        return None


class Benchmark(abc.ABC):
    """Deterministically seeded episodic environment."""

    @abc.abstractmethod
    def reset(self, seed: int) -> Observation: ...

    @abc.abstractmethod
    def step(self, action: Action) -> Transition: ...


class Robot(abc.ABC):
    """Streamed robot endpoint; safe_stop is callable from any state, twice."""

    @abc.abstractmethod
    def reset(self) -> Observation: ...

    @abc.abstractmethod
    def get_observation(self) -> Observation: ...

    @abc.abstractmethod
    def apply_action(self, action: Action) -> None: ...

    @abc.abstractmethod
    def safe_stop(self) -> None: ...


def action_tensor(action: Action) -> TensorValue:
    """Extract and validate the mandatory "actions" tensor."""
    if not isinstance(action, dict) or "actions" not in action:
        raise ContractViolation('action map is missing the "actions" key')
    tensor = action["actions"]
    if not isinstance(tensor, TensorValue):
        raise ContractViolation(f'"actions" must be a TensorValue, got {type(tensor).__name__}')
    if len(tensor.shape) not in (1, 2):
        raise ContractViolation(f"action tensor rank must be 1 or 2, got shape {tensor.shape}")
    return tensor


def validate_observation(obs_schema, obs: Observation, exact_keys: bool = True) -> None:
    """Check an observation against an ArraySpec schema.

    Every schema key must be present with the declared dtype and shape;
    with exact_keys, extra keys are violations too. Raises
    ContractViolation naming the first offending key.
    """
    if not isinstance(obs, dict):
        raise ContractViolation(f"observation must be a map, got {type(obs).__name__}")
    for key, spec in obs_schema.items():
        if key not in obs:
            raise ContractViolation(f"observation is missing key {key!r}")
        value = obs[key]
        if not isinstance(value, TensorValue):
            raise ContractViolation(f"observation[{key!r}] must be a TensorValue, got {type(value).__name__}")
        if value.dtype != spec.dtype:
            raise ContractViolation(
                f"observation[{key!r}] dtype {value.dtype} does not match declared {spec.dtype}"
            )
        if tuple(value.shape) != tuple(spec.shape):
            raise ContractViolation(
                f"observation[{key!r}] shape {tuple(value.shape)} does not match declared {tuple(spec.shape)}"
            )
    if exact_keys:
        extras = sorted(set(obs) - set(obs_schema))
        if extras:
            raise ContractViolation(f"observation carries undeclared keys: {', '.join(extras)}")


def make_action(vector, dtype: str = "f32") -> Action:
    """Build an Action from a numpy array or nested list."""
    import numpy as np

    np_dtype = {"f32": np.float32, "f64": np.float64}[dtype]
    array = np.asarray(vector, dtype=np_dtype)
    return {"actions": TensorValue.from_numpy(array)}
