"""Single-fault benchmark fixtures.

Each fixture wraps the healthy mock and violates exactly one smoke-ladder
criterion, at exactly one tier and no earlier one:

  raise_on_reset   -> first reset raises                (trips the reset check)
  wrong_obs_shape  -> declared [64,64,3], emits [32,32,3] (trips the shape check)
  constant_reward  -> every reward is exactly 0.0       (trips the non-constant check)
  nan_reward       -> reward becomes NaN at step 5      (trips the finiteness check)
"""

from __future__ import annotations

import math

from ..wire import TensorValue
from .base import Action, Benchmark, Observation, Transition
from .mocks import ConfigInvalid, MockBenchmark, MockBenchmarkConfig

FAULT_KINDS = ("constant_reward", "nan_reward", "wrong_obs_shape", "raise_on_reset")

# tier each fixture is designed to trip, used by the layering tests and the CLI demo
FAULT_DESIGNATED_TIER = {
    "raise_on_reset": "L1",
    "wrong_obs_shape": "L1",
    "constant_reward": "L2",
    "nan_reward": "L2",
}


class _FaultBenchmark(Benchmark):
    def __init__(self, config: MockBenchmarkConfig | None = None):
        self.inner = MockBenchmark(config)
        self.config = self.inner.config

    def spec(self):
        return self.inner.spec()

    def reset(self, seed: int) -> Observation:
        return self.inner.reset(seed)

    def step(self, action: Action) -> Transition:
        return self.inner.step(action)


class ConstantRewardBenchmark(_FaultBenchmark):
    def step(self, action: Action) -> Transition:
        transition = self.inner.step(action)
        transition.reward = 0.0
        return transition


class NanRewardBenchmark(_FaultBenchmark):
    NAN_AT_STEP = 5

    def step(self, action: Action) -> Transition:
        transition = self.inner.step(action)
        if transition.info.get("step", 0) >= self.NAN_AT_STEP:
            transition.reward = math.nan
        return transition


class WrongObsShapeBenchmark(_FaultBenchmark):
    """spec() still declares the configured shapes; emitted tensors are halved."""

    def _shrink(self, obs: Observation) -> Observation:
        out = {}
        for key, value in obs.items():
            if isinstance(value, TensorValue) and len(value.shape) >= 2:
                array = value.to_numpy()
                halved = array[tuple(slice(0, max(1, dim // 2)) for dim in array.shape[:-1]) + (slice(None),)]
                out[key] = TensorValue.from_numpy(halved)
            else:
                out[key] = value
        return out

    def reset(self, seed: int) -> Observation:
        return self._shrink(self.inner.reset(seed))

    def step(self, action: Action) -> Transition:
        transition = self.inner.step(action)
        transition.obs = self._shrink(transition.obs)
        return transition


class RaiseOnResetBenchmark(_FaultBenchmark):
    def reset(self, seed: int) -> Observation:
        raise RuntimeError("injected reset failure")


def fault_benchmark(fault: str, config: MockBenchmarkConfig | None = None) -> Benchmark:
    table = {
        "constant_reward": ConstantRewardBenchmark,
        "nan_reward": NanRewardBenchmark,
        "wrong_obs_shape": WrongObsShapeBenchmark,
        "raise_on_reset": RaiseOnResetBenchmark,
    }
    if fault not in table:
        raise ConfigInvalid(f"unknown fault {fault!r}; expected one of {FAULT_KINDS}")
    return table[fault](config)
