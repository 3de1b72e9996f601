"""Action-chunk broker: serve a predict-H policy to per-step clients.

The inner policy predicts a chunk of H action rows per query; the broker
returns one row per infer call and re-queries the inner policy after M rows
have been served, so over T calls without resets the inner policy runs
exactly ceil(T/M) times. reset() drops the cached chunk, which costs exactly
one extra inner call on the next infer.
"""

from __future__ import annotations

import numpy as np

from ..contracts.base import Action, Observation, Policy, action_tensor
from ..wire import TensorValue
from .frames import ShapeMismatch


class ActionChunkBroker(Policy):
    def __init__(self, inner: Policy, action_horizon: int, execute_steps: int | None = None):
        if action_horizon < 1:
            raise ValueError(f"action_horizon must be >= 1, got {action_horizon}")
        execute_steps = action_horizon if execute_steps is None else execute_steps
        if not (1 <= execute_steps <= action_horizon):
            raise ValueError(f"execute_steps must satisfy 1 <= M <= H, got M={execute_steps} H={action_horizon}")
        self.inner = inner
        self.action_horizon = action_horizon
        self.execute_steps = execute_steps
        self._chunk: np.ndarray | None = None
        self._extras: dict = {}
        self._cursor = 0

    def infer(self, obs: Observation) -> Action:
        if self._chunk is None or self._cursor >= self.execute_steps:
            self._fetch(obs)
        row = self._chunk[self._cursor]
        self._cursor += 1
        action = dict(self._extras)
        action["actions"] = TensorValue.from_numpy(row)
        return action

    def _fetch(self, obs: Observation) -> None:
        action = self.inner.infer(obs)
        tensor = action_tensor(action)
        array = tensor.to_numpy()
        if array.ndim == 1:
            if self.action_horizon != 1:
                raise ShapeMismatch(
                    f"inner policy returned a single row but the broker serves chunks of H={self.action_horizon}"
                )
            array = array[None, :]
        if array.shape[0] != self.action_horizon:
            raise ShapeMismatch(
                f"inner chunk horizon {array.shape[0]} != broker action_horizon {self.action_horizon}"
            )
        self._chunk = array
        self._extras = {key: value for key, value in action.items() if key != "actions"}
        self._cursor = 0

    def reset(self) -> None:
        self._chunk = None
        self._extras = {}
        self._cursor = 0
        self.inner.reset()
