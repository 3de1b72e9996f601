"""Compile an AdapterPlan into runtime observation/action transforms.

The transforms are pure functions over wire values. The observation
transform runs inside the policy server's infer path: rename keys,
pad rank-1 tensors with trailing zeros, convert u8 HWC images to f32
CHW in [0,1] (optionally mean/std-normalized per PolicySpec), then
project away env keys the policy never asked for. The action
transform trims policy actions down to the env's dimensionality.
Chunked inference is not handled here; callers mount an
ActionChunkBroker using plan.chunk_params().

All image arithmetic stays in float32; scaling divides by
float32(255) so results are bit-identical to a per-pixel float32
computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..contracts.base import Action, ContractViolation, Observation, validate_observation
from ..contracts.specs import BenchmarkSpec, PolicySpec, RobotSpec
from ..wire import TensorValue
from .plan import AdapterPlan


class PlanSpecMismatch(ValueError):
    """The plan references keys or sizes the given specs do not have."""


@dataclass(frozen=True)
class AdapterPair:
    obs_transform: Callable[[Observation], Observation]
    action_transform: Callable[[Action], Action]
    plan: AdapterPlan


def _as_tensor(key: str, value) -> TensorValue:
    if not isinstance(value, TensorValue):
        raise ContractViolation(f"observation[{key!r}] must be a TensorValue, got {type(value).__name__}")
    return value


def _preprocess_image(
    tensor: TensorValue,
    mean: tuple[float, ...] | None,
    std: tuple[float, ...] | None,
) -> TensorValue:
    array = tensor.to_numpy()
    if array.ndim != 3 or array.shape[2] != 3 or array.dtype != np.uint8:
        raise ContractViolation(f"image_preprocess needs a u8 HWC image, got {array.dtype} {array.shape}")
    chw = np.transpose(array, (2, 0, 1)).astype(np.float32)
    scaled = chw / np.float32(255.0)
    if mean is not None:
        mean_arr = np.asarray(mean, dtype=np.float32).reshape(3, 1, 1)
        std_arr = np.asarray(std, dtype=np.float32).reshape(3, 1, 1)
        scaled = (scaled - mean_arr) / std_arr
    return TensorValue.from_numpy(np.ascontiguousarray(scaled))


def _pad_vector(tensor: TensorValue, target: int) -> TensorValue:
    array = tensor.to_numpy()
    if array.ndim != 1:
        raise ContractViolation(f"dim_pad needs a rank-1 tensor, got shape {array.shape}")
    if array.shape[0] > target:
        raise ContractViolation(f"dim_pad target {target} smaller than input {array.shape[0]}")
    padded = np.zeros(target, dtype=array.dtype)
    padded[: array.shape[0]] = array
    return TensorValue.from_numpy(padded)


def compile_adapter(
    plan: AdapterPlan,
    policy: PolicySpec,
    env: BenchmarkSpec | RobotSpec,
) -> AdapterPair:
    """Build the (obs, action) transform pair for a compiled plan."""
    renames: dict[str, str] = {}
    pads: dict[str, int] = {}
    images: list[str] = []
    keep: int | None = None

    for app in plan:
        if app.rule == "key_rename":
            src, dst = app.arg("from"), app.arg("to")
            if dst not in policy.obs_schema:
                raise PlanSpecMismatch(f"rename target {dst!r} not in the policy schema")
            if src not in env.obs_schema:
                raise PlanSpecMismatch(f"rename source {src!r} not in the env schema")
            renames[src] = dst
        elif app.rule == "dim_pad":
            key, target = app.arg("key"), int(app.arg("target"))
            if key not in policy.obs_schema:
                raise PlanSpecMismatch(f"dim_pad key {key!r} not in the policy schema")
            if tuple(policy.obs_schema[key].shape) != (target,):
                raise PlanSpecMismatch(
                    f"dim_pad target {target} does not match the policy shape for {key!r}"
                )
            pads[key] = target
        elif app.rule == "image_preprocess":
            key = app.arg("key")
            if key not in policy.obs_schema:
                raise PlanSpecMismatch(f"image_preprocess key {key!r} not in the policy schema")
            images.append(key)
        elif app.rule == "dim_slice":
            keep = int(app.arg("keep"))
            if keep != env.action_dim:
                raise PlanSpecMismatch(f"dim_slice keep {keep} does not match env action_dim {env.action_dim}")
            if keep >= policy.action_dim:
                raise PlanSpecMismatch(
                    f"dim_slice keep {keep} must be below policy action_dim {policy.action_dim}"
                )
        # chunk_split is consumed by the broker, not by the transforms

    policy_keys = set(policy.obs_schema)

    def obs_transform(obs: Observation) -> Observation:
        out: Observation = {}
        for key, value in obs.items():
            target_key = renames.get(key, key)
            if target_key not in policy_keys:
                continue  # env extras are projected away
            out[target_key] = value
        missing = sorted(policy_keys - set(out))
        if missing:
            raise ContractViolation(f"observation lacks sources for policy keys: {', '.join(missing)}")
        for key, target in pads.items():
            out[key] = _pad_vector(_as_tensor(key, out[key]), target)
        for key in images:
            out[key] = _preprocess_image(_as_tensor(key, out[key]), policy.image_mean, policy.image_std)
        validate_observation(policy.obs_schema, out)
        return out

    def action_transform(action: Action) -> Action:
        if keep is None:
            return action
        tensor = action.get("actions")
        if not isinstance(tensor, TensorValue):
            raise ContractViolation('action map is missing the "actions" tensor')
        array = tensor.to_numpy()
        sliced = np.ascontiguousarray(array[..., :keep])
        out = dict(action)
        out["actions"] = TensorValue.from_numpy(sliced)
        return out

    return AdapterPair(obs_transform=obs_transform, action_transform=action_transform, plan=plan)
