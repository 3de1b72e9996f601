"""Machine-readable contract specs stored in the registry.

These are the registry-side descriptions of endpoints: observation schema,
action dimensionality, control mode, and (for benchmarks) reward structure
and evaluation criteria. The compatibility gate reasons over these alone,
never over a live endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..wire import DTYPES

CONTROL_MODES = ("joint", "eef", "base", "mixed")
REWARD_STRUCTURES = ("dense", "sparse", "none")


class SpecError(ValueError):
    """A contract spec violates its own invariants."""


@dataclass(frozen=True)
class ArraySpec:
    """dtype + shape of one observation entry."""

    dtype: str
    shape: tuple[int, ...]

    def __post_init__(self):
        if self.dtype not in DTYPES:
            raise SpecError(f"unknown dtype {self.dtype!r}")
        object.__setattr__(self, "shape", tuple(int(d) for d in self.shape))
        if any(d < 0 for d in self.shape):
            raise SpecError(f"negative dimension in shape {self.shape}")

    def to_dict(self) -> dict:
        return {"dtype": self.dtype, "shape": list(self.shape)}

    @classmethod
    def from_dict(cls, doc: dict) -> "ArraySpec":
        return cls(dtype=doc["dtype"], shape=tuple(doc["shape"]))


def _check_common(obs_schema: dict, action_dim: int, control_mode: str) -> None:
    if not obs_schema:
        raise SpecError("obs_schema must not be empty")
    for key, entry in obs_schema.items():
        if not isinstance(key, str) or not key:
            raise SpecError(f"obs_schema key {key!r} must be a non-empty string")
        if not isinstance(entry, ArraySpec):
            raise SpecError(f"obs_schema[{key!r}] must be an ArraySpec")
    if action_dim < 1:
        raise SpecError(f"action_dim must be >= 1, got {action_dim}")
    if control_mode not in CONTROL_MODES:
        raise SpecError(f"control_mode {control_mode!r} not in {CONTROL_MODES}")


def _schema_to_dict(obs_schema: dict[str, ArraySpec]) -> dict:
    return {key: entry.to_dict() for key, entry in obs_schema.items()}


def _schema_from_dict(doc: dict) -> dict[str, ArraySpec]:
    return {key: ArraySpec.from_dict(entry) for key, entry in doc.items()}


@dataclass(frozen=True)
class PolicySpec:
    obs_schema: dict[str, ArraySpec]
    action_dim: int
    action_horizon: int = 1
    control_mode: str = "joint"
    checkpoint_urls: tuple[str, ...] = ()
    # optional per-channel normalization applied by image_preprocess when present
    image_mean: tuple[float, ...] | None = None
    image_std: tuple[float, ...] | None = None

    def __post_init__(self):
        _check_common(self.obs_schema, self.action_dim, self.control_mode)
        if self.action_horizon < 1:
            raise SpecError(f"action_horizon must be >= 1, got {self.action_horizon}")
        if (self.image_mean is None) != (self.image_std is None):
            raise SpecError("image_mean and image_std must be given together")

    def to_dict(self) -> dict:
        doc = {
            "obs_schema": _schema_to_dict(self.obs_schema),
            "action_dim": self.action_dim,
            "action_horizon": self.action_horizon,
            "control_mode": self.control_mode,
            "checkpoint_urls": list(self.checkpoint_urls),
        }
        if self.image_mean is not None:
            doc["image_mean"] = list(self.image_mean)
            doc["image_std"] = list(self.image_std)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "PolicySpec":
        return cls(
            obs_schema=_schema_from_dict(doc["obs_schema"]),
            action_dim=int(doc["action_dim"]),
            action_horizon=int(doc.get("action_horizon", 1)),
            control_mode=doc.get("control_mode", "joint"),
            checkpoint_urls=tuple(doc.get("checkpoint_urls", ())),
            image_mean=tuple(doc["image_mean"]) if "image_mean" in doc else None,
            image_std=tuple(doc["image_std"]) if "image_std" in doc else None,
        )


@dataclass(frozen=True)
class BenchmarkSpec:
    obs_schema: dict[str, ArraySpec]
    action_dim: int
    control_mode: str = "joint"
    gripper_sign: int = 1
    reward_structure: str = "none"
    has_training_entrypoint: bool = False
    success_criterion: str = ""
    seed_protocol: str = ""
    task_count: int = 1

    def __post_init__(self):
        _check_common(self.obs_schema, self.action_dim, self.control_mode)
        if self.gripper_sign not in (1, -1):
            raise SpecError(f"gripper_sign must be +1 or -1, got {self.gripper_sign}")
        if self.reward_structure not in REWARD_STRUCTURES:
            raise SpecError(f"reward_structure {self.reward_structure!r} not in {REWARD_STRUCTURES}")
        if self.task_count < 0:
            raise SpecError(f"task_count must be >= 0, got {self.task_count}")

    def to_dict(self) -> dict:
        return {
            "obs_schema": _schema_to_dict(self.obs_schema),
            "action_dim": self.action_dim,
            "control_mode": self.control_mode,
            "gripper_sign": self.gripper_sign,
            "reward_structure": self.reward_structure,
            "has_training_entrypoint": self.has_training_entrypoint,
            "success_criterion": self.success_criterion,
            "seed_protocol": self.seed_protocol,
            "task_count": self.task_count,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchmarkSpec":
        return cls(
            obs_schema=_schema_from_dict(doc["obs_schema"]),
            action_dim=int(doc["action_dim"]),
            control_mode=doc.get("control_mode", "joint"),
            gripper_sign=int(doc.get("gripper_sign", 1)),
            reward_structure=doc.get("reward_structure", "none"),
            has_training_entrypoint=bool(doc.get("has_training_entrypoint", False)),
            success_criterion=doc.get("success_criterion", ""),
            seed_protocol=doc.get("seed_protocol", ""),
            task_count=int(doc.get("task_count", 1)),
        )


@dataclass(frozen=True)
class RobotSpec:
    obs_schema: dict[str, ArraySpec]
    action_dim: int
    control_mode: str = "joint"
    loop_hz: float = 10.0

    def __post_init__(self):
        _check_common(self.obs_schema, self.action_dim, self.control_mode)
        if not (self.loop_hz > 0):
            raise SpecError(f"loop_hz must be positive, got {self.loop_hz}")

    def to_dict(self) -> dict:
        return {
            "obs_schema": _schema_to_dict(self.obs_schema),
            "action_dim": self.action_dim,
            "control_mode": self.control_mode,
            "loop_hz": self.loop_hz,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RobotSpec":
        return cls(
            obs_schema=_schema_from_dict(doc["obs_schema"]),
            action_dim=int(doc["action_dim"]),
            control_mode=doc.get("control_mode", "joint"),
            loop_hz=float(doc.get("loop_hz", 10.0)),
        )


def spec_from_dict(kind: str, doc: dict):
    """Parse a spec document for a registry entry of the given kind."""
    parser = {"policy": PolicySpec, "benchmark": BenchmarkSpec, "robot": RobotSpec}.get(kind)
    if parser is None:
        raise SpecError(f"unknown entry kind {kind!r}")
    return parser.from_dict(doc)
