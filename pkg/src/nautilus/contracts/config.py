"""Text config loader for mock endpoints.

Format: INI-style key=value with nested sections via dotted names.

    [benchmark]
    action_dim = 7
    episode_length = 10
    reward_structure = none
    success_threshold = 5.0

    [benchmark.obs]
    agentview_rgb = u8 [64,64,3]
    state = f32 [7]

    [policy]
    kind = scripted-success
    action_dim = 7
    horizon = 1

Observation entries use "<dtype> [d0,d1,...]"; "[]" declares a scalar.
"""

from __future__ import annotations

import configparser
import re
from pathlib import Path

from .mocks import ConfigInvalid, MockBenchmarkConfig, mock_policy
from .specs import ArraySpec

_ENTRY_RE = re.compile(r"^\s*(?P<dtype>[a-z0-9]+)\s*\[(?P<dims>[0-9,\s]*)\]\s*$")


def parse_array_spec(text: str) -> ArraySpec:
    match = _ENTRY_RE.match(text)
    if not match:
        raise ConfigInvalid(f"cannot parse obs entry {text!r}; expected '<dtype> [d0,d1,...]'")
    dims = tuple(int(part) for part in match.group("dims").split(",") if part.strip())
    try:
        return ArraySpec(dtype=match.group("dtype"), shape=dims)
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc


def _read(path: str | Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # observation keys are case-sensitive
    read = parser.read(str(path))
    if not read:
        raise ConfigInvalid(f"config file {path} not found or unreadable")
    return parser


def load_benchmark_config(path: str | Path) -> MockBenchmarkConfig:
    parser = _read(path)
    if "benchmark" not in parser:
        raise ConfigInvalid(f"{path} has no [benchmark] section")
    section = parser["benchmark"]
    obs_schema = None
    if "benchmark.obs" in parser:
        obs_schema = {key: parse_array_spec(value) for key, value in parser["benchmark.obs"].items()}
    kwargs: dict = {}
    if obs_schema is not None:
        kwargs["obs_schema"] = obs_schema
    for key, cast in [
        ("action_dim", int),
        ("episode_length", int),
        ("task_count", int),
        ("gripper_sign", int),
        ("success_threshold", float),
        ("control_mode", str),
        ("reward_structure", str),
        ("success_criterion", str),
        ("seed_protocol", str),
    ]:
        if key in section:
            kwargs[key] = cast(section[key])
    if "has_training_entrypoint" in section:
        kwargs["has_training_entrypoint"] = section.getboolean("has_training_entrypoint")
    try:
        return MockBenchmarkConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"invalid [benchmark] config in {path}: {exc}") from exc


def load_policy(path: str | Path):
    parser = _read(path)
    if "policy" not in parser:
        raise ConfigInvalid(f"{path} has no [policy] section")
    section = parser["policy"]
    kind = section.get("kind", "zero")
    action_dim = section.getint("action_dim", 7)
    horizon = section.getint("horizon", 1)
    seed = section.getint("seed", 0)
    return mock_policy(kind, action_dim, horizon=horizon, seed=seed)
