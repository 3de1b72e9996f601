"""Typed endpoint contracts, registry-side specs, and deterministic mocks."""

from .base import (
    Action,
    Benchmark,
    ContractViolation,
    Observation,
    Policy,
    Robot,
    SafeStopActive,
    Transition,
    action_tensor,
    make_action,
    validate_observation,
)
from .config import load_benchmark_config, load_policy, parse_array_spec
from .faults import FAULT_DESIGNATED_TIER, FAULT_KINDS, fault_benchmark
from .mocks import (
    DEFAULT_OBS_SCHEMA,
    POLICY_KINDS,
    ConfigInvalid,
    MockBenchmark,
    MockBenchmarkConfig,
    MockRobot,
    RandomPolicy,
    RaisingPolicy,
    ScriptedSuccessPolicy,
    ZeroPolicy,
    benchmark_from_spec,
    draw_observation,
    mock_policy,
    mock_policy_spec,
    standard_mock_pair,
)
from .specs import (
    CONTROL_MODES,
    REWARD_STRUCTURES,
    ArraySpec,
    BenchmarkSpec,
    PolicySpec,
    RobotSpec,
    SpecError,
    spec_from_dict,
)

__all__ = [
    "Action",
    "ArraySpec",
    "Benchmark",
    "BenchmarkSpec",
    "CONTROL_MODES",
    "ConfigInvalid",
    "ContractViolation",
    "DEFAULT_OBS_SCHEMA",
    "FAULT_DESIGNATED_TIER",
    "FAULT_KINDS",
    "MockBenchmark",
    "MockBenchmarkConfig",
    "MockRobot",
    "Observation",
    "POLICY_KINDS",
    "Policy",
    "PolicySpec",
    "REWARD_STRUCTURES",
    "RandomPolicy",
    "RaisingPolicy",
    "Robot",
    "RobotSpec",
    "SafeStopActive",
    "ScriptedSuccessPolicy",
    "SpecError",
    "Transition",
    "ZeroPolicy",
    "action_tensor",
    "benchmark_from_spec",
    "draw_observation",
    "fault_benchmark",
    "load_benchmark_config",
    "load_policy",
    "make_action",
    "mock_policy",
    "mock_policy_spec",
    "parse_array_spec",
    "spec_from_dict",
    "standard_mock_pair",
    "validate_observation",
]
