"""Command-line front end: eval, smoke, and registry verbs over the library."""

from . import exitcodes
from .environment import REGISTRY_DIR_VAR, WORKSPACE_DIR_VAR, registry_dir, workspace_dir
from .eval_cmd import (
    DEFAULT_EPISODES,
    DEFAULT_MAX_STEPS,
    EvalConfig,
    EvalOutcome,
    GateBlocked,
    latency_summary,
    run_eval,
)
from .main import build_parser, main
from .registry_cmd import open_store
from .smoke_cmd import run_smoke
from .supervise import (
    EndpointFailure,
    InProcessEndpoint,
    SubprocessEndpoint,
    wait_healthy,
)

__all__ = [
    "DEFAULT_EPISODES",
    "DEFAULT_MAX_STEPS",
    "EndpointFailure",
    "EvalConfig",
    "EvalOutcome",
    "GateBlocked",
    "InProcessEndpoint",
    "REGISTRY_DIR_VAR",
    "SubprocessEndpoint",
    "WORKSPACE_DIR_VAR",
    "build_parser",
    "exitcodes",
    "latency_summary",
    "main",
    "open_store",
    "registry_dir",
    "run_eval",
    "run_smoke",
    "wait_healthy",
    "workspace_dir",
]
