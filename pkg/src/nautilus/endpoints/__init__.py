"""Materialize runnable endpoints from registry entries.

Only mock:// sources can be materialized in this install; real source URLs
name code that would have to be cloned and containerized, which is out of
scope here, so they raise UnsupportedSource with the scheme spelled out.

mock:// URLs carry their configuration as query parameters:

    mock://benchmarks/<name>?episode_length=10&success_threshold=5
    mock://policies/<name>?kind=random&seed=7
"""

from urllib.parse import parse_qs, urlsplit

from ..contracts.base import Benchmark, Policy
from ..contracts.mocks import benchmark_from_spec, mock_policy
from ..contracts.specs import BenchmarkSpec, PolicySpec
from ..registry.model import RegistryEntry

__all__ = [
    "UnsupportedSource",
    "parse_mock_url",
    "benchmark_from_entry",
    "policy_from_entry",
    "policy_server_args",
]


class UnsupportedSource(RuntimeError):
    """The entry's source URL cannot be turned into a live endpoint here."""

    def __init__(self, url: str, detail: str):
        super().__init__(f"cannot materialize {url!r}: {detail}")
        self.url = url
        self.detail = detail


def parse_mock_url(url: str) -> tuple[str, str, dict[str, str]]:
    """Split a mock:// URL into (category, name, params).

    Repeated query keys keep the last value. kind values normalize
    underscores to hyphens so stored URLs match the mock policy names.
    """
    parts = urlsplit(url)
    if parts.scheme != "mock":
        raise UnsupportedSource(url, f"scheme {parts.scheme!r} is not runnable in this install (only mock://)")
    category = parts.netloc
    name = parts.path.strip("/")
    params = {key: values[-1] for key, values in parse_qs(parts.query).items()}
    if "kind" in params:
        params["kind"] = params["kind"].replace("_", "-")
    return category, name, params


def benchmark_from_entry(entry: RegistryEntry) -> Benchmark:
    """Build the in-process mock benchmark a registry entry points at."""
    if entry.kind != "benchmark" or not isinstance(entry.spec, BenchmarkSpec):
        raise UnsupportedSource(entry.source_url, f"entry {entry.name!r} is a {entry.kind}, not a benchmark")
    category, _, params = parse_mock_url(entry.source_url)
    if category != "benchmarks":
        raise UnsupportedSource(entry.source_url, f"mock category {category!r} does not hold benchmarks")
    return benchmark_from_spec(
        entry.spec,
        episode_length=int(params.get("episode_length", 10)),
        success_threshold=float(params.get("success_threshold", 0.0)),
    )


def _policy_params(entry: RegistryEntry) -> tuple[PolicySpec, dict[str, str]]:
    if entry.kind != "policy" or not isinstance(entry.spec, PolicySpec):
        raise UnsupportedSource(entry.source_url, f"entry {entry.name!r} is a {entry.kind}, not a policy")
    category, _, params = parse_mock_url(entry.source_url)
    if category != "policies":
        raise UnsupportedSource(entry.source_url, f"mock category {category!r} does not hold policies")
    return entry.spec, params


def policy_from_entry(entry: RegistryEntry) -> Policy:
    """Build the in-process mock policy a registry entry points at."""
    spec, params = _policy_params(entry)
    return mock_policy(
        params.get("kind", "random"),
        action_dim=spec.action_dim,
        horizon=spec.action_horizon,
        seed=int(params.get("seed", 0)),
    )


def policy_server_args(entry: RegistryEntry) -> list[str]:
    """Command-line args that make `python -m nautilus.endpoints.policy_server`
    serve the same policy that policy_from_entry builds in process."""
    spec, params = _policy_params(entry)
    return [
        "--action-dim", str(spec.action_dim),
        "--horizon", str(spec.action_horizon),
        "--kind", params.get("kind", "random"),
        "--seed", params.get("seed", "0"),
        "--name", entry.name,
    ]
