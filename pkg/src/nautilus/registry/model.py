"""Registry data model: entries, lookup results, and error taxonomy."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Any

from ..contracts.specs import BenchmarkSpec, PolicySpec, RobotSpec, SpecError, spec_from_dict

ENTRY_KINDS = ("policy", "benchmark", "robot")
ENTRY_STATUSES = ("unverified", "verified")

_COMMIT_RE = re.compile(r"^[0-9a-f]{40}$")


class RegistryError(Exception):
    """Base class for registry failures."""


class SchemaViolation(RegistryError):
    """An entry document failed validation; names the offending field."""

    def __init__(self, field_path: str, message: str):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}" if field_path else message)


class LookupFailed(RegistryError):
    """Base for query failures."""


class NotFound(LookupFailed):
    def __init__(self, query: str, near_misses: tuple[str, ...] = ()):
        self.query = query
        self.near_misses = near_misses
        hint = f" (near misses: {', '.join(near_misses)})" if near_misses else ""
        super().__init__(f"no entry matches {query!r}{hint}")


class Ambiguous(LookupFailed):
    def __init__(self, query: str, tier: str, names: tuple[str, ...]):
        self.query = query
        self.tier = tier
        self.names = names
        super().__init__(f"{query!r} matches several entries at tier {tier}: {', '.join(names)}")


class Collision(RegistryError):
    def __init__(self, what: str, value: str, existing: str):
        self.what = what  # "name" | "url"
        self.value = value
        self.existing = existing
        super().__init__(f"{what} collision: {value!r} already belongs to entry {existing!r}")


class PreflightFailed(RegistryError):
    pass


class NotBenchmark(RegistryError):
    def __init__(self, name: str, kind: str):
        self.name = name
        self.kind = kind
        super().__init__(f"{name!r} is a {kind}; only benchmarks can be verified")


class InsufficientEvidence(RegistryError):
    def __init__(self, name: str, in_band: int, k_required: int):
        self.name = name
        self.in_band = in_band
        self.k_required = k_required
        super().__init__(
            f"{name!r} stays unverified: {in_band} in-band reproduction(s), {k_required} required"
        )


class MutationRejected(RegistryError):
    def __init__(self, verb: str):
        self.verb = verb
        super().__init__(f"the query service is read-only; {verb!r} is not a read verb")


# Index fields, in serialization order. The spec document lives in a
# separate per-entry file so routine curation (status flips, size
# updates) never rewrites contract bytes, and vice versa.
_INDEX_FIELDS = (
    "name",
    "kind",
    "source_url",
    "commit",
    "image_digest",
    "image_size_bytes",
    "status",
    "quick_start",
)


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    kind: str
    source_url: str
    commit: str
    spec: PolicySpec | BenchmarkSpec | RobotSpec
    image_digest: str = ""
    image_size_bytes: int = 0
    status: str = "unverified"
    quick_start: tuple[str, ...] = ()

    def index_doc(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "source_url": self.source_url,
            "commit": self.commit,
            "image_digest": self.image_digest,
            "image_size_bytes": self.image_size_bytes,
            "status": self.status,
            "quick_start": list(self.quick_start),
        }

    def spec_doc(self) -> dict[str, Any]:
        return self.spec.to_dict()

    def to_dict(self) -> dict[str, Any]:
        doc = self.index_doc()
        doc["spec"] = self.spec_doc()
        return doc

    def with_status(self, status: str, image_digest: str | None = None, image_size_bytes: int | None = None):
        updated = replace(self, status=status)
        if image_digest is not None:
            updated = replace(updated, image_digest=image_digest)
        if image_size_bytes is not None:
            updated = replace(updated, image_size_bytes=image_size_bytes)
        return updated


@dataclass(frozen=True)
class LookupResult:
    entry: RegistryEntry
    tier: str  # "exact_name" | "exact_url" | "url_basename" | "normalized_key"

    def to_dict(self) -> dict[str, Any]:
        return {"tier": self.tier, "entry": self.entry.to_dict()}


def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise SchemaViolation(path, message)


def validate_entry_doc(doc: Any) -> RegistryEntry:
    """Validate a full entry document (index fields plus inline spec).

    Raises SchemaViolation naming the first offending field path.
    """
    _require(isinstance(doc, dict), "", f"entry must be a map, got {type(doc).__name__}")

    known = set(_INDEX_FIELDS) | {"spec"}
    for key in doc:
        _require(key in known, str(key), "unknown field")

    name = doc.get("name")
    _require(isinstance(name, str) and bool(name), "name", "must be a non-empty string")
    kind = doc.get("kind")
    _require(kind in ENTRY_KINDS, "kind", f"must be one of {ENTRY_KINDS}, got {kind!r}")
    source_url = doc.get("source_url")
    _require(isinstance(source_url, str) and bool(source_url), "source_url", "must be a non-empty string")
    commit = doc.get("commit")
    _require(
        isinstance(commit, str) and bool(_COMMIT_RE.match(commit or "")),
        "commit",
        "must be a 40-character lowercase hex string",
    )

    image_digest = doc.get("image_digest", "")
    _require(isinstance(image_digest, str), "image_digest", "must be a string")
    image_size_bytes = doc.get("image_size_bytes", 0)
    _require(
        isinstance(image_size_bytes, int) and not isinstance(image_size_bytes, bool) and image_size_bytes >= 0,
        "image_size_bytes",
        "must be a non-negative integer",
    )

    status = doc.get("status", "unverified")
    _require(status in ENTRY_STATUSES, "status", f"must be one of {ENTRY_STATUSES}, got {status!r}")
    if status == "verified":
        _require(kind == "benchmark", "status", "verified is reserved for benchmarks")
        _require(bool(image_digest), "status", "verified requires a non-empty image_digest")

    quick_start = doc.get("quick_start", [])
    _require(isinstance(quick_start, list), "quick_start", "must be a list of strings")
    for i, line in enumerate(quick_start):
        _require(isinstance(line, str), f"quick_start[{i}]", "must be a string")

    spec_doc = doc.get("spec")
    _require(isinstance(spec_doc, dict), "spec", "must be a map")
    try:
        spec = spec_from_dict(kind, spec_doc)
    except SpecError as exc:
        raise SchemaViolation("spec", str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation("spec", f"malformed contract: {exc}") from exc

    return RegistryEntry(
        name=name,
        kind=kind,
        source_url=source_url,
        commit=commit,
        spec=spec,
        image_digest=image_digest,
        image_size_bytes=image_size_bytes,
        status=status,
        quick_start=tuple(quick_start),
    )
