"""Write-side curation: submission preflights and verification.

Submissions enter as plain documents, are schema-checked, and must
clear preflights (clean worktree, no name or URL collision) before the
store is touched. New entries always land unverified; the verified
status is only ever granted by verify(), which demands a benchmark
entry, a pinned image digest, and cross-run evidence whose
recommendation is "verify". Failed verification records the evidence
and leaves the entry unverified; nothing is rolled back.
"""

from __future__ import annotations

from ..sensors.crossrun import CrossRunReport
from .model import (
    Collision,
    InsufficientEvidence,
    NotBenchmark,
    PreflightFailed,
    RegistryEntry,
    SchemaViolation,
    validate_entry_doc,
)
from .store import RegistryStore


def submit(store: RegistryStore, doc: dict, worktree_clean: bool = True) -> RegistryEntry:
    """Validate and insert a new unverified entry.

    Raises SchemaViolation, PreflightFailed, or Collision. The document
    may not claim verified status for itself.
    """
    entry = validate_entry_doc(doc)
    if entry.status != "unverified":
        raise SchemaViolation("status", "submissions must be unverified; run verification separately")
    if not worktree_clean:
        raise PreflightFailed("submission requires a clean source worktree")
    for existing in store.snapshot():
        if existing.name == entry.name:
            raise Collision("name", entry.name, existing.name)
        if existing.source_url == entry.source_url:
            raise Collision("url", entry.source_url, existing.name)
    store.add(entry)
    return entry


def verify(
    store: RegistryStore,
    name: str,
    evidence: CrossRunReport,
    image_digest: str | None = None,
    image_size_bytes: int | None = None,
) -> RegistryEntry:
    """Promote a benchmark entry to verified on sufficient evidence.

    The evidence report is recorded either way. Raises KeyError for an
    unknown name, NotBenchmark for non-benchmark entries, SchemaViolation
    when no image digest is available, and InsufficientEvidence when the
    report recommends against promotion.
    """
    entry = store.get(name)
    if entry is None:
        raise KeyError(name)
    if entry.kind != "benchmark":
        raise NotBenchmark(name, entry.kind)

    store.record_evidence(name, evidence.to_dict())

    digest = image_digest if image_digest is not None else entry.image_digest
    if not digest:
        raise SchemaViolation("image_digest", "verification requires a pinned image digest")
    if evidence.recommendation != "verify":
        raise InsufficientEvidence(name, evidence.in_band_count, evidence.k_required)

    updated = entry.with_status("verified", image_digest=digest, image_size_bytes=image_size_bytes)
    store.update(updated)
    return updated
