"""Verified-entry registry: storage, curation, fuzzy lookup, query service."""

from .curation import submit, verify
from .demo import seed_demo_registry
from .lookup import TIERS, lookup, normalize, url_basename
from .model import (
    ENTRY_KINDS,
    ENTRY_STATUSES,
    Ambiguous,
    Collision,
    InsufficientEvidence,
    LookupFailed,
    LookupResult,
    MutationRejected,
    NotBenchmark,
    NotFound,
    PreflightFailed,
    RegistryEntry,
    RegistryError,
    SchemaViolation,
    validate_entry_doc,
)
from .service import (
    READ_VERBS,
    BadRequest,
    RegistryQueryServer,
    RegistryService,
    RegistryServiceClient,
)
from .store import RegistryStore

__all__ = [
    "Ambiguous",
    "BadRequest",
    "Collision",
    "ENTRY_KINDS",
    "ENTRY_STATUSES",
    "InsufficientEvidence",
    "LookupFailed",
    "LookupResult",
    "MutationRejected",
    "NotBenchmark",
    "NotFound",
    "PreflightFailed",
    "READ_VERBS",
    "RegistryEntry",
    "RegistryError",
    "RegistryQueryServer",
    "RegistryService",
    "RegistryServiceClient",
    "RegistryStore",
    "SchemaViolation",
    "TIERS",
    "lookup",
    "normalize",
    "seed_demo_registry",
    "submit",
    "url_basename",
    "validate_entry_doc",
    "verify",
]
