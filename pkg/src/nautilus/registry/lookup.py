"""Fuzzy lookup over registry snapshots.

Four tiers, applied in order; the first tier with any match decides:

  1. exact_name      query == entry.name
  2. exact_url       query == entry.source_url
  3. url_basename    query looks like a URL or path; its final path
                     component (".git" stripped, case-insensitive)
                     equals the entry name or the entry URL's basename
  4. normalized_key  normalize(query) == normalize(entry.name)

normalize() lowercases, removes every non-alphanumeric character, then
strips one trailing run of digits, so "ManiSkill3", "Mani-Skill" and
"maniskill" all share the key "maniskill". The matched tier travels
with the result so callers can prefer high-confidence hits. Tiers 3
and 4 may legitimately match several entries; that is reported as
Ambiguous rather than resolved silently. Tiers 1 and 2 cannot collide
because the store enforces unique names and URLs.
"""

from __future__ import annotations

import re

from .model import Ambiguous, LookupResult, NotFound, RegistryEntry

_NON_ALNUM = re.compile(r"[^a-z0-9]+")
_TRAILING_DIGITS = re.compile(r"[0-9]+$")

TIERS = ("exact_name", "exact_url", "url_basename", "normalized_key")


def normalize(text: str) -> str:
    """Aggressive key normalization. Idempotent; may return ""."""
    key = _NON_ALNUM.sub("", text.lower())
    return _TRAILING_DIGITS.sub("", key)


def url_basename(url: str) -> str:
    """Final path component, lowercased, with query/fragment parts and
    one ".git" suffix removed."""
    path = url.split("?", 1)[0].split("#", 1)[0]
    base = path.rstrip("/").rsplit("/", 1)[-1].lower()
    if base.endswith(".git"):
        base = base[: -len(".git")]
    return base


def _looks_like_url(query: str) -> bool:
    # Tier 3 is reserved for path-shaped queries; bare names fall
    # through to the normalized tier instead of shadowing it.
    return "/" in query


def lookup(
    entries: tuple[RegistryEntry, ...],
    query: str,
    kind: str | None = None,
) -> LookupResult:
    """Resolve a name or URL against the given snapshot.

    Raises NotFound (with near-misses by normalized key) or Ambiguous.
    """
    if not isinstance(query, str) or not query:
        raise NotFound(query=str(query))
    pool = tuple(e for e in entries if kind is None or e.kind == kind)

    for entry in pool:
        if entry.name == query:
            return LookupResult(entry=entry, tier="exact_name")

    for entry in pool:
        if entry.source_url == query:
            return LookupResult(entry=entry, tier="exact_url")

    if _looks_like_url(query):
        base = url_basename(query)
        if base:
            hits = tuple(
                e for e in pool if e.name.lower() == base or url_basename(e.source_url) == base
            )
            if len(hits) == 1:
                return LookupResult(entry=hits[0], tier="url_basename")
            if len(hits) > 1:
                raise Ambiguous(query, "url_basename", tuple(e.name for e in hits))

    key = normalize(query)
    if key:
        hits = tuple(e for e in pool if normalize(e.name) == key)
        if len(hits) == 1:
            return LookupResult(entry=hits[0], tier="normalized_key")
        if len(hits) > 1:
            raise Ambiguous(query, "normalized_key", tuple(e.name for e in hits))

    raise NotFound(query=query, near_misses=_near_misses(pool, query))


def _near_misses(pool: tuple[RegistryEntry, ...], query: str, limit: int = 5) -> tuple[str, ...]:
    """Entries whose normalized key contains (or is contained by) the query's."""
    key = normalize(query)
    if not key:
        return ()
    names = []
    for entry in pool:
        entry_key = normalize(entry.name)
        if entry_key and (key in entry_key or entry_key in key):
            names.append(entry.name)
    return tuple(sorted(names)[:limit])
