"""Render-time audit for generated compose and container files.

Two leak classes, checked before a rendered file hits the workspace:

  private_registry_url            a denylisted registry host anywhere in
                                  the text (the user cannot pull from it)
  verified_image_in_scratch_path  a verified image reference inside the
                                  from-scratch build path, which must stay
                                  rebuildable without any prebuilt image

The from-scratch path is detected structurally: the indented block under a
'build:' mapping key (plus an inline 'build: ...' value), and Dockerfile
'FROM' lines. Image references in pull-path 'image:' lines are exactly what
verified images are for and are not findings.

Locations are exact: 1-based line and column of the match start. All
functions are pure; denylists are plain tuples of host patterns, where a
leading '*.' matches any subdomain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

FINDING_KINDS = ("private_registry_url", "verified_image_in_scratch_path")

_HOST_CHARS = r"[\w.-]"
_BUILD_KEY_RE = re.compile(r"^(\s*)(-\s+)?build\s*:\s*(.*)$")
_FROM_RE = re.compile(r"^\s*FROM\s+\S")


@dataclass(frozen=True)
class AuditFinding:
    line: int  # 1-based
    column: int  # 1-based
    kind: str
    snippet: str

    def __post_init__(self):
        if self.kind not in FINDING_KINDS:
            raise ValueError(f"unknown finding kind {self.kind!r}")
        if self.line < 1 or self.column < 1:
            raise ValueError("finding locations are 1-based line/column")

    def to_dict(self) -> dict:
        return {"line": self.line, "column": self.column, "kind": self.kind, "snippet": self.snippet}


def parse_host_denylist(text: str) -> tuple[str, ...]:
    """One host pattern per line; '#' lines are comments."""
    hosts = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            hosts.append(line)
    return tuple(hosts)


def load_host_denylist(path: str | Path) -> tuple[str, ...]:
    return parse_host_denylist(Path(path).read_text("utf-8"))


def _host_regex(pattern: str) -> re.Pattern:
    if pattern.startswith("*."):
        suffix = re.escape(pattern[2:])
        body = rf"[\w][\w-]*(?:\.[\w][\w-]*)*\.{suffix}"
    else:
        body = re.escape(pattern)
    return re.compile(rf"(?<!{_HOST_CHARS}){body}(?!{_HOST_CHARS})")


def _scratch_lines(lines: list[str]) -> set[int]:
    """0-based indices of lines on the from-scratch build path."""
    scratch: set[int] = set()
    block_indent: int | None = None
    for index, line in enumerate(lines):
        stripped = line.strip()
        if block_indent is not None:
            if stripped and (len(line) - len(line.lstrip())) <= block_indent:
                block_indent = None  # dedent closed the build block
            else:
                if stripped:
                    scratch.add(index)
                continue
        match = _BUILD_KEY_RE.match(line)
        if match:
            if match.group(3):  # inline form: build: ./dir
                scratch.add(index)
            else:
                block_indent = len(match.group(1)) + (len(match.group(2) or ""))
            continue
        if _FROM_RE.match(line):
            scratch.add(index)
    return scratch


def _image_keys(verified_images) -> tuple[str, ...]:
    keys: list[str] = []
    for reference in verified_images:
        reference = str(reference).strip()
        if not reference:
            continue
        keys.append(reference)
        if "@" in reference:
            digest = reference.rsplit("@", 1)[1]
            if digest:
                keys.append(digest)
    # longest first so an overlapping shorter key never shadows the full match
    return tuple(sorted(set(keys), key=len, reverse=True))


def render_audit(
    rendered_text: str,
    denylist: tuple[str, ...] = (),
    verified_images: tuple[str, ...] = (),
) -> list[AuditFinding]:
    """Every leak occurrence, in document order; an empty list means clean."""
    lines = rendered_text.splitlines()
    findings: list[AuditFinding] = []

    host_patterns = [_host_regex(host) for host in denylist]
    for index, line in enumerate(lines):
        for pattern in host_patterns:
            for match in pattern.finditer(line):
                findings.append(
                    AuditFinding(
                        line=index + 1,
                        column=match.start() + 1,
                        kind="private_registry_url",
                        snippet=match.group(0),
                    )
                )

    keys = _image_keys(verified_images)
    if keys:
        scratch = _scratch_lines(lines)
        for index in sorted(scratch):
            line = lines[index]
            taken: list[tuple[int, int]] = []
            for key in keys:
                start = 0
                while True:
                    found = line.find(key, start)
                    if found < 0:
                        break
                    span = (found, found + len(key))
                    if not any(a < span[1] and span[0] < b for a, b in taken):
                        taken.append(span)
                        findings.append(
                            AuditFinding(
                                line=index + 1,
                                column=found + 1,
                                kind="verified_image_in_scratch_path",
                                snippet=key,
                            )
                        )
                    start = found + 1
    findings.sort(key=lambda f: (f.line, f.column, FINDING_KINDS.index(f.kind)))
    return findings
