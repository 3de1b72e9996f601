"""Sentinel-guarded idempotent file injection.

Every injected block is wrapped in OPEN/CLOSE sentinel lines keyed by a
tag; applying a block whose OPEN sentinel already exists returns the
input unchanged, which is what makes re-running an injection step safe.
Placement is append-at-end by default, or directly after one of the
named anchor comment lines baked into base templates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

TAG_RE = re.compile(r"^[a-z0-9-]+$")

ANCHORS = ("INSTALL-DEPS", "SYSTEM-PACKAGES", "ENV-SETUP", "ENTRYPOINT")


class AnchorNotFound(ValueError):
    """The requested anchor line is absent; the file was not modified."""

    def __init__(self, anchor: str):
        super().__init__(f"anchor {anchor!r} not found")
        self.anchor = anchor


def open_line(tag: str) -> str:
    return f"# --- NAUTILUS OPEN: {tag} ---"


def close_line(tag: str) -> str:
    return f"# --- NAUTILUS CLOSE: {tag} ---"


def anchor_line(name: str) -> str:
    return f"# --- NAUTILUS ANCHOR: {name} ---"


@dataclass(frozen=True)
class SentinelBlock:
    tag: str
    content: str

    def __post_init__(self):
        if not TAG_RE.fullmatch(self.tag):
            raise ValueError(f"tag must match [a-z0-9-]+, got {self.tag!r}")

    def render(self) -> str:
        """Exactly: OPEN line, content lines, CLOSE line."""
        body = self.content
        if body and not body.endswith("\n"):
            body += "\n"
        return f"{open_line(self.tag)}\n{body}{close_line(self.tag)}\n"


def apply_sentinel_block(text: str, block: SentinelBlock, anchor: str | None = None) -> str:
    """Insert the block once; a present OPEN sentinel makes this a no-op.

    anchor=None appends at end of file; otherwise the block goes directly
    after the exact anchor comment line, and a missing anchor raises
    AnchorNotFound without touching the text.
    """
    sentinel = open_line(block.tag)
    lines = text.split("\n")
    if sentinel in lines:
        return text

    rendered = block.render()
    if anchor is None:
        if text and not text.endswith("\n"):
            return text + "\n" + rendered
        return text + rendered

    target = anchor_line(anchor)
    if target not in lines:
        raise AnchorNotFound(anchor)
    index = lines.index(target)
    # insert right after the anchor line, preserving everything else byte-for-byte
    before = "\n".join(lines[: index + 1])
    after = "\n".join(lines[index + 1 :])
    return f"{before}\n{rendered}{after}"


def has_block(text: str, tag: str) -> bool:
    return open_line(tag) in text.split("\n")
