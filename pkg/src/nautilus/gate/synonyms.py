"""Observation key synonym table seeding rename candidates.

The table is a set of unordered pairs: a rename is allowed in either
direction. Per-pair extensions come in through compare_specs so a
caller can widen the table for one gate decision without mutating
global state.
"""

from __future__ import annotations

from typing import Iterable

DEFAULT_SYNONYM_PAIRS: tuple[tuple[str, str], ...] = (
    ("agentview_rgb", "image"),
    ("robot0_eef_pos", "state"),
    ("front_rgb", "image"),
    ("wrist_rgb", "wrist_image"),
    ("eef_pos", "state"),
    ("joint_positions", "qpos"),
)


class SynonymTable:
    def __init__(self, pairs: Iterable[tuple[str, str]] = DEFAULT_SYNONYM_PAIRS):
        self._pairs = frozenset(frozenset(p) for p in pairs)
        for pair in self._pairs:
            if len(pair) != 2:
                raise ValueError(f"synonym pair must name two distinct keys, got {sorted(pair)}")

    def allows(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self._pairs

    def extended(self, extra: Iterable[tuple[str, str]]) -> "SynonymTable":
        return SynonymTable(tuple(tuple(sorted(p)) for p in self._pairs) + tuple(extra))

    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(tuple(sorted(p)) for p in self._pairs))


DEFAULT_SYNONYMS = SynonymTable()
