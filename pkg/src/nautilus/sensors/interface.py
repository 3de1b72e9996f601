"""Interface (task-invariance) verification.

A benchmark's captured obs/action schema must be identical across its
tasks; anything task-dependent belongs in task parameters, not in the
interface. Captures are compared structurally after flattening to sorted
dotted field paths, so capture order and key order are irrelevant, and
each divergent task reports exactly one field: the first in path order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

_MISSING = object()


@dataclass(frozen=True)
class InterfaceMismatch:
    task: str
    field: str
    detail: str

    def to_dict(self) -> dict:
        return {"task": self.task, "field": self.field, "detail": self.detail}


@dataclass(frozen=True)
class InterfaceReport:
    passed: bool
    baseline_task: str
    tasks: tuple[str, ...]
    mismatches: tuple[InterfaceMismatch, ...] = ()

    def __post_init__(self):
        if self.passed and self.mismatches:
            raise ValueError("a passing report cannot carry mismatches")

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "baseline_task": self.baseline_task,
            "tasks": list(self.tasks),
            "mismatches": [m.to_dict() for m in self.mismatches],
        }

    def to_text(self) -> str:
        if self.passed:
            return f"pass: {len(self.tasks)} captures identical (baseline {self.baseline_task})"
        lines = [f"mismatch against baseline {self.baseline_task}:"]
        lines.extend(f"  {m.task}: {m.field}: {m.detail}" for m in self.mismatches)
        return "\n".join(lines)


def _flatten(doc, prefix: str = "") -> dict[str, object]:
    if hasattr(doc, "to_dict"):
        doc = doc.to_dict()
    if isinstance(doc, Mapping):
        out: dict[str, object] = {}
        for key in sorted(doc, key=str):
            path = f"{prefix}.{key}" if prefix else str(key)
            out.update(_flatten(doc[key], path))
        return out
    if isinstance(doc, (list, tuple)):
        return {prefix: tuple(_flatten(item).get("", item) for item in doc)}
    return {prefix: doc}


def _canonical(doc) -> dict[str, object]:
    flat = _flatten(doc)
    # normalize sequence values so [64, 64, 3] and (64, 64, 3) compare equal
    return {path: tuple(value) if isinstance(value, list) else value for path, value in flat.items()}


def interface_verify(captures) -> InterfaceReport:
    """Compare per-task captured schemas; the first capture is the baseline.

    captures: a mapping of task name to schema doc, or a sequence of
    (task, doc) pairs. Docs are dicts (or carry to_dict()). Needs at
    least one capture.
    """
    if isinstance(captures, Mapping):
        items = list(captures.items())
    elif isinstance(captures, Sequence):
        items = [(str(task), doc) for task, doc in captures]
    else:
        raise TypeError("captures must be a mapping or a sequence of (task, doc) pairs")
    if not items:
        raise ValueError("interface_verify needs at least one captured spec")

    baseline_task, baseline_doc = items[0]
    baseline = _canonical(baseline_doc)
    mismatches: list[InterfaceMismatch] = []
    for task, doc in items[1:]:
        captured = _canonical(doc)
        divergence = _first_divergence(baseline, captured)
        if divergence is not None:
            mismatches.append(InterfaceMismatch(task=str(task), field=divergence[0], detail=divergence[1]))
    return InterfaceReport(
        passed=not mismatches,
        baseline_task=str(baseline_task),
        tasks=tuple(str(task) for task, _ in items),
        mismatches=tuple(mismatches),
    )


def _first_divergence(baseline: dict, captured: dict) -> tuple[str, str] | None:
    for path in sorted(set(baseline) | set(captured)):
        ours = baseline.get(path, _MISSING)
        theirs = captured.get(path, _MISSING)
        if ours is _MISSING:
            return path, f"extra field (baseline has no {path})"
        if theirs is _MISSING:
            return path, f"missing field (baseline has {path} = {ours!r})"
        if ours != theirs:
            return path, f"baseline {ours!r} != captured {theirs!r}"
    return None
