"""End-of-run receipts, regenerated whole from a RunRecord.

A receipt is never patched in place: write_receipts renders the full
file from its checked-in template and the record, so the same record
always produces byte-identical output. install.md is the installation
recipe, history.md the probe-and-decision narrative, benchmark.md the
task/protocol guide, and cross-eval-report.md the compatibility and
outcome summary for one policy-benchmark evaluation.
"""

from __future__ import annotations

import os
import tempfile
from importlib import resources
from pathlib import Path
from string import Template

from .runlog import IoFailure, RunRecord

RECEIPT_KINDS = ("install", "history", "benchmark", "cross_eval")

RECEIPT_FILENAMES = {
    "install": "install.md",
    "history": "history.md",
    "benchmark": "benchmark.md",
    "cross_eval": "cross-eval-report.md",
}

# top-level meta keys each kind needs; cross_eval checks its own sub-map
_REQUIRED_META = {
    "install": ("source_commit", "image_digest", "environment", "rerun_recipe"),
    "history": ("decisions",),
    "benchmark": ("source_commit", "protocol_summary", "environment"),
    "cross_eval": ("cross_eval",),
}

CROSS_EVAL_FIELDS = ("bucket", "rules", "outcome", "episodes", "success_rate", "median_ms", "p95_ms")


class MissingField(ValueError):
    """The record lacks a field the requested receipt needs."""

    def __init__(self, kind: str, field: str):
        super().__init__(f"receipt {kind!r} needs record field {field!r}")
        self.kind = kind
        self.field = field


def _template(kind: str) -> Template:
    text = resources.files("nautilus.workspace").joinpath(f"templates/{kind}.md.tmpl").read_text("utf-8")
    return Template(text)


def _bullet_list(items) -> str:
    entries = [f"- {item}" for item in items]
    return "\n".join(entries) if entries else "- (none)"


def _numbered_list(items) -> str:
    entries = [f"{index}. {item}" for index, item in enumerate(items, start=1)]
    return "\n".join(entries) if entries else "(none)"


def _environment_block(environment: dict) -> str:
    entries = [f"- {key}: {environment[key]}" for key in sorted(environment)]
    return "\n".join(entries) if entries else "- (none)"


def _value(value) -> str:
    return "n/a" if value is None else str(value)


def render_receipt(record: RunRecord, kind: str) -> str:
    """Render one receipt to text; raises MissingField on an incomplete record."""
    if kind not in RECEIPT_KINDS:
        raise ValueError(f"unknown receipt kind {kind!r}; expected one of {RECEIPT_KINDS}")
    for field in _REQUIRED_META[kind]:
        if field not in record.meta:
            raise MissingField(kind, field)

    meta = record.meta
    if kind == "install":
        mapping = {
            "run_id": record.run_id,
            "source_commit": _value(meta["source_commit"]),
            "image_digest": _value(meta["image_digest"]),
            "environment": _environment_block(meta["environment"]),
            "rerun_recipe": _numbered_list(meta["rerun_recipe"]),
        }
    elif kind == "history":
        mapping = {
            "run_id": record.run_id,
            "decisions": _bullet_list(meta["decisions"]),
            "events": "\n".join(event.to_line() for event in record.events) or "- (no events)",
        }
    elif kind == "benchmark":
        mapping = {
            "run_id": record.run_id,
            "source_commit": _value(meta["source_commit"]),
            "protocol_summary": str(meta["protocol_summary"]),
            "environment": _environment_block(meta["environment"]),
        }
    else:
        doc = meta["cross_eval"]
        for field in CROSS_EVAL_FIELDS:
            if field not in doc:
                raise MissingField(kind, f"cross_eval.{field}")
        mapping = {
            "run_id": record.run_id,
            "bucket": _value(doc["bucket"]),
            "rules": _bullet_list(doc["rules"]) if doc["rules"] is not None else "- (none)",
            "outcome": _value(doc["outcome"]),
            "episodes": _value(doc["episodes"]),
            "success_rate": _value(doc["success_rate"]),
            "median_ms": _value(doc["median_ms"]),
            "p95_ms": _value(doc["p95_ms"]),
        }
    return _template(kind).substitute(mapping)


def write_receipts(record: RunRecord, kinds=RECEIPT_KINDS, root: str | Path = ".") -> list[Path]:
    """Render and atomically write the requested receipts at the workspace root."""
    root = Path(root)
    rendered = [(kind, render_receipt(record, kind)) for kind in kinds]  # fail before touching disk
    paths: list[Path] = []
    for kind, text in rendered:
        path = root / RECEIPT_FILENAMES[kind]
        try:
            root.mkdir(parents=True, exist_ok=True)
            fd, temp_name = tempfile.mkstemp(dir=root, prefix=f".{RECEIPT_FILENAMES[kind]}.")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(text)
                os.replace(temp_name, path)
            except BaseException:
                os.unlink(temp_name)
                raise
        except OSError as exc:
            raise IoFailure(f"cannot write receipt {path}: {exc}") from exc
        paths.append(path)
    return paths
