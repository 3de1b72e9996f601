"""On-disk registry layout and snapshot semantics.

Layout under a registry root:

    index.json          {"entries": [<index doc>, ...]}  (sorted by name)
    specs/<name>.json   one interface contract per entry
    evidence/<name>.json cross-run reports recorded during verification

The index holds curation state (status, digest, size); the spec files
hold interface contracts. Curation writes touch only index.json and
contract changes touch only the one spec file, so the two halves never
churn each other's bytes. Every write goes through a temp file in the
same directory followed by os.replace, and the in-memory snapshot (an
immutable tuple) is swapped only after the disk write lands. Readers
take whole snapshots and never block writers.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Any

from .model import RegistryEntry, SchemaViolation, validate_entry_doc

INDEX_FILE = "index.json"
SPECS_DIR = "specs"
EVIDENCE_DIR = "evidence"


def _atomic_write_json(path: Path, doc: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(doc, indent=2) + "\n"
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


class RegistryStore:
    """Single-writer, many-reader store over one registry directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._write_lock = threading.Lock()
        self._snapshot: tuple[RegistryEntry, ...] = self._load()

    # -- reading ------------------------------------------------------

    def snapshot(self) -> tuple[RegistryEntry, ...]:
        """Immutable view of all entries; safe to hold across writes."""
        return self._snapshot

    def get(self, name: str) -> RegistryEntry | None:
        for entry in self._snapshot:
            if entry.name == name:
                return entry
        return None

    def _load(self) -> tuple[RegistryEntry, ...]:
        index_path = self.root / INDEX_FILE
        if not index_path.exists():
            return ()
        index = json.loads(index_path.read_text(encoding="utf-8"))
        if not isinstance(index, dict) or not isinstance(index.get("entries"), list):
            raise SchemaViolation("", f"{index_path} must hold a map with an 'entries' list")
        entries = []
        for doc in index["entries"]:
            if not isinstance(doc, dict) or "name" not in doc:
                raise SchemaViolation("entries", "each index row must be a map with a name")
            spec_path = self.root / SPECS_DIR / f"{doc['name']}.json"
            if not spec_path.exists():
                raise SchemaViolation("spec", f"missing contract file {spec_path}")
            full = dict(doc)
            full["spec"] = json.loads(spec_path.read_text(encoding="utf-8"))
            entries.append(validate_entry_doc(full))
        return tuple(entries)

    # -- writing ------------------------------------------------------

    @classmethod
    def create(cls, root: str | Path) -> "RegistryStore":
        root = Path(root)
        root.mkdir(parents=True, exist_ok=True)
        (root / SPECS_DIR).mkdir(exist_ok=True)
        if not (root / INDEX_FILE).exists():
            _atomic_write_json(root / INDEX_FILE, {"entries": []})
        return cls(root)

    def _write_index(self, entries: tuple[RegistryEntry, ...]) -> None:
        ordered = tuple(sorted(entries, key=lambda e: e.name))
        _atomic_write_json(
            self.root / INDEX_FILE,
            {"entries": [entry.index_doc() for entry in ordered]},
        )
        self._snapshot = ordered

    def add(self, entry: RegistryEntry) -> None:
        """Insert a new entry: spec file first, then the index row."""
        with self._write_lock:
            _atomic_write_json(self.root / SPECS_DIR / f"{entry.name}.json", entry.spec_doc())
            self._write_index(self._snapshot + (entry,))

    def update(self, entry: RegistryEntry) -> None:
        """Replace an existing entry's index row. The spec file is
        rewritten only when the contract actually changed."""
        with self._write_lock:
            current = {e.name: e for e in self._snapshot}
            if entry.name not in current:
                raise KeyError(entry.name)
            if current[entry.name].spec != entry.spec:
                _atomic_write_json(self.root / SPECS_DIR / f"{entry.name}.json", entry.spec_doc())
            replaced = tuple(entry if e.name == entry.name else e for e in self._snapshot)
            self._write_index(replaced)

    def record_evidence(self, name: str, report_doc: dict) -> Path:
        path = self.root / EVIDENCE_DIR / f"{name}.json"
        with self._write_lock:
            _atomic_write_json(path, report_doc)
        return path
