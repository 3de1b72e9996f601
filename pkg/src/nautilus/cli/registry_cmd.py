"""Registry verbs for the CLI: lookup, list, submit, verify, init-demo.

Output is deliberately plain: lookup prints JSON (machine-readable), list
prints one tab-separated line per entry. Mutations go through the curation
module so the CLI cannot bypass preflight or evidence rules.
"""

import json
from pathlib import Path

from ..registry.curation import submit, verify
from ..registry.demo import seed_demo_registry
from ..registry.lookup import lookup
from ..registry.store import RegistryStore
from ..sensors.crossrun import CrossRunReport


def open_store(root: Path) -> RegistryStore:
    """Open the registry at root, creating an empty one on first use."""
    if not (root / "index.json").exists():
        return RegistryStore.create(root)
    return RegistryStore(root)


def cmd_lookup(store: RegistryStore, query: str, kind: str | None, out=print) -> int:
    hit = lookup(store.snapshot(), query, kind=kind)
    out(json.dumps(hit.to_dict(), indent=2))
    return 0


def cmd_list(store: RegistryStore, kind: str | None, out=print) -> int:
    entries = [e for e in store.snapshot() if kind is None or e.kind == kind]
    for entry in sorted(entries, key=lambda e: (e.kind, e.name)):
        out(f"{entry.name}\t{entry.kind}\t{entry.status}\t{entry.source_url}")
    if not entries:
        out("(registry is empty)")
    return 0


def cmd_submit(store: RegistryStore, doc_path: str, out=print) -> int:
    doc = json.loads(Path(doc_path).read_text(encoding="utf-8"))
    entry = submit(store, doc)
    out(f"submitted {entry.name} ({entry.kind}) as {entry.status}")
    return 0


def cmd_verify(store: RegistryStore, name: str, evidence_path: str, image_digest: str | None, out=print) -> int:
    doc = json.loads(Path(evidence_path).read_text(encoding="utf-8"))
    # from_dict recomputes the verdict from the rows, so a hand-edited
    # recommendation field cannot smuggle an entry past the evidence rule.
    report = CrossRunReport.from_dict(doc)
    entry = verify(store, name, report, image_digest=image_digest)
    out(f"{entry.name} is now {entry.status} (in-band {report.in_band_count}/{len(report.rows)})")
    return 0


def cmd_init_demo(root: Path, out=print) -> int:
    store = seed_demo_registry(root)
    out(f"demo registry ready at {root} with {len(store.snapshot())} entries")
    return 0
