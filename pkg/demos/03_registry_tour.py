"""
Registry: fuzzy lookup, submission, and the verification rule
=============================================================

Seed a registry in a temporary directory, resolve entries through
the lookup tiers, submit a new benchmark, and watch verification
refuse it until the evidence clears the bar.
"""

import tempfile
from pathlib import Path

from nautilus.registry import (
    InsufficientEvidence,
    NotFound,
    RegistryStore,
    lookup,
    seed_demo_registry,
    submit,
    verify,
)
from nautilus.sensors import cross_run_verify

root = Path(tempfile.mkdtemp())
seed_demo_registry(root)
store = RegistryStore(root)

# Lookup is forgiving about naming. All three of these resolve to
# the same entry: exact name, source URL, and a sloppy variant that
# only survives normalization.
for query in ("maniskill", "https://github.com/haosulab/ManiSkill", "Mani-Skill_3"):
    hit = lookup(store.snapshot(), query)
    print(f"{query!r:45} -> {hit.entry.name} (tier: {hit.tier})")

# Misses come back with near misses embedded in the error message,
# so a typo is a one-round-trip fix.
try:
    lookup(store.snapshot(), "mock")
except NotFound as exc:
    print(f"miss: {exc}")

# Submissions always enter unverified. The schema is strict: unknown
# fields are rejected rather than ignored, because fuzzy lookup makes
# misspelled fields reachable forever.
doc = {
    "name": "tabletop-rearrange",
    "kind": "benchmark",
    "source_url": "mock://benchmarks/tabletop-rearrange?episode_length=6&success_threshold=1.5",
    "commit": "c" * 40,
    "spec": {
        "obs_schema": {"state": {"dtype": "f32", "shape": [4]}},
        "action_dim": 4,
        "control_mode": "joint",
        "reward_structure": "dense",
        "has_training_entrypoint": False,
        "success_criterion": "cumulative displacement over threshold",
        "seed_protocol": "reset(seed)",
        "task_count": 1,
        "gripper_sign": 1,
    },
    "quick_start": ["harness smoke --benchmark tabletop-rearrange"],
}
entry = submit(store, doc)
print(f"submitted: {entry.name} status={entry.status}")

# Verification wants agreement across independent reproductions. Each
# row is (policy, reproduced success rate, published reference); rows
# within the band count toward the quorum. One in-band row out of
# three is not enough, and the refusal says so.
weak = cross_run_verify(
    [
        ("pi0-mock", 80.0, 80.5),
        ("octo-mock", 31.0, 79.0),
        ("rt1-mock", 55.0, 80.0),
    ]
)
try:
    verify(store, "tabletop-rearrange", weak, image_digest="sha256:" + "0" * 64)
except InsufficientEvidence as exc:
    print(f"refused: {exc}")

# The evidence file lands on disk either way. Decisions are recorded
# next to the facts they were made from, never instead of them.
print(f"evidence recorded: {(root / 'evidence' / 'tabletop-rearrange.json').exists()}")

strong = cross_run_verify(
    [
        ("pi0-mock", 80.0, 80.5),
        ("octo-mock", 77.2, 79.0),
        ("rt1-mock", 82.9, 80.0),
    ]
)
promoted = verify(store, "tabletop-rearrange", strong, image_digest="sha256:" + "0" * 64)
print(f"verified: {promoted.name} status={promoted.status}")
