"""Seed a small, fully working demo registry.

Every entry with a mock:// source URL can be materialized in-process,
so the whole eval pipeline runs against this registry with no network
and no checkouts. Seeding goes through the real curation path (submit,
then verify for the one benchmark with reproduction evidence), so a
demo registry is also a fixture for the write-side behaviour.
"""

from __future__ import annotations

from pathlib import Path

from ..sensors.crossrun import cross_run_verify
from .curation import submit, verify
from .store import RegistryStore

LIBERO_MOCK_DIGEST = "sha256:9a7f1c0d8b2e6f4a5c3d7e9b1f0a2c4e6d8b0a2c4e6f8a0b1c3d5e7f9a1b3c5d"

# Reproduced / published success-rate pairs used to verify the demo
# benchmark. All five sit inside the default agreement band.
DEMO_EVIDENCE_ROWS = [
    ("Diffusion Policy", 70.2, 72.4),
    ("pi0", 93.6, 94.2),
    ("OpenVLA", 78.2, 76.5),
    ("SmolVLA", 88.2, 87.3),
    ("cosmos-policy", 98.4, 98.5),
]


def demo_entry_docs() -> list[dict]:
    image_obs = {"agentview_rgb": {"dtype": "u8", "shape": [64, 64, 3]}}
    state_obs = {"robot0_eef_pos": {"dtype": "f32", "shape": [7]}}

    return [
        {
            "name": "libero-mock",
            "kind": "benchmark",
            "source_url": "mock://benchmarks/libero-mock?episode_length=10&success_threshold=5",
            "commit": "c1a5b8d2e4f60718293a4b5c6d7e8f9012345678",
            "spec": {
                "obs_schema": {**image_obs, **state_obs},
                "action_dim": 7,
                "control_mode": "joint",
                "reward_structure": "none",
                "has_training_entrypoint": False,
                "success_criterion": "cumulative actuation reaches the scripted goal",
                "seed_protocol": "reset(seed) reseeds the whole episode stream",
                "task_count": 10,
                "gripper_sign": 1,
            },
            "quick_start": [
                "harness registry lookup libero-mock",
                f"docker pull images.example.org/nautilus/libero-mock@{LIBERO_MOCK_DIGEST}",
                "harness eval --policy scripted-mock --benchmark libero-mock --episodes 10",
            ],
        },
        {
            "name": "ManiSkill",
            "kind": "benchmark",
            "source_url": "https://github.com/haosulab/ManiSkill",
            "commit": "7d9e2f4a6b8c0d1e3f5a7b9c1d2e4f6a8b0c2d3e",
            "spec": {
                "obs_schema": {
                    "image": {"dtype": "u8", "shape": [128, 128, 3]},
                    "state": {"dtype": "f32", "shape": [9]},
                },
                "action_dim": 7,
                "control_mode": "eef",
                "reward_structure": "dense",
                "has_training_entrypoint": True,
                "success_criterion": "env info success flag",
                "seed_protocol": "per-episode integer seed",
                "task_count": 4,
                "gripper_sign": -1,
            },
            "quick_start": [
                "git clone https://github.com/haosulab/ManiSkill",
                "harness smoke --benchmark ManiSkill --tier L2",
            ],
        },
        {
            "name": "scripted-mock",
            "kind": "policy",
            "source_url": "mock://policies/scripted-mock?kind=scripted_success",
            "commit": "a3c5e7f9b1d2048a6c8e0f2a4b6c8d0e1f3a5b7c",
            "spec": {
                "obs_schema": {**image_obs, **state_obs},
                "action_dim": 7,
                "action_horizon": 1,
                "control_mode": "joint",
                "checkpoint_urls": [],
            },
            "quick_start": [
                "harness eval --policy scripted-mock --benchmark libero-mock --episodes 10",
            ],
        },
        {
            "name": "pi0-mock",
            "kind": "policy",
            "source_url": "mock://policies/pi0-mock?kind=random&seed=7",
            "commit": "e2f4a6b8c0d1e3f5a7b9c1d3e5f7a9b0c2d4e6f8",
            "spec": {
                "obs_schema": {
                    "image": {"dtype": "f32", "shape": [3, 64, 64]},
                    "state": {"dtype": "f32", "shape": [7]},
                },
                "action_dim": 7,
                "action_horizon": 4,
                "control_mode": "joint",
                "checkpoint_urls": ["mock://checkpoints/pi0-mock.ckpt"],
            },
            "quick_start": [
                "harness eval --policy pi0-mock --benchmark libero-mock --episodes 2",
            ],
        },
        {
            "name": "ur5-mock",
            "kind": "robot",
            "source_url": "mock://robots/ur5-mock",
            "commit": "b4d6f8a0c2e3f5a7b9d1e3f5a7c9b1d3e5f7a9b1",
            "spec": {
                "obs_schema": {
                    "joint_positions": {"dtype": "f32", "shape": [6]},
                    "wrist_rgb": {"dtype": "u8", "shape": [32, 32, 3]},
                },
                "action_dim": 6,
                "control_mode": "joint",
                "loop_hz": 20.0,
            },
            "quick_start": [
                "harness registry lookup ur5-mock",
            ],
        },
    ]


def seed_demo_registry(root: str | Path) -> RegistryStore:
    """Create (or top up) a registry at root with the demo entries."""
    store = RegistryStore.create(root)
    existing = {entry.name for entry in store.snapshot()}
    for doc in demo_entry_docs():
        if doc["name"] not in existing:
            submit(store, doc, worktree_clean=True)
    if store.get("libero-mock") is not None and store.get("libero-mock").status != "verified":
        evidence = cross_run_verify(DEMO_EVIDENCE_ROWS)
        verify(
            store,
            "libero-mock",
            evidence,
            image_digest=LIBERO_MOCK_DIGEST,
            image_size_bytes=1_283_457_024,
        )
    return store
