"""
Guard sensors and reproducibility artefacts
===========================================

Screen shell commands against the pre-action filter, patch a config
file through idempotent sentinel blocks, and append to a run log that
refuses to go backwards in time.
"""

import tempfile
from pathlib import Path

from nautilus.sensors import pre_action_filter
from nautilus.workspace import (
    RunEvent,
    SentinelBlock,
    append_log,
    apply_sentinel_block,
    now_iso,
)

# The filter tokenizes before matching. "rm -rf /" is blocked as a
# token sequence, so "rm -rf ./build" sails through instead of being
# caught by a sloppy substring rule.
for command in (
    "rm -rf /",
    "rm -rf ./build",
    "mkfs.ext4 /dev/sda1",
    "pytest -q tests/",
):
    decision = pre_action_filter(command)
    matched = f" (rule: {decision.matched_pattern})" if not decision.allowed else ""
    print(f"{decision.verdict:5}  {command}{matched}")

# Sentinel blocks make config edits safe to repeat. The same apply
# twice leaves one block, and a changed body replaces the old block
# in place instead of stacking a second copy.
config = "export PATH=$PATH\n"
block = SentinelBlock(tag="needs-vulkan", content="export VK_ICD_FILENAMES=/usr/share/vulkan/icd.d/nvidia_icd.json\n")
once = apply_sentinel_block(config, block)
twice = apply_sentinel_block(once, block)
assert once == twice
print(f"\nsentinel apply is idempotent: {once == twice}")
print(once)

# Run logs are append-only JSON lines under one workspace lock, and
# each event must not predate the one before it.
root = Path(tempfile.mkdtemp())
path = append_log(root, "demo", RunEvent(now_iso(), "gate", "orchestrator", "compare pi0/libero", "compatible_zero_shot"))
append_log(root, "demo", RunEvent(now_iso(), "eval", "orchestrator", "episode 1", "success at step 5"))
print(f"log lines in {path.name}:")
print(path.read_text(), end="")
