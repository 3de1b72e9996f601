"""Where the CLI finds its registry and workspace.

Both locations come from environment variables so tests and multi-checkout
setups can isolate state; the defaults suit a single-user install.
"""

import os
from pathlib import Path

REGISTRY_DIR_VAR = "HARNESS_REGISTRY_DIR"
WORKSPACE_DIR_VAR = "HARNESS_WORKSPACE_DIR"


def registry_dir() -> Path:
    """Registry root: $HARNESS_REGISTRY_DIR or ~/.nautilus/registry."""
    override = os.environ.get(REGISTRY_DIR_VAR)
    if override:
        return Path(override)
    return Path.home() / ".nautilus" / "registry"


def workspace_dir() -> Path:
    """Workspace root for run logs and receipts: $HARNESS_WORKSPACE_DIR or cwd."""
    override = os.environ.get(WORKSPACE_DIR_VAR)
    if override:
        return Path(override)
    return Path.cwd()
