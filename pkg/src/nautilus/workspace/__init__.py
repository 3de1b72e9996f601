"""Per-run workspace artefacts: append-only logs, regenerated receipts,
sentinel-guarded file injection."""

from .receipts import (
    CROSS_EVAL_FIELDS,
    RECEIPT_FILENAMES,
    RECEIPT_KINDS,
    MissingField,
    render_receipt,
    write_receipts,
)
from .runlog import (
    RESULT_LINE_CAP,
    RUN_LOG_DIR,
    IoFailure,
    RunEvent,
    RunRecord,
    append_log,
    cap_result_line,
    now_iso,
    run_log_dir,
    workspace_lock,
)
from .sentinel import (
    ANCHORS,
    AnchorNotFound,
    SentinelBlock,
    anchor_line,
    apply_sentinel_block,
    close_line,
    has_block,
    open_line,
)

__all__ = [
    "ANCHORS",
    "AnchorNotFound",
    "CROSS_EVAL_FIELDS",
    "IoFailure",
    "MissingField",
    "RECEIPT_FILENAMES",
    "RECEIPT_KINDS",
    "RESULT_LINE_CAP",
    "RUN_LOG_DIR",
    "RunEvent",
    "RunRecord",
    "SentinelBlock",
    "anchor_line",
    "append_log",
    "apply_sentinel_block",
    "cap_result_line",
    "close_line",
    "has_block",
    "now_iso",
    "open_line",
    "render_receipt",
    "run_log_dir",
    "workspace_lock",
    "write_receipts",
]
