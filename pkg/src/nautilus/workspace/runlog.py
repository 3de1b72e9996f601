"""Append-only per-run process logs.

Each task gets one file under <workspace>/.nautilus/run-log/ named
NN-<task>.md, where NN is assigned in task creation order and is
monotonic per workspace. Zero-padding is two digits and widens on its
own past 99 (100-onwards simply print wider). Events only ever append;
bytes already in a file are never rewritten.

Appends take an advisory lock file in the run-log directory, so two
processes logging into the same workspace serialize instead of
interleaving partial lines.
"""

from __future__ import annotations

import fcntl
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

RUN_LOG_DIR = ".nautilus/run-log"
RESULT_LINE_CAP = 200
_ELLIPSIS = "..."

_TIMESTAMP_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$")
_TASK_RE = re.compile(r"^[a-z0-9][a-z0-9-]*$")
_LOG_NAME_RE = re.compile(r"^(\d{2,})-(.+)\.md$")


class IoFailure(RuntimeError):
    """A workspace write failed; wraps the underlying OS error."""


def now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def cap_result_line(text: str) -> str:
    """One physical line, at most RESULT_LINE_CAP characters, marked when cut."""
    line = " ".join(str(text).splitlines())
    if len(line) <= RESULT_LINE_CAP:
        return line
    return line[: RESULT_LINE_CAP - len(_ELLIPSIS)] + _ELLIPSIS


@dataclass(frozen=True)
class RunEvent:
    timestamp: str
    tool: str
    subagent: str
    command: str
    result_line: str

    def __post_init__(self):
        if not _TIMESTAMP_RE.fullmatch(self.timestamp):
            raise ValueError(f"timestamp must be ISO-8601 UTC (YYYY-MM-DDTHH:MM:SSZ), got {self.timestamp!r}")
        object.__setattr__(self, "result_line", cap_result_line(self.result_line))

    def to_line(self) -> str:
        return (
            f"- {self.timestamp} tool={self.tool} subagent={self.subagent} "
            f"command=`{self.command}` result={self.result_line}"
        )

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "tool": self.tool,
            "subagent": self.subagent,
            "command": self.command,
            "result_line": self.result_line,
        }


@dataclass
class RunRecord:
    """Ordered per-run event record plus the metadata receipts render from."""

    run_id: str
    events: list[RunEvent] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for earlier, later in zip(self.events, self.events[1:]):
            _check_order(earlier, later)

    def append(self, event: RunEvent) -> None:
        if self.events:
            _check_order(self.events[-1], event)
        self.events.append(event)

    def to_dict(self) -> dict:
        return {"run_id": self.run_id, "events": [e.to_dict() for e in self.events], "meta": self.meta}

    @classmethod
    def from_dict(cls, doc: dict) -> "RunRecord":
        return cls(
            run_id=doc["run_id"],
            events=[RunEvent(**event) for event in doc.get("events", [])],
            meta=dict(doc.get("meta", {})),
        )


def _check_order(earlier: RunEvent, later: RunEvent) -> None:
    # ISO-8601 UTC at fixed width compares correctly as text
    if later.timestamp < earlier.timestamp:
        raise ValueError(f"timestamps must be non-decreasing: {later.timestamp} after {earlier.timestamp}")


def run_log_dir(workspace_root: str | Path) -> Path:
    return Path(workspace_root) / RUN_LOG_DIR


@contextmanager
def workspace_lock(workspace_root: str | Path):
    """Advisory exclusive lock serializing writers of one workspace."""
    directory = run_log_dir(workspace_root)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        handle = open(directory / ".lock", "a+")
    except OSError as exc:
        raise IoFailure(f"cannot prepare workspace lock under {directory}: {exc}") from exc
    try:
        fcntl.flock(handle.fileno(), fcntl.LOCK_EX)
        yield
    finally:
        fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
        handle.close()


def _task_file(directory: Path, task: str) -> Path:
    """Existing file for the task, or the next free sequence number."""
    highest = 0
    for entry in directory.iterdir():
        match = _LOG_NAME_RE.fullmatch(entry.name)
        if not match:
            continue
        number, name = int(match.group(1)), match.group(2)
        if name == task:
            return entry
        highest = max(highest, number)
    return directory / f"{highest + 1:02d}-{task}.md"


def append_log(workspace_root: str | Path, task: str, event: RunEvent) -> Path:
    """Append one event to the task's log file; returns the file path."""
    if not _TASK_RE.fullmatch(task):
        raise ValueError(f"task name must be lowercase kebab case, got {task!r}")
    directory = run_log_dir(workspace_root)
    try:
        with workspace_lock(workspace_root):
            path = _task_file(directory, task)
            fresh = not path.exists()
            with open(path, "a", encoding="utf-8") as handle:
                if fresh:
                    handle.write(f"# {path.stem}\n\n")
                handle.write(event.to_line() + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot append to run log for task {task!r}: {exc}") from exc
    return path
