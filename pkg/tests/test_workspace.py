"""Workspace artefacts: run logs, receipts, sentinel injection."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nautilus.workspace import (
    ANCHORS,
    AnchorNotFound,
    MissingField,
    RunEvent,
    RunRecord,
    SentinelBlock,
    anchor_line,
    append_log,
    apply_sentinel_block,
    cap_result_line,
    has_block,
    render_receipt,
    write_receipts,
)


def event(ts="2026-08-19T10:00:00Z", result="ok"):
    return RunEvent(timestamp=ts, tool="bash", subagent="env-builder", command="make -j8", result_line=result)


def full_record():
    record = RunRecord(run_id="run-0001")
    record.append(event("2026-08-19T10:00:00Z", "configured"))
    record.append(event("2026-08-19T10:00:05Z", "built"))
    record.meta = {
        "source_commit": "a" * 40,
        "image_digest": "sha256:feedfacefeedfacefeedfacefeedfacefeedfacefeedfacefeedfacefeedface",
        "environment": {"python": "3.10", "cuda": "none"},
        "rerun_recipe": ["git clone https://example.com/repo", "make -j8", "./run.sh"],
        "decisions": ["pinned the simulator to headless mode"],
        "protocol_summary": "10 tasks, 10 episodes each, binary success per episode.",
        "cross_eval": {
            "bucket": "compatible_zero_shot",
            "rules": ["key_rename(from=agentview_rgb, to=image)"],
            "outcome": "completed",
            "episodes": 10,
            "success_rate": 100.0,
            "median_ms": 2.4,
            "p95_ms": 4.9,
        },
    }
    return record


# --- run log -------------------------------------------------------------------


def test_first_event_creates_numbered_file(tmp_path):
    path = append_log(tmp_path, "eval", event())
    assert path == tmp_path / ".nautilus/run-log/01-eval.md"
    text = path.read_text()
    assert text.startswith("# 01-eval\n\n")
    assert "result=ok" in text


def test_second_event_appends_and_preserves_prefix(tmp_path):
    path = append_log(tmp_path, "eval", event(result="first"))
    before = path.read_bytes()
    append_log(tmp_path, "eval", event(ts="2026-08-19T10:00:09Z", result="second"))
    after = path.read_bytes()
    assert after.startswith(before)
    assert after.count(b"\n- ") == 2  # one list line per event after the header
    assert b"result=second" in after


def test_second_task_gets_next_sequence_number(tmp_path):
    append_log(tmp_path, "eval", event())
    path = append_log(tmp_path, "train", event())
    assert path.name == "02-train.md"


def test_sequence_widens_past_ninety_nine(tmp_path):
    directory = tmp_path / ".nautilus/run-log"
    directory.mkdir(parents=True)
    (directory / "99-old.md").write_text("# 99-old\n")
    path = append_log(tmp_path, "fresh", event())
    assert path.name == "100-fresh.md"
    again = append_log(tmp_path, "later", event())
    assert again.name == "101-later.md"


def test_task_file_is_stable_across_appends(tmp_path):
    append_log(tmp_path, "eval", event())
    append_log(tmp_path, "train", event())
    path = append_log(tmp_path, "eval", event(ts="2026-08-19T11:00:00Z"))
    assert path.name == "01-eval.md"


def test_result_line_capped_at_two_hundred_chars():
    long = "x" * 500
    capped = cap_result_line(long)
    assert len(capped) == 200
    assert capped.endswith("...")
    assert cap_result_line("short") == "short"
    assert cap_result_line("two\nlines") == "two lines"
    stored = RunEvent("2026-08-19T10:00:00Z", "bash", "s", "c", long)
    assert len(stored.result_line) == 200


def test_record_rejects_time_travel():
    record = RunRecord(run_id="r")
    record.append(event("2026-08-19T10:00:05Z"))
    with pytest.raises(ValueError, match="non-decreasing"):
        record.append(event("2026-08-19T10:00:01Z"))
    record.append(event("2026-08-19T10:00:05Z"))  # equal timestamps are fine


def test_event_validates_timestamp_shape():
    with pytest.raises(ValueError, match="ISO-8601"):
        RunEvent("yesterday", "bash", "s", "c", "r")


def test_task_name_validated(tmp_path):
    with pytest.raises(ValueError, match="kebab"):
        append_log(tmp_path, "Not A Task", event())


def test_record_round_trips_through_dict():
    record = full_record()
    clone = RunRecord.from_dict(record.to_dict())
    assert clone.to_dict() == record.to_dict()


# --- receipts --------------------------------------------------------------------


def test_write_receipts_emits_expected_files(tmp_path):
    paths = write_receipts(full_record(), root=tmp_path)
    assert [p.name for p in paths] == ["install.md", "history.md", "benchmark.md", "cross-eval-report.md"]
    assert all(p.exists() for p in paths)


def test_receipts_regenerate_byte_identically(tmp_path):
    record = full_record()
    first = {p.name: p.read_bytes() for p in write_receipts(record, root=tmp_path)}
    second = {p.name: p.read_bytes() for p in write_receipts(record, root=tmp_path)}
    assert first == second


def test_missing_image_digest_is_a_typed_error():
    record = full_record()
    del record.meta["image_digest"]
    with pytest.raises(MissingField) as excinfo:
        render_receipt(record, "install")
    assert excinfo.value.kind == "install"
    assert excinfo.value.field == "image_digest"


def test_missing_cross_eval_subfield_named_with_path():
    record = full_record()
    del record.meta["cross_eval"]["median_ms"]
    with pytest.raises(MissingField) as excinfo:
        render_receipt(record, "cross_eval")
    assert excinfo.value.field == "cross_eval.median_ms"


def test_incomplete_record_writes_nothing(tmp_path):
    record = full_record()
    del record.meta["decisions"]
    with pytest.raises(MissingField):
        write_receipts(record, root=tmp_path)
    assert list(tmp_path.iterdir()) == []


def test_cross_eval_report_carries_all_outcome_fields():
    text = render_receipt(full_record(), "cross_eval")
    assert "bucket: compatible_zero_shot" in text
    assert "- key_rename(from=agentview_rgb, to=image)" in text
    assert "outcome: completed" in text
    assert "episodes: 10" in text
    assert "success_rate: 100.0" in text
    assert "latency_median_ms: 2.4" in text
    assert "latency_p95_ms: 4.9" in text


def test_none_values_render_as_not_available():
    record = full_record()
    record.meta["cross_eval"].update({"success_rate": None, "median_ms": None, "p95_ms": None})
    text = render_receipt(record, "cross_eval")
    assert "success_rate: n/a" in text
    assert "latency_median_ms: n/a" in text


def test_history_receipt_reuses_log_line_format():
    text = render_receipt(full_record(), "history")
    assert "- 2026-08-19T10:00:00Z tool=bash subagent=env-builder command=`make -j8` result=configured" in text
    assert "- pinned the simulator to headless mode" in text


def test_environment_block_is_sorted():
    text = render_receipt(full_record(), "install")
    assert text.index("- cuda: none") < text.index("- python: 3.10")
    assert "1. git clone https://example.com/repo" in text
    assert "3. ./run.sh" in text


def test_unknown_receipt_kind_rejected():
    with pytest.raises(ValueError, match="unknown receipt kind"):
        render_receipt(full_record(), "invoice")


# --- sentinel blocks ----------------------------------------------------------------


GOLDEN_TAG = "needs-vulkan"
GOLDEN = "# --- NAUTILUS OPEN: needs-vulkan ---\n...\n# --- NAUTILUS CLOSE: needs-vulkan ---\n"


def test_golden_block_into_empty_file():
    result = apply_sentinel_block("", SentinelBlock(GOLDEN_TAG, "..."))
    assert result == GOLDEN
    assert result.splitlines() == [
        "# --- NAUTILUS OPEN: needs-vulkan ---",
        "...",
        "# --- NAUTILUS CLOSE: needs-vulkan ---",
    ]


def test_apply_twice_equals_apply_once():
    block = SentinelBlock("install-sim", "RUN apt-get update\nRUN apt-get install -y libvulkan1")
    once = apply_sentinel_block("FROM base\n", block)
    assert apply_sentinel_block(once, block) == once


def test_present_sentinel_short_circuits_even_with_different_content():
    block_a = SentinelBlock("deps", "pip install torch")
    block_b = SentinelBlock("deps", "pip install jax")
    once = apply_sentinel_block("", block_a)
    assert apply_sentinel_block(once, block_b) == once


def test_append_adds_separator_when_file_lacks_final_newline():
    result = apply_sentinel_block("line without newline", SentinelBlock("x1", "body"))
    assert result.startswith("line without newline\n# --- NAUTILUS OPEN: x1 ---\n")


def test_insert_after_anchor():
    text = "FROM base\n" + anchor_line("INSTALL-DEPS") + "\npip install -e .\n"
    block = SentinelBlock("extra-deps", "pip install numpy")
    result = apply_sentinel_block(text, block, anchor="INSTALL-DEPS")
    lines = result.splitlines()
    at = lines.index(anchor_line("INSTALL-DEPS"))
    assert lines[at + 1] == "# --- NAUTILUS OPEN: extra-deps ---"
    assert lines[at + 2] == "pip install numpy"
    assert lines[at + 3] == "# --- NAUTILUS CLOSE: extra-deps ---"
    assert lines[at + 4] == "pip install -e ."
    assert apply_sentinel_block(result, block, anchor="INSTALL-DEPS") == result


def test_missing_anchor_raises_and_implies_no_change():
    with pytest.raises(AnchorNotFound) as excinfo:
        apply_sentinel_block("FROM base\n", SentinelBlock("t0", "x"), anchor="ENTRYPOINT")
    assert excinfo.value.anchor == "ENTRYPOINT"


def test_anchor_must_match_exact_line():
    text = "  " + anchor_line("ENV-SETUP") + "\n"  # indented, so not an anchor
    with pytest.raises(AnchorNotFound):
        apply_sentinel_block(text, SentinelBlock("t1", "x"), anchor="ENV-SETUP")


def test_tag_shape_enforced():
    with pytest.raises(ValueError, match="tag"):
        SentinelBlock("Has Spaces", "x")
    with pytest.raises(ValueError, match="tag"):
        SentinelBlock("UPPER", "x")


def test_has_block_detects_open_line():
    text = apply_sentinel_block("", SentinelBlock("gpu-flags", "FLAGS=--gpu"))
    assert has_block(text, "gpu-flags")
    assert not has_block(text, "other")


def test_four_anchor_names():
    assert ANCHORS == ("INSTALL-DEPS", "SYSTEM-PACKAGES", "ENV-SETUP", "ENTRYPOINT")
    assert anchor_line("ENTRYPOINT") == "# --- NAUTILUS ANCHOR: ENTRYPOINT ---"


@settings(max_examples=200, deadline=None)
@given(
    text=st.text(max_size=400),
    tag=st.from_regex(r"[a-z0-9-]{1,20}", fullmatch=True),
    content=st.text(max_size=200),
)
def test_sentinel_idempotence_property(text, tag, content):
    block = SentinelBlock(tag, content)
    once = apply_sentinel_block(text, block)
    twice = apply_sentinel_block(once, block)
    assert twice == once
    assert has_block(once, tag)
