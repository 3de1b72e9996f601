"""Registry: validation, four-tier lookup, store layout, curation, service."""

from __future__ import annotations

import copy
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nautilus.registry import (
    Ambiguous,
    Collision,
    InsufficientEvidence,
    MutationRejected,
    NotBenchmark,
    NotFound,
    PreflightFailed,
    RegistryQueryServer,
    RegistryService,
    RegistryServiceClient,
    RegistryStore,
    SchemaViolation,
    lookup,
    normalize,
    seed_demo_registry,
    submit,
    url_basename,
    validate_entry_doc,
    verify,
)
from nautilus.registry.demo import demo_entry_docs
from nautilus.sensors import cross_run_verify


def demo_doc(name: str) -> dict:
    for doc in demo_entry_docs():
        if doc["name"] == name:
            return copy.deepcopy(doc)
    raise KeyError(name)


@pytest.fixture()
def demo_store(tmp_path) -> RegistryStore:
    return seed_demo_registry(tmp_path / "registry")


# -- validation -------------------------------------------------------


def test_validate_round_trip():
    entry = validate_entry_doc(demo_doc("ManiSkill"))
    assert entry.name == "ManiSkill"
    assert entry.kind == "benchmark"
    assert entry.status == "unverified"
    assert entry.spec.action_dim == 7


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.update(name=""), "name"),
        (lambda d: d.update(name=7), "name"),
        (lambda d: d.update(kind="environment"), "kind"),
        (lambda d: d.update(source_url=""), "source_url"),
        (lambda d: d.update(commit="abc123"), "commit"),
        (lambda d: d.update(commit="Z" * 40), "commit"),
        (lambda d: d.update(image_size_bytes=-1), "image_size_bytes"),
        (lambda d: d.update(status="golden"), "status"),
        (lambda d: d.update(quick_start="run it"), "quick_start"),
        (lambda d: d.update(quick_start=["ok", 3]), "quick_start[1]"),
        (lambda d: d.update(surprise=1), "surprise"),
        (lambda d: d.update(spec="nope"), "spec"),
        (lambda d: d["spec"].update(action_dim=0), "spec"),
    ],
)
def test_validate_names_the_field(mutate, path):
    doc = demo_doc("ManiSkill")
    mutate(doc)
    with pytest.raises(SchemaViolation) as err:
        validate_entry_doc(doc)
    assert err.value.field_path == path


def test_verified_reserved_for_benchmarks():
    doc = demo_doc("pi0-mock")
    doc["status"] = "verified"
    doc["image_digest"] = "sha256:" + "0" * 64
    with pytest.raises(SchemaViolation) as err:
        validate_entry_doc(doc)
    assert err.value.field_path == "status"
    assert "reserved for benchmarks" in str(err.value)


def test_verified_requires_image_digest():
    doc = demo_doc("ManiSkill")
    doc["status"] = "verified"
    assert doc.get("image_digest", "") == ""
    with pytest.raises(SchemaViolation) as err:
        validate_entry_doc(doc)
    assert err.value.field_path == "status"


# -- normalization ----------------------------------------------------


@pytest.mark.parametrize(
    "raw, key",
    [
        ("ManiSkill", "maniskill"),
        ("ManiSkill3", "maniskill"),
        ("Mani-Skill_3", "maniskill"),
        ("maniskill", "maniskill"),
        ("pi0-mock", "pi0mock"),
        ("LIBERO-10", "libero"),
        ("v2", "v"),
        ("123", ""),
        ("", ""),
    ],
)
def test_normalize_examples(raw, key):
    assert normalize(raw) == key


@settings(max_examples=300)
@given(st.text(max_size=40))
def test_normalize_idempotent(text):
    once = normalize(text)
    assert normalize(once) == once
    # the key never ends in a digit: the trailing run is always gone
    assert once == "" or not once[-1].isdigit()


def test_url_basename():
    assert url_basename("https://github.com/acme/ManiSkill.git") == "maniskill"
    assert url_basename("https://github.com/acme/ManiSkill/") == "maniskill"
    assert url_basename("git@host:group/Repo.GIT") == "repo"
    assert url_basename("mock://benchmarks/libero-mock?x=1") == "libero-mock"


# -- lookup tiers -----------------------------------------------------


def test_lookup_exact_name(demo_store):
    result = lookup(demo_store.snapshot(), "ManiSkill")
    assert result.tier == "exact_name"
    assert result.entry.name == "ManiSkill"


def test_lookup_exact_url(demo_store):
    result = lookup(demo_store.snapshot(), "https://github.com/haosulab/ManiSkill")
    assert result.tier == "exact_url"
    assert result.entry.name == "ManiSkill"


def test_lookup_url_basename_from_fork(demo_store):
    result = lookup(demo_store.snapshot(), "https://github.com/acme-robotics/ManiSkill.git")
    assert result.tier == "url_basename"
    assert result.entry.name == "ManiSkill"


def test_lookup_normalized_key(demo_store):
    for query in ("maniskill", "ManiSkill3", "MANI_SKILL"):
        result = lookup(demo_store.snapshot(), query)
        assert result.tier == "normalized_key", query
        assert result.entry.name == "ManiSkill"


def test_lookup_kind_filter(demo_store):
    with pytest.raises(NotFound):
        lookup(demo_store.snapshot(), "ManiSkill", kind="policy")
    assert lookup(demo_store.snapshot(), "ManiSkill", kind="benchmark").entry.kind == "benchmark"


def test_lookup_not_found_lists_near_misses(demo_store):
    with pytest.raises(NotFound) as err:
        lookup(demo_store.snapshot(), "libero")
    assert err.value.near_misses == ("libero-mock",)


def test_lookup_digit_only_query_matches_nothing(demo_store):
    with pytest.raises(NotFound) as err:
        lookup(demo_store.snapshot(), "123")
    assert err.value.near_misses == ()


def _store_with(tmp_path, docs):
    store = RegistryStore.create(tmp_path / "amb")
    for doc in docs:
        submit(store, doc)
    return store


def test_lookup_ambiguous_normalized(tmp_path):
    a = demo_doc("pi0-mock")
    b = demo_doc("pi0-mock")
    b["name"] = "Pi0Mock2"
    b["source_url"] = "mock://policies/pi0-mock-fork"
    store = _store_with(tmp_path, [a, b])
    with pytest.raises(Ambiguous) as err:
        lookup(store.snapshot(), "PI0MOCK9")
    assert err.value.tier == "normalized_key"
    assert set(err.value.names) == {"pi0-mock", "Pi0Mock2"}


def test_lookup_ambiguous_url_basename(tmp_path):
    a = demo_doc("ManiSkill")
    b = demo_doc("ManiSkill")
    b["name"] = "maniskill"
    b["source_url"] = "https://gitlab.example.org/mirror/ManiSkill"
    store = _store_with(tmp_path, [a, b])
    with pytest.raises(Ambiguous) as err:
        lookup(store.snapshot(), "https://github.com/fork/ManiSkill.git")
    assert err.value.tier == "url_basename"


def test_exact_name_wins_over_later_tiers(tmp_path):
    a = demo_doc("ManiSkill")
    b = demo_doc("ManiSkill")
    b["name"] = "maniskill"
    b["source_url"] = "https://example.org/maniskill"
    store = _store_with(tmp_path, [a, b])
    assert lookup(store.snapshot(), "maniskill").tier == "exact_name"
    assert lookup(store.snapshot(), "maniskill").entry.name == "maniskill"
    assert lookup(store.snapshot(), "ManiSkill").entry.name == "ManiSkill"


# -- store layout -----------------------------------------------------


def test_store_files_split(demo_store):
    root = demo_store.root
    index = json.loads((root / "index.json").read_text())
    names = [row["name"] for row in index["entries"]]
    assert names == sorted(names)
    assert all("spec" not in row for row in index["entries"])
    for name in names:
        assert (root / "specs" / f"{name}.json").exists()


def test_store_reload_round_trip(demo_store):
    reloaded = RegistryStore(demo_store.root)
    assert {e.name for e in reloaded.snapshot()} == {e.name for e in demo_store.snapshot()}
    assert reloaded.get("libero-mock").status == "verified"
    assert reloaded.get("libero-mock").spec == demo_store.get("libero-mock").spec


def test_status_flip_leaves_spec_bytes_alone(tmp_path):
    store = seed_demo_registry(tmp_path / "r")
    spec_path = store.root / "specs" / "ManiSkill.json"
    index_path = store.root / "index.json"
    spec_before = spec_path.read_bytes()
    index_before = index_path.read_bytes()

    evidence = cross_run_verify([("a", 50.0, 50.5), ("b", 60.0, 59.5), ("c", 70.0, 70.0)])
    verify(store, "ManiSkill", evidence, image_digest="sha256:" + "a" * 64, image_size_bytes=10)

    assert spec_path.read_bytes() == spec_before
    assert index_path.read_bytes() != index_before


def test_contract_change_leaves_index_bytes_alone(demo_store):
    index_path = demo_store.root / "index.json"
    spec_path = demo_store.root / "specs" / "ur5-mock.json"
    index_before = index_path.read_bytes()
    spec_before = spec_path.read_bytes()

    entry = demo_store.get("ur5-mock")
    from dataclasses import replace

    demo_store.update(replace(entry, spec=replace(entry.spec, loop_hz=50.0)))

    assert index_path.read_bytes() == index_before
    assert spec_path.read_bytes() != spec_before


def test_snapshot_is_immutable_under_writes(demo_store):
    before = demo_store.snapshot()
    doc = demo_doc("ur5-mock")
    doc["name"] = "ur10-mock"
    doc["source_url"] = "mock://robots/ur10-mock"
    submit(demo_store, doc)
    assert len(before) + 1 == len(demo_store.snapshot())
    assert all(e.name != "ur10-mock" for e in before)


def test_store_rejects_missing_spec_file(tmp_path):
    store = seed_demo_registry(tmp_path / "r")
    (store.root / "specs" / "ManiSkill.json").unlink()
    with pytest.raises(SchemaViolation):
        RegistryStore(store.root)


# -- curation ---------------------------------------------------------


def test_submit_requires_clean_worktree(demo_store):
    doc = demo_doc("ur5-mock")
    doc["name"] = "dirty-bot"
    doc["source_url"] = "mock://robots/dirty-bot"
    with pytest.raises(PreflightFailed):
        submit(demo_store, doc, worktree_clean=False)
    assert demo_store.get("dirty-bot") is None


def test_submit_name_collision(demo_store):
    doc = demo_doc("ur5-mock")
    doc["source_url"] = "mock://robots/other"
    with pytest.raises(Collision) as err:
        submit(demo_store, doc)
    assert err.value.what == "name"


def test_submit_url_collision(demo_store):
    doc = demo_doc("ur5-mock")
    doc["name"] = "ur5-clone"
    with pytest.raises(Collision) as err:
        submit(demo_store, doc)
    assert err.value.what == "url"


def test_submit_rejects_preverified_doc(demo_store):
    doc = demo_doc("ManiSkill")
    doc["name"] = "sneaky"
    doc["source_url"] = "https://example.org/sneaky"
    doc["status"] = "verified"
    doc["image_digest"] = "sha256:" + "b" * 64
    with pytest.raises(SchemaViolation) as err:
        submit(demo_store, doc)
    assert err.value.field_path == "status"


def test_verify_non_benchmark_rejected(demo_store):
    evidence = cross_run_verify([("a", 1.0, 1.0)] * 3)
    with pytest.raises(NotBenchmark):
        verify(demo_store, "pi0-mock", evidence, image_digest="sha256:" + "c" * 64)
    assert demo_store.get("pi0-mock").status == "unverified"


def test_verify_insufficient_evidence_recorded(demo_store):
    evidence = cross_run_verify(
        [("a", 50.0, 90.0), ("b", 20.0, 80.0), ("c", 70.0, 70.0)]
    )
    assert evidence.recommendation == "keep_unverified"
    with pytest.raises(InsufficientEvidence):
        verify(demo_store, "ManiSkill", evidence, image_digest="sha256:" + "d" * 64)
    assert demo_store.get("ManiSkill").status == "unverified"
    recorded = json.loads((demo_store.root / "evidence" / "ManiSkill.json").read_text())
    assert recorded["recommendation"] == "keep_unverified"
    assert recorded["in_band_count"] == 1


def test_verify_success_flips_status(demo_store):
    entry = demo_store.get("libero-mock")
    assert entry.status == "verified"
    assert entry.image_digest.startswith("sha256:")
    recorded = json.loads((demo_store.root / "evidence" / "libero-mock.json").read_text())
    assert recorded["recommendation"] == "verify"
    assert recorded["in_band_count"] == 5


def test_verify_unknown_name(demo_store):
    evidence = cross_run_verify([("a", 1.0, 1.0)] * 3)
    with pytest.raises(KeyError):
        verify(demo_store, "missing", evidence)


def test_cross_run_deltas_exact_tenths():
    report = cross_run_verify([("dp", 70.2, 72.4), ("act", 30.0, 29.7)])
    assert report.rows[0].delta == -2.2
    assert report.rows[1].delta == 0.3
    from nautilus.sensors import delta_tenths, format_delta

    assert delta_tenths(70.2, 72.4) == -22
    assert format_delta(-22) == "-2.2"
    assert format_delta(3) == "+0.3"
    assert format_delta(0) == "0.0"


# -- query service ----------------------------------------------------

WRITE_VERBS = ("submit", "verify", "add_entry", "update_entry", "delete_entry", "set_status", "rename")


def test_service_three_query_equivalence(demo_store):
    service = RegistryService(demo_store)
    queries = {
        "ManiSkill": "exact_name",
        "maniskill": "normalized_key",
        "https://github.com/acme-robotics/ManiSkill.git": "url_basename",
    }
    with RegistryQueryServer(demo_store) as server:
        with RegistryServiceClient(server.host, server.port) as client:
            for query, tier in queries.items():
                direct = lookup(demo_store.snapshot(), query, kind="benchmark")
                in_proc = service.call("lookup_benchmark", {"query": query})
                remote = client.request("lookup_benchmark", {"query": query})
                assert direct.tier == in_proc["tier"] == remote["tier"] == tier
                assert direct.entry.name == in_proc["entry"]["name"] == remote["entry"]["name"] == "ManiSkill"
                assert in_proc == remote
                assert in_proc["entry"] == direct.entry.to_dict()


def test_service_rejects_every_write_verb(demo_store):
    service = RegistryService(demo_store)
    for verb in WRITE_VERBS:
        with pytest.raises(MutationRejected):
            service.call(verb, {"query": "x"})
    with RegistryQueryServer(demo_store) as server:
        with RegistryServiceClient(server.host, server.port) as client:
            for verb in WRITE_VERBS:
                with pytest.raises(MutationRejected) as err:
                    client.request(verb, {"doc": {"name": "evil"}})
                assert err.value.verb == verb
            # the connection survives rejected verbs
            assert client.request("quick_start", {"query": "ur5-mock"})["name"] == "ur5-mock"


def test_service_list_entries_and_kind_filter(demo_store):
    service = RegistryService(demo_store)
    all_entries = service.call("list_entries")["entries"]
    assert [e["name"] for e in all_entries] == sorted(e["name"] for e in all_entries)
    robots = service.call("list_entries", {"kind": "robot"})["entries"]
    assert [e["name"] for e in robots] == ["ur5-mock"]
    assert robots[0]["spec"]["loop_hz"] == 20.0


def test_service_not_found_carries_near_misses(demo_store):
    with RegistryQueryServer(demo_store) as server:
        with RegistryServiceClient(server.host, server.port) as client:
            with pytest.raises(NotFound) as err:
                client.request("lookup_policy", {"query": "pi-zero"})
            assert isinstance(err.value.near_misses, tuple)


def test_service_bad_request(demo_store):
    service = RegistryService(demo_store)
    response = service.dispatch(["not", "a", "map"])
    assert response["ok"] is False
    assert response["error"]["type"] == "BadRequest"
    response = service.dispatch({"verb": "lookup_policy", "params": {"query": 7}})
    assert response["error"]["type"] == "BadRequest"


def _mutate_queries(store, count, seed):
    rng = random.Random(seed)
    names = [e.name for e in store.snapshot()]
    urls = [e.source_url for e in store.snapshot()]
    queries = []
    for _ in range(count):
        base = rng.choice(names + urls)
        roll = rng.random()
        if roll < 0.25:
            base = base.upper()
        elif roll < 0.5:
            base = base.lower() + str(rng.randrange(10))
        elif roll < 0.6:
            base = "https://github.com/fork-org/" + base.split("/")[-1] + ".git"
        elif roll < 0.7:
            base = base.replace("-", "_")
        queries.append(base)
    return queries


def test_ten_thousand_query_determinism(demo_store):
    service = RegistryService(demo_store)
    queries = _mutate_queries(demo_store, 10_000, seed=0xA11CE)

    def run_all():
        out = []
        for q in queries:
            response = service.dispatch({"verb": "lookup_benchmark", "params": {"query": q}})
            if response["ok"]:
                out.append((q, response["result"]["tier"], response["result"]["entry"]["name"]))
            else:
                out.append((q, "error", response["error"]["type"]))
        return out

    first = run_all()
    second = run_all()
    assert first == second

    with RegistryQueryServer(demo_store) as server:
        with RegistryServiceClient(server.host, server.port) as client:
            for q, tier, name in first[:200]:
                try:
                    remote = client.request("lookup_benchmark", {"query": q})
                    assert (tier, name) == (remote["tier"], remote["entry"]["name"])
                except (NotFound, Ambiguous) as exc:
                    assert tier == "error"
                    assert name == type(exc).__name__
