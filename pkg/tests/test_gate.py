"""Compatibility gate: oracle equivalence, adapters, plans, IL/RL."""

from __future__ import annotations

import builtins
import socket
import struct
import time

import numpy as np
import pytest

from nautilus.contracts import ArraySpec, BenchmarkSpec, ContractViolation, PolicySpec, validate_observation
from nautilus.gate import (
    AdapterPlan,
    ILRLVerdict,
    PlanError,
    PlanSpecMismatch,
    classify_il_rl,
    compare_specs,
    compile_adapter,
    chunk_split,
    dim_pad,
    dim_slice,
    image_preprocess,
    key_rename,
    make_plan,
)
from nautilus.gate.compare import CompatReport
from nautilus.wire import TensorValue

from .gate_oracle import oracle_bucket
from .gate_universe import enumerate_universe, make_env, make_policy, universe_size

# Frozen from the oracle run that predates the production gate: any
# change to either side shows up as drift against these constants.
ORACLE_FROZEN_COUNTS = {"native": 14, "compatible_zero_shot": 253, "incompatible_action": 2278}
ORACLE_FROZEN_SHA256 = "13084ee098f676993c39c60d4602fcbeb8ca4969cbef1a3c20dc36d02aedd6fd"


def conformant_obs(schema: dict[str, ArraySpec], seed: int) -> dict[str, TensorValue]:
    rng = np.random.default_rng(seed)
    out = {}
    for key in sorted(schema):
        spec = schema[key]
        if spec.dtype == "u8":
            arr = rng.integers(0, 256, size=spec.shape, dtype=np.uint8)
        elif spec.dtype in ("i32", "i64"):
            arr = rng.integers(-5, 6, size=spec.shape).astype(spec.dtype.replace("i", "int"))
        elif spec.dtype == "boolean":
            arr = rng.integers(0, 2, size=spec.shape).astype(bool)
        else:
            arr = rng.standard_normal(size=spec.shape).astype(
                np.float32 if spec.dtype == "f32" else np.float64
            )
        out[key] = TensorValue.from_numpy(arr)
    return out


# -- oracle equivalence -------------------------------------------------


def test_universe_matches_frozen_oracle_and_production_agrees():
    import hashlib

    started = time.perf_counter()
    counts = {"native": 0, "compatible_zero_shot": 0, "incompatible_action": 0}
    digest = hashlib.sha256()
    disagreements = []
    total = 0
    for policy, env in enumerate_universe():
        expected = oracle_bucket(policy, env)
        counts[expected] += 1
        digest.update(expected.encode())
        got = compare_specs(policy, env).bucket
        if got != expected:
            disagreements.append((policy.obs_schema.keys(), env.obs_schema.keys(), expected, got))
        total += 1
    elapsed = time.perf_counter() - started

    assert total == universe_size()
    assert counts == ORACLE_FROZEN_COUNTS
    assert digest.hexdigest() == ORACLE_FROZEN_SHA256
    assert disagreements == [], disagreements[:5]
    assert elapsed < 60.0


def test_adapters_validate_over_whole_universe():
    seed = 0
    for policy, env in enumerate_universe():
        report = compare_specs(policy, env)
        if report.bucket != "compatible_zero_shot":
            continue
        seed += 1
        pair = compile_adapter(report.plan, policy, env)
        obs = conformant_obs(env.obs_schema, seed)
        out = pair.obs_transform(obs)
        validate_observation(policy.obs_schema, out)

        horizon = policy.action_horizon
        action_shape = (policy.action_dim,) if horizon == 1 else (horizon, policy.action_dim)
        action = {"actions": TensorValue.from_numpy(np.arange(int(np.prod(action_shape)), dtype=np.float32).reshape(action_shape))}
        adapted = pair.action_transform(action)
        tensor = adapted["actions"]
        assert tensor.shape[-1] == env.action_dim
        np.testing.assert_array_equal(
            tensor.to_numpy(), action["actions"].to_numpy()[..., : env.action_dim]
        )


# -- compare_specs behaviour --------------------------------------------


def test_identical_specs_native_empty_plan():
    policy = make_policy(("agentview_rgb", "state"), 7, "joint", 1)
    env = make_env(("agentview_rgb", "state"), 7, "joint")
    report = compare_specs(policy, env)
    assert report.bucket == "native"
    assert len(report.plan) == 0
    assert report.blocking == ()


def test_rename_plus_image_preprocess_pair():
    policy = PolicySpec(
        obs_schema={"image": ArraySpec("f32", (3, 16, 16)), "state": ArraySpec("f32", (7,))},
        action_dim=7,
    )
    env = BenchmarkSpec(
        obs_schema={"agentview_rgb": ArraySpec("u8", (16, 16, 3)), "robot0_eef_pos": ArraySpec("f32", (7,))},
        action_dim=7,
    )
    report = compare_specs(policy, env)
    assert report.bucket == "compatible_zero_shot"
    lines = report.plan.to_text().splitlines()
    assert lines == [
        "key_rename(from=agentview_rgb, to=image)",
        "key_rename(from=robot0_eef_pos, to=state)",
        "image_preprocess(key=image, layout=HWC->CHW, scale=1/255)",
    ]


def test_control_mode_mismatch_blocks():
    policy = make_policy(("state",), 7, "joint", 1)
    env = make_env(("state",), 7, "eef")
    report = compare_specs(policy, env)
    assert report.bucket == "incompatible_action"
    assert any("control_mode" in line for line in report.blocking)
    assert len(report.plan) == 0


def test_dim_slice_bound():
    assert compare_specs(make_policy(("state",), 10, "joint", 1), make_env(("state",), 7, "joint")).bucket == "compatible_zero_shot"
    assert compare_specs(make_policy(("state",), 10, "joint", 1), make_env(("state",), 4, "joint")).bucket == "incompatible_action"
    assert compare_specs(make_policy(("state",), 4, "joint", 1), make_env(("state",), 7, "joint")).bucket == "incompatible_action"
    # the bound is configurable
    wide = compare_specs(
        make_policy(("state",), 10, "joint", 1), make_env(("state",), 4, "joint"), max_slice_gap=6
    )
    assert wide.bucket == "compatible_zero_shot"
    assert "dim_slice(keep=4)" in wide.plan.to_text()


def test_horizon_forces_chunk_split_out_of_native():
    report = compare_specs(make_policy(("state",), 7, "joint", 4), make_env(("state",), 7, "joint"))
    assert report.bucket == "compatible_zero_shot"
    assert report.plan.chunk_params() == (4, 4)


def test_env_extras_projected_but_not_native():
    report = compare_specs(
        make_policy(("state",), 7, "joint", 1),
        make_env(("state", "agentview_rgb", "image"), 7, "joint"),
    )
    assert report.bucket == "compatible_zero_shot"
    assert report.dropped_env_keys == ("agentview_rgb", "image")
    assert len(report.plan) == 0


def test_missing_rename_source_blocks_with_key_name():
    report = compare_specs(make_policy(("wrist_rgb",), 7, "joint", 1), make_env(("agentview_rgb",), 7, "joint"))
    assert report.bucket == "incompatible_action"
    assert any("wrist_rgb" in line for line in report.blocking)


def test_backtracking_beats_greedy_assignment():
    # Candidate lists (same priority, alphabetical env order):
    #   a: [p, q]    b: [p, r]    c: [r]
    # Fewest-first assigns c -> r, then a tries p first, which starves
    # b; only undoing a's choice finds the valid a->q, b->p pairing.
    vec = ArraySpec("f32", (7,))
    policy = PolicySpec(obs_schema={"a": vec, "b": vec, "c": vec}, action_dim=7)
    env = BenchmarkSpec(obs_schema={"p": vec, "q": vec, "r": vec}, action_dim=7)
    pairs = (("a", "p"), ("a", "q"), ("b", "p"), ("b", "r"), ("c", "r"))
    report = compare_specs(policy, env, extra_synonyms=pairs)
    assert report.bucket == "compatible_zero_shot"
    assert report.plan.to_text().splitlines() == [
        "key_rename(from=p, to=b)",
        "key_rename(from=q, to=a)",
        "key_rename(from=r, to=c)",
    ]


def test_injective_competition_blocks():
    policy = make_policy(("state", "robot0_eef_pos"), 7, "joint", 1)
    env = make_env(("state", "qpos"), 7, "joint")
    report = compare_specs(policy, env)
    assert report.bucket == "incompatible_action"
    assert any("compete" in line or "no usable source" in line for line in report.blocking)


def test_compare_specs_is_pure(monkeypatch):
    def deny(*args, **kwargs):
        raise AssertionError("gate touched the outside world")

    monkeypatch.setattr(socket, "socket", deny)
    monkeypatch.setattr(builtins, "open", deny)
    report = compare_specs(make_policy(("image",), 10, "joint", 4), make_env(("agentview_rgb",), 7, "joint"))
    assert report.bucket == "compatible_zero_shot"


def test_report_invariants_enforced():
    with pytest.raises(ValueError):
        CompatReport(bucket="incompatible_action", plan=AdapterPlan(()), reasons=(), blocking=())
    with pytest.raises(ValueError):
        CompatReport(bucket="native", plan=make_plan([dim_slice(4)]), reasons=())


# -- plans ---------------------------------------------------------------


def test_plan_text_round_trip():
    plan = make_plan(
        [
            image_preprocess("image"),
            dim_pad("state", 10),
            key_rename("agentview_rgb", "image"),
            chunk_split(4, 2),
            dim_slice(7),
        ]
    )
    text = plan.to_text()
    assert AdapterPlan.from_text(text) == plan
    assert [app.rule for app in plan] == [
        "key_rename",
        "chunk_split",
        "dim_slice",
        "dim_pad",
        "image_preprocess",
    ]
    assert AdapterPlan.from_text("(none)") == AdapterPlan(())
    assert AdapterPlan(()).to_text() == "(none)"


def test_plan_rejects_wrong_order_and_duplicates():
    with pytest.raises(PlanError):
        AdapterPlan((dim_slice(7), key_rename("a", "b")))
    with pytest.raises(PlanError):
        make_plan([dim_pad("state", 10), dim_pad("state", 12)])
    with pytest.raises(PlanError):
        RuleApplication = type(key_rename("a", "b"))
        RuleApplication("transmogrify", ())


def test_plan_parse_rejects_garbage():
    with pytest.raises(PlanError):
        AdapterPlan.from_text("dim_slice[keep=7]")
    with pytest.raises(PlanError):
        AdapterPlan.from_text("dim_slice(keep 7)")


# -- adapters ------------------------------------------------------------


def test_image_preprocess_matches_per_pixel_oracle():
    raw = np.array(
        [
            [[0, 1, 2], [3, 4, 5]],
            [[128, 129, 130], [253, 254, 255]],
        ],
        dtype=np.uint8,
    )
    assert raw.shape == (2, 2, 3)
    policy = PolicySpec(obs_schema={"image": ArraySpec("f32", (3, 2, 2))}, action_dim=4)
    env = BenchmarkSpec(obs_schema={"image": ArraySpec("u8", (2, 2, 3))}, action_dim=4)
    report = compare_specs(policy, env)
    assert report.bucket == "compatible_zero_shot"
    pair = compile_adapter(report.plan, policy, env)

    out = pair.obs_transform({"image": TensorValue.from_numpy(raw)})["image"].to_numpy()
    assert out.dtype == np.float32
    assert out.shape == (3, 2, 2)
    for c in range(3):
        for h in range(2):
            for w in range(2):
                expected = np.float32(raw[h, w, c]) / np.float32(255.0)
                got = out[c, h, w]
                assert struct.pack("<f", got) == struct.pack("<f", expected), (c, h, w)


def test_image_preprocess_applies_mean_std():
    raw = np.full((2, 2, 3), 255, dtype=np.uint8)
    policy = PolicySpec(
        obs_schema={"image": ArraySpec("f32", (3, 2, 2))},
        action_dim=4,
        image_mean=(0.5, 0.25, 0.0),
        image_std=(0.5, 0.5, 1.0),
    )
    env = BenchmarkSpec(obs_schema={"image": ArraySpec("u8", (2, 2, 3))}, action_dim=4)
    pair = compile_adapter(compare_specs(policy, env).plan, policy, env)
    out = pair.obs_transform({"image": TensorValue.from_numpy(raw)})["image"].to_numpy()
    np.testing.assert_allclose(out[0], (1.0 - 0.5) / 0.5)
    np.testing.assert_allclose(out[1], (1.0 - 0.25) / 0.5)
    np.testing.assert_allclose(out[2], 1.0)


def test_dim_pad_appends_trailing_zeros():
    policy = PolicySpec(obs_schema={"state": ArraySpec("f32", (10,))}, action_dim=4)
    env = BenchmarkSpec(obs_schema={"state": ArraySpec("f32", (7,))}, action_dim=4)
    report = compare_specs(policy, env)
    pair = compile_adapter(report.plan, policy, env)
    vec = np.arange(7, dtype=np.float32) + 1
    out = pair.obs_transform({"state": TensorValue.from_numpy(vec)})["state"].to_numpy()
    np.testing.assert_array_equal(out[:7], vec)
    np.testing.assert_array_equal(out[7:], np.zeros(3, dtype=np.float32))


def test_empty_plan_is_identity():
    policy = make_policy(("state",), 7, "joint", 1)
    env = make_env(("state",), 7, "joint")
    pair = compile_adapter(compare_specs(policy, env).plan, policy, env)
    obs = conformant_obs(env.obs_schema, seed=3)
    out = pair.obs_transform(obs)
    assert out == obs
    action = {"actions": TensorValue.from_numpy(np.zeros(7, dtype=np.float32)), "note": "hi"}
    assert pair.action_transform(action) == action


def test_obs_transform_rejects_missing_source():
    policy = make_policy(("image", "state"), 7, "joint", 1)
    env = make_env(("agentview_rgb", "state"), 7, "joint")
    pair = compile_adapter(compare_specs(policy, env).plan, policy, env)
    with pytest.raises(ContractViolation) as err:
        pair.obs_transform({"state": TensorValue.zeros("f32", (7,))})
    assert "image" in str(err.value)


def test_compile_adapter_checks_plan_against_specs():
    policy = make_policy(("state",), 7, "joint", 1)
    env = make_env(("state",), 7, "joint")
    with pytest.raises(PlanSpecMismatch):
        compile_adapter(make_plan([key_rename("nope", "state")]), policy, env)
    with pytest.raises(PlanSpecMismatch):
        compile_adapter(make_plan([dim_pad("state", 12)]), policy, env)
    with pytest.raises(PlanSpecMismatch):
        compile_adapter(make_plan([dim_slice(9)]), policy, env)


# -- IL/RL ---------------------------------------------------------------


def _bench(reward, entrypoint=False, criterion="env success flag"):
    return BenchmarkSpec(
        obs_schema={"state": ArraySpec("f32", (7,))},
        action_dim=7,
        reward_structure=reward,
        has_training_entrypoint=entrypoint,
        success_criterion=criterion,
    )


def test_ilrl_primary_criterion():
    assert classify_il_rl(_bench("none")).regime == "IL"
    assert classify_il_rl(_bench("dense", entrypoint=True)).regime == "RL_dispatcher"
    assert classify_il_rl(_bench("sparse", entrypoint=False)).regime == "RL_scaffold"
    verdict = classify_il_rl(_bench("dense", entrypoint=True))
    assert verdict.primary_signal is True


def test_ilrl_borderline_needs_two_cues():
    borderline = _bench("dense", criterion="conventional imitation evaluation success")
    assert classify_il_rl(borderline).regime == "IL"
    one_cue = classify_il_rl(borderline, extra_cues=("rl_algo_imports",))
    assert one_cue.regime == "IL"
    two_cues = classify_il_rl(borderline, extra_cues=("rl_algo_imports", "offline_rl_dataset"))
    assert two_cues.regime == "RL_scaffold"
    assert two_cues.primary_signal is False
    assert len(two_cues.cues_used) == 2


def test_ilrl_borderline_entrypoint_counts_as_cue():
    borderline = _bench("sparse", entrypoint=True, criterion="IL demo success rate")
    verdict = classify_il_rl(borderline, extra_cues=("rl_training_config",))
    assert verdict.regime == "RL_dispatcher"
    assert "training_entrypoint" in verdict.cues_used


def test_ilrl_unknown_cues_ignored():
    borderline = _bench("dense", criterion="imitation eval")
    verdict = classify_il_rl(borderline, extra_cues=("vibes", "more_vibes"))
    assert verdict.regime == "IL"
    assert verdict.cues_used == ()


def test_ilrl_verdict_invariant():
    with pytest.raises(ValueError):
        ILRLVerdict(regime="RL_scaffold", primary_signal=False, cues_used=("rl_algo_imports",))
