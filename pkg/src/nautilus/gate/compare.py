"""Spec comparison: bucket decision and adapter plan compilation.

Pure function of the two specs and the synonym table; touches no
network or filesystem. Observation matching searches for an injective
assignment of policy keys onto env keys with backtracking — a greedy
sweep is not enough, since an early key can take the only source a
later key could use even when a feasible assignment exists.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..contracts.specs import ArraySpec, BenchmarkSpec, PolicySpec, RobotSpec
from .plan import AdapterPlan, chunk_split, dim_pad, dim_slice, image_preprocess, key_rename, make_plan
from .synonyms import DEFAULT_SYNONYMS, SynonymTable

BUCKETS = ("native", "compatible_zero_shot", "incompatible_action")

DEFAULT_MAX_SLICE_GAP = 3


@dataclass(frozen=True)
class CompatReport:
    bucket: str
    plan: AdapterPlan
    reasons: tuple[str, ...]
    blocking: tuple[str, ...] = ()
    dropped_env_keys: tuple[str, ...] = ()

    def __post_init__(self):
        if self.bucket not in BUCKETS:
            raise ValueError(f"unknown bucket {self.bucket!r}")
        if self.bucket == "incompatible_action" and not self.blocking:
            raise ValueError("incompatible_action requires at least one blocking reason")
        if self.bucket == "native" and len(self.plan) != 0:
            raise ValueError("native requires an empty plan")

    def to_dict(self) -> dict:
        return {
            "bucket": self.bucket,
            "plan": self.plan.to_text(),
            "reasons": list(self.reasons),
            "blocking": list(self.blocking),
            "dropped_env_keys": list(self.dropped_env_keys),
        }


@dataclass(frozen=True)
class _Candidate:
    priority: int
    env_key: str
    renamed: bool
    transform: tuple | None  # None | ("image_preprocess",) | ("dim_pad", target)


def _exact(p: ArraySpec, e: ArraySpec) -> bool:
    return p.dtype == e.dtype and tuple(p.shape) == tuple(e.shape)


def _image_feasible(p: ArraySpec, e: ArraySpec) -> bool:
    return (
        e.dtype == "u8"
        and len(e.shape) == 3
        and e.shape[2] == 3
        and p.dtype == "f32"
        and len(p.shape) == 3
        and p.shape[0] == 3
        and p.shape[1] == e.shape[0]
        and p.shape[2] == e.shape[1]
    )


def _pad_feasible(p: ArraySpec, e: ArraySpec) -> bool:
    return p.dtype == e.dtype and len(p.shape) == 1 and len(e.shape) == 1 and e.shape[0] < p.shape[0]


def _candidates_for(
    p_key: str, p_spec: ArraySpec, env_schema: dict[str, ArraySpec], synonyms: SynonymTable
) -> list[_Candidate]:
    found = []
    for e_key in sorted(env_schema):
        e_spec = env_schema[e_key]
        if p_key == e_key:
            renamed = False
        elif synonyms.allows(p_key, e_key):
            renamed = True
        else:
            continue
        base = 2 if renamed else 0
        if _exact(p_spec, e_spec):
            found.append(_Candidate(base, e_key, renamed, None))
        if _image_feasible(p_spec, e_spec):
            found.append(_Candidate(base + 1, e_key, renamed, ("image_preprocess",)))
        if _pad_feasible(p_spec, e_spec):
            found.append(_Candidate(base + 1, e_key, renamed, ("dim_pad", p_spec.shape[0])))
    return sorted(found, key=lambda c: (c.priority, c.env_key))


def _search(order: list[str], candidates: dict[str, list[_Candidate]], used: set, chosen: dict) -> bool:
    if not order:
        return True
    key = order[0]
    for cand in candidates[key]:
        if cand.env_key in used:
            continue
        used.add(cand.env_key)
        chosen[key] = cand
        if _search(order[1:], candidates, used, chosen):
            return True
        used.discard(cand.env_key)
        del chosen[key]
    return False


def compare_specs(
    policy: PolicySpec,
    env: BenchmarkSpec | RobotSpec,
    synonyms: SynonymTable | None = None,
    extra_synonyms: tuple[tuple[str, str], ...] = (),
    max_slice_gap: int = DEFAULT_MAX_SLICE_GAP,
) -> CompatReport:
    table = synonyms if synonyms is not None else DEFAULT_SYNONYMS
    if extra_synonyms:
        table = table.extended(extra_synonyms)

    reasons: list[str] = []
    blocking: list[str] = []
    action_apps = []

    if policy.control_mode != env.control_mode:
        blocking.append(f"control_mode: policy {policy.control_mode} vs env {env.control_mode}")
    else:
        reasons.append(f"control_mode: {policy.control_mode} on both sides")

    if policy.action_dim == env.action_dim:
        reasons.append(f"action_dim: {policy.action_dim} on both sides")
    else:
        gap = policy.action_dim - env.action_dim
        if 0 < gap <= max_slice_gap:
            action_apps.append(dim_slice(env.action_dim))
            reasons.append(
                f"action_dim: policy {policy.action_dim} -> dim_slice(keep={env.action_dim})"
            )
        elif gap > max_slice_gap:
            blocking.append(
                f"action_dim: gap {gap} exceeds the dim_slice bound {max_slice_gap}"
            )
        else:
            blocking.append(
                f"action_dim: policy {policy.action_dim} < env {env.action_dim}, no rule widens actions"
            )

    horizon = getattr(policy, "action_horizon", 1)
    if horizon > 1:
        action_apps.append(chunk_split(horizon, horizon))
        reasons.append(f"action_horizon: {horizon} -> chunk_split(horizon={horizon}, execute={horizon})")

    candidates = {
        p_key: _candidates_for(p_key, policy.obs_schema[p_key], env.obs_schema, table)
        for p_key in sorted(policy.obs_schema)
    }
    for p_key, cands in candidates.items():
        if not cands:
            blocking.append(f"obs key {p_key!r}: no usable source in the env schema")

    chosen: dict[str, _Candidate] = {}
    if not blocking:
        order = sorted(candidates, key=lambda k: (len(candidates[k]), k))
        if not _search(order, candidates, set(), chosen):
            blocking.append(
                "obs keys compete for the same env sources: "
                + ", ".join(sorted(candidates))
            )

    if blocking:
        return CompatReport(
            bucket="incompatible_action",
            plan=AdapterPlan(()),
            reasons=tuple(reasons),
            blocking=tuple(blocking),
        )

    obs_apps = []
    for p_key in sorted(chosen):
        cand = chosen[p_key]
        if cand.renamed:
            obs_apps.append(key_rename(cand.env_key, p_key))
        if cand.transform is None:
            verb = "key_rename" if cand.renamed else "exact match"
            reasons.append(f"obs {p_key} <- {cand.env_key}: {verb}")
        elif cand.transform[0] == "image_preprocess":
            obs_apps.append(image_preprocess(p_key))
            extra = "key_rename + " if cand.renamed else ""
            reasons.append(f"obs {p_key} <- {cand.env_key}: {extra}image_preprocess")
        else:
            obs_apps.append(dim_pad(p_key, cand.transform[1]))
            extra = "key_rename + " if cand.renamed else ""
            reasons.append(f"obs {p_key} <- {cand.env_key}: {extra}dim_pad(target={cand.transform[1]})")

    dropped = tuple(sorted(set(env.obs_schema) - {c.env_key for c in chosen.values()}))
    if dropped:
        reasons.append("env keys projected away: " + ", ".join(dropped))

    plan = make_plan(action_apps + obs_apps)

    native = (
        len(plan) == 0
        and not dropped
        and set(policy.obs_schema) == set(env.obs_schema)
        and all(not c.renamed and c.transform is None for c in chosen.values())
    )
    if native:
        return CompatReport(bucket="native", plan=plan, reasons=tuple(reasons))
    return CompatReport(bucket="compatible_zero_shot", plan=plan, reasons=tuple(reasons), dropped_env_keys=dropped)
