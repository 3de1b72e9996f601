"""Exhaustive reference bucketer for spec-compatibility decisions.

Independent of the production gate: for every injective mapping of
policy observation keys onto environment keys it enumerates every rule
set that could reconcile each pair, and derives the bucket from first
principles. Deliberately brute force; only ever run on small specs.
"""

from __future__ import annotations

from itertools import permutations

# Unordered synonym pairs. Must stay in sync with the production
# table's *content*, not its code.
SYNONYM_PAIRS = frozenset(
    frozenset(pair)
    for pair in [
        ("agentview_rgb", "image"),
        ("robot0_eef_pos", "state"),
        ("front_rgb", "image"),
        ("wrist_rgb", "wrist_image"),
        ("eef_pos", "state"),
        ("joint_positions", "qpos"),
    ]
)

MAX_SLICE_GAP = 3


def _synonyms(a: str, b: str) -> bool:
    return frozenset((a, b)) in SYNONYM_PAIRS


def _entry_rule_sets(p_key, p_spec, e_key, e_spec):
    """Every rule set that maps the env entry onto the policy entry.

    Returns a list of frozensets of rule names; empty means the pair is
    irreconcilable. An empty frozenset means the entries match exactly
    under the same key.
    """
    if p_key == e_key:
        base = frozenset()
    elif _synonyms(p_key, e_key):
        base = frozenset({"key_rename"})
    else:
        return []

    options = []
    if p_spec.dtype == e_spec.dtype and tuple(p_spec.shape) == tuple(e_spec.shape):
        options.append(base)
    if (
        e_spec.dtype == "u8"
        and len(e_spec.shape) == 3
        and e_spec.shape[2] == 3
        and p_spec.dtype == "f32"
        and len(p_spec.shape) == 3
        and p_spec.shape[0] == 3
        and p_spec.shape[1] == e_spec.shape[0]
        and p_spec.shape[2] == e_spec.shape[1]
    ):
        options.append(base | {"image_preprocess"})
    if (
        p_spec.dtype == e_spec.dtype
        and len(p_spec.shape) == 1
        and len(e_spec.shape) == 1
        and e_spec.shape[0] < p_spec.shape[0]
    ):
        options.append(base | {"dim_pad"})
    return options


def oracle_bucket(policy, env, max_slice_gap: int = MAX_SLICE_GAP) -> str:
    """Bucket for a (PolicySpec, BenchmarkSpec|RobotSpec) pair."""
    # Action side first: any failure here is terminal.
    if policy.control_mode != env.control_mode:
        return "incompatible_action"
    action_rules = set()
    if policy.action_dim != env.action_dim:
        gap = policy.action_dim - env.action_dim
        if 0 < gap <= max_slice_gap:
            action_rules.add("dim_slice")
        else:
            return "incompatible_action"
    horizon = getattr(policy, "action_horizon", 1)
    if horizon > 1:
        action_rules.add("chunk_split")

    p_keys = sorted(policy.obs_schema)
    e_keys = sorted(env.obs_schema)
    if len(p_keys) > len(e_keys):
        return "incompatible_action"

    feasible = False
    for target in permutations(e_keys, len(p_keys)):
        options = [
            _entry_rule_sets(pk, policy.obs_schema[pk], ek, env.obs_schema[ek])
            for pk, ek in zip(p_keys, target)
        ]
        if all(options):
            feasible = True
            break
    if not feasible:
        return "incompatible_action"

    exact_identity = set(p_keys) == set(e_keys) and all(
        policy.obs_schema[k].dtype == env.obs_schema[k].dtype
        and tuple(policy.obs_schema[k].shape) == tuple(env.obs_schema[k].shape)
        for k in p_keys
    )
    if exact_identity and not action_rules:
        return "native"
    return "compatible_zero_shot"
