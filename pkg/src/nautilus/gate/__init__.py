"""Pre-launch compatibility gate: bucket decision, adapter compilation,
IL/RL classification."""

from .adapters import AdapterPair, PlanSpecMismatch, compile_adapter
from .compare import BUCKETS, DEFAULT_MAX_SLICE_GAP, CompatReport, compare_specs
from .ilrl import KNOWN_RL_CUES, REGIMES, ILRLVerdict, classify_il_rl
from .plan import (
    RULE_ORDER,
    AdapterPlan,
    PlanError,
    RuleApplication,
    chunk_split,
    dim_pad,
    dim_slice,
    image_preprocess,
    key_rename,
    make_plan,
)
from .synonyms import DEFAULT_SYNONYM_PAIRS, DEFAULT_SYNONYMS, SynonymTable

__all__ = [
    "AdapterPair",
    "AdapterPlan",
    "BUCKETS",
    "CompatReport",
    "DEFAULT_MAX_SLICE_GAP",
    "DEFAULT_SYNONYM_PAIRS",
    "DEFAULT_SYNONYMS",
    "ILRLVerdict",
    "KNOWN_RL_CUES",
    "PlanError",
    "PlanSpecMismatch",
    "REGIMES",
    "RULE_ORDER",
    "RuleApplication",
    "SynonymTable",
    "chunk_split",
    "classify_il_rl",
    "compare_specs",
    "compile_adapter",
    "dim_pad",
    "dim_slice",
    "image_preprocess",
    "key_rename",
    "make_plan",
]
