"""Tiered smoke checks: benchmark ladder, trainer stubs, policy lifecycle."""

from .ladder import (
    L1_STEPS,
    L2_STEPS,
    L3_RL_STEPS,
    REWARD_FLATNESS_EPS,
    STATUSES,
    TIERS,
    SmokeFailure,
    SmokeReport,
    TierOutcome,
    run_ladder,
    select_tiers,
)
from .policy_smoke import (
    MODES,
    PROBE_DEADLINE_S,
    STAGES,
    LifecycleFailure,
    PolicySmokeReport,
    StageOutcome,
    run_policy_smoke,
)
from .trainer import (
    NOISE_AMPLITUDE,
    TrainerFn,
    default_trainer,
    increasing_loss_trainer,
    nan_loss_trainer,
)

__all__ = [
    "L1_STEPS",
    "L2_STEPS",
    "L3_RL_STEPS",
    "LifecycleFailure",
    "MODES",
    "NOISE_AMPLITUDE",
    "PROBE_DEADLINE_S",
    "PolicySmokeReport",
    "REWARD_FLATNESS_EPS",
    "STAGES",
    "STATUSES",
    "SmokeFailure",
    "SmokeReport",
    "StageOutcome",
    "TIERS",
    "TierOutcome",
    "TrainerFn",
    "default_trainer",
    "increasing_loss_trainer",
    "nan_loss_trainer",
    "run_ladder",
    "run_policy_smoke",
    "select_tiers",
]
