"""IL vs RL classification of a benchmark spec.

Primary criterion: does step() return a meaningful reward? The spec's
reward_structure field answers that directly, except for the
borderline family of benchmarks that expose a reward for
compatibility but are conventionally evaluated under imitation
metrics; those are detected by marker words in success_criterion and
decided by secondary cues instead. Secondary cues describe the target
repository (algorithm imports, offline datasets, training configs)
and come in through extra_cues, since a spec alone cannot see them;
a declared training entrypoint counts as one cue.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..contracts.specs import BenchmarkSpec

REGIMES = ("IL", "RL_dispatcher", "RL_scaffold")

# Words in success_criterion that mark conventional imitation-style
# evaluation despite a reward being present.
_IL_MARKERS = {"il", "imitation", "demonstration", "demonstrations", "demo", "demos"}

KNOWN_RL_CUES = (
    "rl_algo_imports",
    "offline_rl_dataset",
    "rl_training_config",
    "reward_shaping",
    "training_entrypoint",
)


@dataclass(frozen=True)
class ILRLVerdict:
    regime: str
    primary_signal: bool
    cues_used: tuple[str, ...]

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.regime != "IL" and not self.primary_signal and len(self.cues_used) < 2:
            raise ValueError("an RL regime needs the primary signal or at least two cues")


def _is_borderline(spec: BenchmarkSpec) -> bool:
    words = set(re.findall(r"[a-z]+", spec.success_criterion.lower()))
    return bool(words & _IL_MARKERS)


def classify_il_rl(spec: BenchmarkSpec, extra_cues: tuple[str, ...] = ()) -> ILRLVerdict:
    reward_present = spec.reward_structure in ("dense", "sparse")
    if not reward_present:
        return ILRLVerdict(regime="IL", primary_signal=False, cues_used=())

    cues = [cue for cue in extra_cues if cue in KNOWN_RL_CUES]
    if spec.has_training_entrypoint and "training_entrypoint" not in cues:
        cues.append("training_entrypoint")
    cues_tuple = tuple(sorted(cues))

    if _is_borderline(spec):
        # Reward exists for compatibility only; trust it just when two
        # independent cues also point at RL.
        if len(cues_tuple) >= 2:
            regime = "RL_dispatcher" if spec.has_training_entrypoint else "RL_scaffold"
            return ILRLVerdict(regime=regime, primary_signal=False, cues_used=cues_tuple)
        return ILRLVerdict(regime="IL", primary_signal=False, cues_used=cues_tuple)

    regime = "RL_dispatcher" if spec.has_training_entrypoint else "RL_scaffold"
    return ILRLVerdict(regime=regime, primary_signal=True, cues_used=cues_tuple)
