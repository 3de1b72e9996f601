"""Loss-producing trainer callbacks for the L3-RL smoke tier.

The default stub is plumbing-level, not a learner: loss_k = 1/(k+1)
plus seeded uniform noise of amplitude 1e-3, which gives a strictly
convincing downward least-squares slope over 100 steps. The fault
variants exist for negative tests of the tier criterion.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

TrainerFn = Callable[[int], float]

NOISE_AMPLITUDE = 1e-3


def default_trainer(seed: int = 0) -> TrainerFn:
    rng = np.random.default_rng(seed)

    def step(k: int) -> float:
        return 1.0 / (k + 1) + float(rng.uniform(-NOISE_AMPLITUDE, NOISE_AMPLITUDE))

    return step


def nan_loss_trainer(seed: int = 0, nan_at: int = 50) -> TrainerFn:
    healthy = default_trainer(seed)

    def step(k: int) -> float:
        if k == nan_at:
            return math.nan
        return healthy(k)

    return step


def increasing_loss_trainer(seed: int = 0) -> TrainerFn:
    rng = np.random.default_rng(seed)

    def step(k: int) -> float:
        return 0.01 * k + float(rng.uniform(-NOISE_AMPLITUDE, NOISE_AMPLITUDE))

    return step
