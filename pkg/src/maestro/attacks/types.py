"""Budget and result containers shared by all attacks."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from maestro.errors import InputError


@dataclass(frozen=True)
class AttackBudget:
    """Perturbation and resource limits for one attack run."""

    epsilon: float
    step_size: float = 0.05
    iterations: int = 10
    query_budget: int | None = 5000
    time_budget: float = 60.0
    random_start: bool = False
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise InputError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.step_size <= 0:
            raise InputError(f"step_size must be > 0, got {self.step_size}")
        if self.iterations < 1:
            raise InputError(f"iterations must be >= 1, got {self.iterations}")
        if self.query_budget is not None and self.query_budget < 0:
            raise InputError(f"query_budget must be >= 0, got {self.query_budget}")
        if self.step_size > self.epsilon > 0.0:
            warnings.warn(
                f"step_size {self.step_size} exceeds epsilon {self.epsilon}; "
                "iterates will bounce off the ball boundary",
                stacklevel=2,
            )


@dataclass
class AttackResult:
    """What an attack hands back to the harness."""

    perturbed: np.ndarray  # float32, same shape as the input batch
    per_sample_success: np.ndarray  # bool, prediction flipped off the label
    queries_used: int
    gradient_queries_used: int
    runtime_seconds: float = 0.0
    budget_exhausted: bool = False

    def success_rate(self) -> float:
        return float(np.mean(self.per_sample_success)) if len(self.per_sample_success) else 0.0


def clip_to_ball(candidate: np.ndarray, origin: np.ndarray, epsilon: float) -> np.ndarray:
    """Project onto the L-inf epsilon ball around origin, then the [0,1] box."""
    eps = np.float32(epsilon)
    out = np.clip(candidate, origin - eps, origin + eps)
    return np.clip(out, np.float32(0.0), np.float32(1.0))
