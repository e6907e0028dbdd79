"""White-box gradient attacks: one-step sign method and its iterated form."""

from __future__ import annotations

import time

import numpy as np

from maestro.attacks.oracle import ModelOracle
from maestro.attacks.types import AttackBudget, AttackResult, clip_to_ball
from maestro.errors import AttackTimeout
from maestro.rng import Rng, derive_seed


def _sign_step(origin: np.ndarray, current: np.ndarray, grad: np.ndarray, step: float, epsilon: float):
    # np.sign(0) == 0, the convention used throughout
    cand = current + np.float32(step) * np.sign(grad, dtype=np.float32)
    return clip_to_ball(cand, origin, epsilon)


def fgsm(oracle: ModelOracle, x: np.ndarray, y: np.ndarray, epsilon: float) -> AttackResult:
    """x' = clip(x + eps * sign(dL/dx)); exactly one gradient query per sample."""
    x = np.asarray(x, dtype=np.float32)
    _, grad = oracle.gradient(x, y)
    perturbed = _sign_step(x, x, grad, epsilon, epsilon)
    success = oracle.evaluate_unmetered(perturbed) != np.asarray(y)
    return AttackResult(
        perturbed=perturbed,
        per_sample_success=success,
        queries_used=0,
        gradient_queries_used=len(x),
    )


def pgd(oracle: ModelOracle, x: np.ndarray, y: np.ndarray, budget: AttackBudget) -> AttackResult:
    """Iterated sign steps projected onto the eps-ball and the [0,1] box.

    With iterations=1, step_size=epsilon, and no random start this reduces
    to fgsm bit-for-bit. The optional random start draws uniformly from the
    eps-ball, seeded per sample so runs reproduce.
    """
    x = np.asarray(x, dtype=np.float32)
    current = x
    if budget.random_start and budget.epsilon > 0:
        deltas = np.empty_like(x)
        for i in range(len(x)):
            rng = Rng(derive_seed(budget.seed, f"pgd-start-{i}"))
            deltas[i] = rng.uniform_range(x.shape[1], -budget.epsilon, budget.epsilon).astype(np.float32)
        current = clip_to_ball(x + deltas, x, budget.epsilon)
    deadline = time.monotonic() + budget.time_budget
    gradient_queries = 0
    for _ in range(budget.iterations):
        if time.monotonic() > deadline:
            raise AttackTimeout(
                f"pgd exceeded time budget {budget.time_budget}s",
                partial=AttackResult(
                    perturbed=current,
                    per_sample_success=oracle.evaluate_unmetered(current) != np.asarray(y),
                    queries_used=0,
                    gradient_queries_used=gradient_queries,
                ),
            )
        _, grad = oracle.gradient(current, y)
        gradient_queries += len(x)
        current = _sign_step(x, current, grad, budget.step_size, budget.epsilon)
    success = oracle.evaluate_unmetered(current) != np.asarray(y)
    return AttackResult(
        perturbed=current,
        per_sample_success=success,
        queries_used=0,
        gradient_queries_used=gradient_queries,
    )
