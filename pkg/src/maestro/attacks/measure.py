"""Raw attack metrics: accuracy drop, stealth, queries, runtime."""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from maestro.attacks.oracle import ModelOracle
from maestro.attacks.types import AttackResult
from maestro.errors import ProtocolError

BALL_TOLERANCE = 1e-6

# An attack callable: (oracle, images, labels) -> AttackResult
Attack = Callable[[ModelOracle, np.ndarray, np.ndarray], AttackResult]


def l2_distances(x: np.ndarray, xp: np.ndarray) -> np.ndarray:
    """Per-sample Euclidean distance on flattened pixels, in float64."""
    diff = np.asarray(x, dtype=np.float64) - np.asarray(xp, dtype=np.float64)
    return np.sqrt((diff * diff).sum(axis=1))


def validate_perturbation(x: np.ndarray, perturbed: np.ndarray, epsilon: float) -> None:
    """Enforce the ball and box constraints on a returned batch."""
    perturbed = np.asarray(perturbed)
    if perturbed.shape != x.shape:
        raise ProtocolError(f"perturbed shape {perturbed.shape} != input shape {x.shape}")
    if not np.all(np.isfinite(perturbed)):
        raise ProtocolError("perturbed batch contains non-finite values")
    if perturbed.min() < -BALL_TOLERANCE or perturbed.max() > 1.0 + BALL_TOLERANCE:
        raise ProtocolError("perturbed pixels leave the [0, 1] box")
    linf = np.abs(perturbed.astype(np.float64) - x.astype(np.float64)).max() if len(x) else 0.0
    if linf > epsilon + BALL_TOLERANCE:
        raise ProtocolError(f"perturbation L-inf {linf:.6g} exceeds epsilon {epsilon}")


def measure_attack(
    oracle_factory: Callable[[], ModelOracle],
    attack: Attack,
    images: np.ndarray,
    labels: np.ndarray,
    epsilon: float,
    timer: Callable[[], float] = time.perf_counter,
) -> dict[str, float]:
    """Run one attack on a fresh oracle and report raw metrics.

    Clean accuracy is measured outside the query meter so baselines do not
    distort efficiency scores; the meters in the report are exactly what the
    attack spent.
    """
    oracle = oracle_factory()
    labels = np.asarray(labels)
    clean_acc = float(np.mean(oracle.evaluate_unmetered(images) == labels))
    start = timer()
    result = attack(oracle, images, labels)
    runtime = timer() - start
    validate_perturbation(images, result.perturbed, epsilon)
    adv_acc = float(np.mean(oracle.evaluate_unmetered(result.perturbed) == labels))
    return {
        "clean_acc": clean_acc,
        "adv_acc": adv_acc,
        "mean_l2": float(l2_distances(images, result.perturbed).mean()),
        "queries": float(oracle.predict_count),
        "gradient_queries": float(oracle.gradient_count),
        "runtime_s": runtime,
    }
