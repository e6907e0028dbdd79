"""Robustness measurement: run an attack suite against a hardened model."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from maestro.attacks.measure import Attack
from maestro.attacks.oracle import BLACK_BOX, WHITE_BOX, ModelOracle
from maestro.defense.adversarial import HardenedModel
from maestro.errors import InputError, MaestroError


@dataclass(frozen=True)
class SuiteAttack:
    name: str
    run: Attack
    capability: str = WHITE_BOX
    query_budget: int | None = None


@dataclass
class DefenseResult:
    clean_acc: float
    robust_acc: dict[str, float]
    overhead_seconds: float
    failed: dict[str, str] = field(default_factory=dict)


def measure_defense(
    hardened: HardenedModel,
    attack_suite: list[SuiteAttack],
    images: np.ndarray,
    labels: np.ndarray,
    timer: Callable[[], float] = time.perf_counter,
) -> DefenseResult:
    """Robust accuracy per suite attack, each on a fresh oracle.

    A failing suite attack marks its own entry and leaves the rest intact;
    the hardened model is never mutated.
    """
    if not attack_suite:
        raise InputError("attack suite must not be empty")
    labels = np.asarray(labels)
    probe = ModelOracle(hardened.params)
    clean_acc = float(np.mean(probe.evaluate_unmetered(images) == labels))
    robust: dict[str, float] = {}
    failed: dict[str, str] = {}
    for entry in attack_suite:
        oracle = ModelOracle(
            hardened.params,
            capability=entry.capability if entry.capability in (WHITE_BOX, BLACK_BOX) else WHITE_BOX,
            query_budget=entry.query_budget,
        )
        try:
            result = entry.run(oracle, images, labels)
            robust[entry.name] = float(
                np.mean(oracle.evaluate_unmetered(result.perturbed) == labels)
            )
        except MaestroError as exc:
            failed[entry.name] = str(exc)
    return DefenseResult(
        clean_acc=clean_acc,
        robust_acc=robust,
        overhead_seconds=hardened.overhead_seconds,
        failed=failed,
    )
