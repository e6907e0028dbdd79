"""Adversarial training: mix freshly attacked samples into every batch."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from maestro.attacks.gradient import fgsm, pgd
from maestro.attacks.oracle import ModelOracle
from maestro.attacks.types import AttackBudget
from maestro.errors import InputError
from maestro.nn.data import Dataset
from maestro.nn.net import ModelParams
from maestro.nn.spec import ModelSpec
from maestro.nn.train import TrainConfig, sgd_train
from maestro.rng import derive_seed


@dataclass(frozen=True)
class DefenseConfig:
    inner_attack: str  # "fgsm" | "pgd"
    inner_budget: AttackBudget
    mix_ratio: float  # fraction of each batch replaced by adversarial versions
    train: TrainConfig

    def __post_init__(self):
        if self.inner_attack not in ("fgsm", "pgd"):
            raise InputError(f"inner_attack must be fgsm or pgd, got '{self.inner_attack}'")
        if not 0.0 <= self.mix_ratio <= 1.0:
            raise InputError(f"mix_ratio must lie in [0, 1], got {self.mix_ratio}")

    def digest(self) -> str:
        doc = {
            "inner_attack": self.inner_attack,
            "epsilon": self.inner_budget.epsilon,
            "step_size": self.inner_budget.step_size,
            "iterations": self.inner_budget.iterations,
            "random_start": self.inner_budget.random_start,
            "mix_ratio": self.mix_ratio,
            "learning_rate": self.train.learning_rate,
            "epochs": self.train.epochs,
            "batch_size": self.train.batch_size,
            "seed": self.train.seed,
        }
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class HardenedModel:
    params: ModelParams
    hardening_seconds: float
    baseline_seconds: float
    provenance: str

    @property
    def overhead_seconds(self) -> float:
        return max(0.0, self.hardening_seconds - self.baseline_seconds)


def adversarial_train(
    spec: ModelSpec,
    data: Dataset,
    cfg: DefenseConfig,
    timer: Callable[[], float] = time.perf_counter,
) -> HardenedModel:
    """Harden by regenerating adversarial examples against the live weights.

    For every batch, floor(mix_ratio * batch) leading samples are replaced
    with inner-attack perturbations before the SGD step; examples are fresh
    each epoch. With mix_ratio 0 no attack (or attack randomness) runs, so
    the result is bit-identical to plain sgd_train on the same seed. An
    identical-configuration plain run is timed alongside as the overhead
    baseline.
    """
    step_counter = 0

    def hook(params: ModelParams, bx: np.ndarray, by: np.ndarray):
        nonlocal step_counter
        step_counter += 1
        k = int(cfg.mix_ratio * len(bx))
        if k == 0:
            return bx, by
        oracle = ModelOracle(params)
        if cfg.inner_attack == "fgsm":
            result = fgsm(oracle, bx[:k], by[:k], cfg.inner_budget.epsilon)
        else:
            inner = AttackBudget(
                epsilon=cfg.inner_budget.epsilon,
                step_size=cfg.inner_budget.step_size,
                iterations=cfg.inner_budget.iterations,
                query_budget=None,
                time_budget=cfg.inner_budget.time_budget,
                random_start=cfg.inner_budget.random_start,
                seed=derive_seed(cfg.train.seed, f"inner-{step_counter}"),
            )
            result = pgd(oracle, bx[:k], by[:k], inner)
        mixed = bx.copy()
        mixed[:k] = result.perturbed
        return mixed, by

    t0 = timer()
    params = sgd_train(spec, data, cfg.train, batch_hook=hook)
    hardening_seconds = timer() - t0

    t0 = timer()
    sgd_train(spec, data, cfg.train)
    baseline_seconds = timer() - t0

    return HardenedModel(
        params=params,
        hardening_seconds=hardening_seconds,
        baseline_seconds=baseline_seconds,
        provenance=cfg.digest(),
    )
