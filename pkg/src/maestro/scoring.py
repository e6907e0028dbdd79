"""Normalized sub-scores and weighted-sum overall scores, in float64.

All arithmetic here is 64-bit and evaluated in a fixed key order so scores
reproduce bit-for-bit across runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from maestro.errors import ConfigError, DegenerateModelError, IncompleteMatchupError, InputError

SIMPLEX_TOLERANCE = 1e-9

DEFAULT_ATTACK_WEIGHTS = {
    "effectiveness": 0.5,
    "stealth": 0.2,
    "query_eff": 0.15,
    "time_eff": 0.15,
}
DEFAULT_DEFENSE_WEIGHTS = {
    "robustness": 0.6,
    "clean_retention": 0.25,
    "time_eff": 0.15,
}

REQUIRED_ATTACK_KEYS = ("clean_acc", "adv_acc", "mean_l2", "queries", "runtime_s")
REQUIRED_DEFENSE_KEYS = ("clean_acc", "overhead_s")


def clamp01(v: float) -> float:
    return min(1.0, max(0.0, v))


@dataclass(frozen=True)
class ScoreWeights:
    """Simplex weights over sub-score names plus normalization budgets."""

    weights: dict[str, float]
    l2_max: float
    query_budget: float = 5000.0
    time_budget: float = 60.0
    overhead_budget: float = 300.0

    def __post_init__(self):
        if any(w < 0 for w in self.weights.values()):
            raise ConfigError("weights must be non-negative", "/weights")
        total = math.fsum(self.weights[k] for k in sorted(self.weights))
        if abs(total - 1.0) > SIMPLEX_TOLERANCE:
            raise ConfigError(f"weights must sum to 1, got {total!r}", "/weights")
        for name, value in (
            ("l2_max", self.l2_max),
            ("query_budget", self.query_budget),
            ("time_budget", self.time_budget),
            ("overhead_budget", self.overhead_budget),
        ):
            if value <= 0:
                raise ConfigError(f"{name} must be > 0, got {value}", f"/{name}")


@dataclass(frozen=True)
class WarWeights:
    attack_weight: float = 0.5
    defense_weight: float = 0.5

    def __post_init__(self):
        if abs(self.attack_weight + self.defense_weight - 1.0) > SIMPLEX_TOLERANCE:
            raise ConfigError("attack_weight + defense_weight must equal 1", "/war_weights")


def default_l2_max(input_width: int) -> float:
    return 0.3 * math.sqrt(input_width)


def attack_subscores(raw: dict[str, float], cfg: ScoreWeights) -> dict[str, float]:
    """Normalize raw attack metrics into [0,1] sub-scores.

    effectiveness: relative accuracy drop; stealth: 1 - mean_l2 / l2_max;
    query_eff and time_eff: leftover fraction of the respective budget.
    """
    clean = raw["clean_acc"]
    if clean <= 0.0:
        raise DegenerateModelError("hidden model has zero clean accuracy; cannot score attacks")
    return {
        "effectiveness": clamp01((clean - raw["adv_acc"]) / clean),
        "stealth": clamp01(1.0 - raw["mean_l2"] / cfg.l2_max),
        "query_eff": clamp01(1.0 - raw["queries"] / cfg.query_budget),
        "time_eff": clamp01(1.0 - raw["runtime_s"] / cfg.time_budget),
    }


def defense_subscores(raw: dict[str, float], cfg: ScoreWeights) -> dict[str, float]:
    """robustness: mean robust accuracy over the suite; clean_retention:
    clean accuracy relative to the undefended baseline, capped at 1."""
    robust_keys = sorted(k for k in raw if k.startswith("robust_acc_"))
    if not robust_keys:
        raise InputError("defense metrics carry no robust_acc_* entries")
    base = raw.get("base_clean_acc", 0.0)
    if base <= 0.0:
        raise DegenerateModelError("undefended baseline has zero clean accuracy")
    robustness = math.fsum(raw[k] for k in robust_keys) / len(robust_keys)
    return {
        "robustness": clamp01(robustness),
        "clean_retention": min(1.0, raw["clean_acc"] / base),
        "time_eff": clamp01(1.0 - raw["overhead_s"] / cfg.overhead_budget),
    }


def overall(subscores: dict[str, float], cfg: ScoreWeights) -> float:
    """Weighted sum in sorted key order (bit-stable under key permutation)."""
    total = 0.0
    for key in sorted(cfg.weights):
        weight = cfg.weights[key]
        if key not in subscores:
            if weight > 0:
                raise ConfigError(f"missing sub-score '{key}' for a positive weight", f"/weights/{key}")
            continue
        total += weight * subscores[key]
    return total


@dataclass
class WarMatrix:
    """Per-matchup overall scores for both sides of every (attack, defense) pair."""

    attackers: list[str]  # submitter ids fielding a qualifying attack
    defenders: list[str]  # submitter ids fielding a qualifying defense
    attack_overall: dict[tuple[str, str], float] = field(default_factory=dict)
    defense_overall: dict[tuple[str, str], float] = field(default_factory=dict)


@dataclass
class WarScore:
    attack_side: float | None
    defense_side: float | None
    combined: float


def war_overall(matrix: WarMatrix, weights: WarWeights) -> dict[str, WarScore]:
    """Uniform-mean side scores per submitter, combined by the war weights.

    A submitter fielding only one side scores that side alone; fielding both
    combines them as attack_weight * attack + defense_weight * defense.
    """
    missing = [
        (a, d)
        for a in matrix.attackers
        for d in matrix.defenders
        if (a, d) not in matrix.attack_overall or (a, d) not in matrix.defense_overall
    ]
    if missing:
        raise IncompleteMatchupError(missing)
    scores: dict[str, WarScore] = {}
    for submitter in sorted(set(matrix.attackers) | set(matrix.defenders)):
        attack_side = None
        if submitter in matrix.attackers:
            vals = [matrix.attack_overall[(submitter, d)] for d in matrix.defenders]
            attack_side = math.fsum(vals) / len(vals)
        defense_side = None
        if submitter in matrix.defenders:
            vals = [matrix.defense_overall[(a, submitter)] for a in matrix.attackers]
            defense_side = math.fsum(vals) / len(vals)
        if attack_side is not None and defense_side is not None:
            combined = weights.attack_weight * attack_side + weights.defense_weight * defense_side
        elif attack_side is not None:
            combined = attack_side
        else:
            combined = defense_side if defense_side is not None else 0.0
        scores[submitter] = WarScore(attack_side, defense_side, combined)
    return scores


def validate_metric_map(kind: str, metrics: dict[str, float]) -> None:
    """Check phase-required keys and finiteness of a metric map."""
    required: tuple[str, ...]
    if kind == "attack":
        required = REQUIRED_ATTACK_KEYS + ("overall_score", "eval_timestamp")
    elif kind == "defense":
        required = REQUIRED_DEFENSE_KEYS + ("overall_score", "eval_timestamp")
        if not any(k.startswith("robust_acc_") for k in metrics):
            raise InputError("defense metric map needs robust_acc_<attack> entries")
    else:
        required = ("overall_score", "eval_timestamp")
    for key in required:
        if key not in metrics:
            raise InputError(f"metric map missing required key '{key}' for {kind} phase")
    for key, value in metrics.items():
        if not math.isfinite(value):
            raise InputError(f"metric '{key}' is non-finite")
