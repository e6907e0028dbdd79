"""Black-box genetic attack: evolves perturbations using only predict queries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from maestro.attacks.oracle import ModelOracle
from maestro.attacks.types import AttackBudget, AttackResult, clip_to_ball
from maestro.errors import InputError
from maestro.rng import Rng, derive_seed


@dataclass(frozen=True)
class GaConfig:
    population: int = 20
    generations: int = 30
    mutation_scale: float | None = None  # None -> 0.05 * epsilon
    crossover_rate: float = 0.7
    stealth_weight: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise InputError(f"population must be >= 2, got {self.population}")
        if self.generations < 1:
            raise InputError(f"generations must be >= 1, got {self.generations}")
        if self.stealth_weight < 0:
            raise InputError(f"stealth_weight must be >= 0, got {self.stealth_weight}")


def _margins(probs: np.ndarray, label: int) -> np.ndarray:
    """max_{j != label} p_j - p_label; positive iff the label lost the argmax."""
    rival = probs.copy()
    rival[:, label] = -np.inf
    return rival.max(axis=1) - probs[:, label]


def _tournament(rng: Rng, fitness: np.ndarray) -> int:
    a, b = rng.randint(2, len(fitness))
    return int(a if fitness[a] >= fitness[b] else b)


def ga_attack(
    oracle: ModelOracle,
    x: np.ndarray,
    y: np.ndarray,
    budget: AttackBudget,
    cfg: GaConfig,
) -> AttackResult:
    """Per-sample evolution inside the eps-ball.

    Fitness is margin(x') - stealth_weight * L2(x, x'). Each generation
    spends exactly `population` predict queries per sample; selection is
    tournament-of-2 with one elite survivor, uniform crossover, Gaussian
    mutation. Stops on the first misclassified individual, the generation
    limit, or when the shared query budget cannot fund another generation
    (best-so-far is returned with `budget_exhausted` set, never an error).
    """
    x = np.asarray(x, dtype=np.float32)
    y = np.asarray(y, dtype=np.int64)
    n, d = x.shape
    p = cfg.population
    eps = budget.epsilon
    sigma = cfg.mutation_scale if cfg.mutation_scale is not None else 0.05 * eps
    start_queries = oracle.predict_count

    perturbed = x.copy()
    success = np.zeros(n, dtype=bool)
    exhausted = False
    for i in range(n):
        rng = Rng(derive_seed(cfg.seed, f"ga-{i}"))
        origin = x[i]
        label = int(y[i])
        pop = clip_to_ball(
            origin + rng.uniform_range(p * d, -eps, eps).reshape(p, d).astype(np.float32),
            origin,
            eps,
        )
        best = origin
        best_fit = -np.inf
        for _ in range(cfg.generations):
            remaining = oracle.remaining_queries()
            if remaining is not None and remaining < p:
                exhausted = True
                break
            probs = oracle.predict(pop)
            margins = _margins(probs, label)
            dist = np.sqrt(((pop.astype(np.float64) - origin) ** 2).sum(axis=1))
            fitness = margins - cfg.stealth_weight * dist
            gen_best = int(np.argmax(fitness))
            if fitness[gen_best] > best_fit:
                best_fit = float(fitness[gen_best])
                best = pop[gen_best].copy()
            if margins.max() > 0.0:
                winners = np.flatnonzero(margins > 0.0)
                pick = winners[np.argmax(fitness[winners])]
                best = pop[pick].copy()
                success[i] = True
                break
            # next generation: elite + tournament offspring
            children = [pop[gen_best].copy()]
            while len(children) < p:
                p1 = _tournament(rng, fitness)
                p2 = _tournament(rng, fitness)
                child = pop[p1].copy()
                if rng.uniform(1)[0] < cfg.crossover_rate:
                    mask = rng.uniform(d) < 0.5
                    child[mask] = pop[p2][mask]
                child = child + (sigma * rng.normal(d)).astype(np.float32)
                children.append(clip_to_ball(child, origin, eps))
            pop = np.stack(children)
        perturbed[i] = best
        if exhausted:
            break
    return AttackResult(
        perturbed=perturbed,
        per_sample_success=success,
        queries_used=oracle.predict_count - start_queries,
        gradient_queries_used=0,
        budget_exhausted=exhausted,
    )
