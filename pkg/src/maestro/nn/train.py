"""Plain SGD training loop with deterministic init and shuffle streams."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from maestro.errors import InputError
from maestro.nn.data import Dataset
from maestro.nn.net import ModelParams, _loss_and_grads, init_params
from maestro.nn.spec import ModelSpec
from maestro.rng import Rng, derive_seed

# Hook signature: (params, batch_x, batch_y) -> (batch_x', batch_y'),
# applied before each SGD step (adversarial training plugs in here).
BatchHook = Callable[[ModelParams, np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float
    epochs: int
    batch_size: int
    seed: int

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise InputError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise InputError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 0:
            raise InputError(f"epochs must be >= 0, got {self.epochs}")


def sgd_train(
    spec: ModelSpec,
    data: Dataset,
    cfg: TrainConfig,
    batch_hook: BatchHook | None = None,
    timer: Callable[[], float] = time.perf_counter,
) -> ModelParams:
    """Train from He init; bit-deterministic given (spec, data, cfg.seed).

    The init and shuffle RNG streams are derived separately from the seed, so
    a batch hook may consume randomness without disturbing either stream.
    """
    if len(data.images) == 0:
        raise InputError("cannot train on an empty dataset")
    params = init_params(spec, cfg.seed)
    shuffle_rng = Rng(derive_seed(cfg.seed, "shuffle"))
    n = len(data.images)
    lr = np.float64(cfg.learning_rate)
    for _ in range(cfg.epochs):
        order = shuffle_rng.shuffle_index(n)
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            bx, by = data.images[idx], data.labels[idx]
            if batch_hook is not None:
                bx, by = batch_hook(params, bx, by)
            _, _, grads = _loss_and_grads(params, bx, by)
            for widx, (dw, db) in grads.items():
                w64 = params.weights[widx].astype(np.float64) - lr * dw
                b64 = params.weights[widx + 1].astype(np.float64) - lr * db
                params.weights[widx] = w64.astype(np.float32)
                params.weights[widx + 1] = b64.astype(np.float32)
    return params
