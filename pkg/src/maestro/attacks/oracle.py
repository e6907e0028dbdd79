"""Query-metered window through which every attack touches a hidden model."""

from __future__ import annotations

import threading

import numpy as np

from maestro.errors import CapabilityError, QueryBudgetError
from maestro.nn.net import ModelParams, forward, loss_and_input_gradient, predict_probs

WHITE_BOX = "white_box"
BLACK_BOX = "black_box"


class ModelOracle:
    """Prediction/gradient access to a hidden model with per-sample metering.

    A predict (or gradient) request over n samples charges n to the matching
    counter, so batching cannot game the efficiency metric. Counters only
    grow; a fresh oracle is the only way to reset them. One oracle serves
    one evaluation at a time; counter updates are lock-protected so a
    misbehaving multi-threaded client still meters correctly.
    """

    def __init__(
        self,
        params: ModelParams,
        capability: str = WHITE_BOX,
        query_budget: int | None = None,
    ):
        if capability not in (WHITE_BOX, BLACK_BOX):
            raise ValueError(f"unknown capability '{capability}'")
        self._params = params
        self.capability = capability
        self.query_budget = query_budget
        self._predict_count = 0
        self._gradient_count = 0
        self._lock = threading.Lock()

    @property
    def predict_count(self) -> int:
        return self._predict_count

    @property
    def gradient_count(self) -> int:
        return self._gradient_count

    @property
    def num_classes(self) -> int:
        return self._params.spec.num_classes

    @property
    def input_width(self) -> int:
        return self._params.spec.input_width

    def remaining_queries(self) -> int | None:
        if self.query_budget is None:
            return None
        return self.query_budget - self._predict_count

    def predict(self, images: np.ndarray) -> np.ndarray:
        """Softmax probabilities; charges one query unit per sample."""
        n = len(images)
        with self._lock:
            if self.query_budget is not None and self._predict_count + n > self.query_budget:
                raise QueryBudgetError(
                    f"predict of {n} samples would exceed query budget "
                    f"{self.query_budget} (used {self._predict_count})"
                )
            self._predict_count += n
        return predict_probs(self._params, images)

    def gradient(self, images: np.ndarray, labels: np.ndarray):
        """Loss and input gradient; white-box only, metered separately."""
        if self.capability != WHITE_BOX:
            raise CapabilityError("gradient access requires a white-box oracle")
        with self._lock:
            self._gradient_count += len(images)
        return loss_and_input_gradient(self._params, images, labels)

    # Harness-side measurement: not metered and not exposed over the wire.
    def evaluate_unmetered(self, images: np.ndarray) -> np.ndarray:
        return np.argmax(forward(self._params, images), axis=1)
