"""Minimal neural-network stack for the hidden models.

Dense/ReLU MLPs by default, with an optional Conv2D + AvgPool2D path.
Storage is float32 (tensors, weight files, images); compute runs in
float64 so finite-difference gradient checks hold at tight tolerance.
"""

from maestro.nn.data import Dataset, gen_synthetic, load_idx, save_idx
from maestro.nn.net import (
    ModelParams,
    accuracy,
    forward,
    init_params,
    loss_and_input_gradient,
    predict_probs,
    softmax,
)
from maestro.nn.spec import AvgPool2D, Conv2D, Dense, Flatten, ModelSpec, ReLU
from maestro.nn.train import TrainConfig, sgd_train
from maestro.nn.weights_io import load_weights, save_weights

__all__ = [
    "AvgPool2D",
    "Conv2D",
    "Dataset",
    "Dense",
    "Flatten",
    "ModelParams",
    "ModelSpec",
    "ReLU",
    "TrainConfig",
    "accuracy",
    "forward",
    "gen_synthetic",
    "init_params",
    "load_idx",
    "load_weights",
    "loss_and_input_gradient",
    "predict_probs",
    "save_idx",
    "save_weights",
    "sgd_train",
    "softmax",
]
