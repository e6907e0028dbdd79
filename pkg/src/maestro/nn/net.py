"""Forward/backward passes, loss, and accuracy for the layer chain.

Parameters and activations are stored as float32; all arithmetic runs in
float64 so analytic gradients agree with central finite differences to
well under the 1e-3 acceptance tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from maestro.errors import DimensionError, InputError, NumericError
from maestro.nn.spec import AvgPool2D, Conv2D, Dense, Flatten, ModelSpec, ReLU
from maestro.rng import Rng, derive_seed

WEIGHT_FORMAT_VERSION = 1


@dataclass
class ModelParams:
    """Weights for every parameterized layer, in layer order (W then b each)."""

    spec: ModelSpec
    weights: list[np.ndarray] = field(default_factory=list)
    version: int = WEIGHT_FORMAT_VERSION

    def copy(self) -> "ModelParams":
        return ModelParams(self.spec, [w.copy() for w in self.weights], self.version)


def param_shapes(spec: ModelSpec) -> list[tuple[int, ...]]:
    """Expected weight-tensor shapes for a spec, in storage order."""
    shapes: list[tuple[int, ...]] = []
    shape: tuple[int, ...] = spec.input_dims
    flat: int | None = None
    for layer in spec.layers:
        if isinstance(layer, Dense):
            shapes.append((flat, layer.units))
            shapes.append((layer.units,))
            flat = layer.units
        elif isinstance(layer, Flatten):
            h, w, c = shape
            flat = h * w * c
        elif isinstance(layer, Conv2D):
            h, w, c = shape
            shapes.append((layer.kernel, layer.kernel, c, layer.filters))
            shapes.append((layer.filters,))
            oh = (h - layer.kernel) // layer.stride + 1
            ow = (w - layer.kernel) // layer.stride + 1
            shape = (oh, ow, layer.filters)
        elif isinstance(layer, AvgPool2D):
            h, w, c = shape
            shape = (h // layer.pool, w // layer.pool, c)
    return shapes


def init_params(spec: ModelSpec, seed: int) -> ModelParams:
    """He-style init: weights ~ N(0, 2/fan_in), biases zero, float32 storage."""
    rng = Rng(derive_seed(seed, "init"))
    weights: list[np.ndarray] = []
    for shp in param_shapes(spec):
        if len(shp) == 1:
            weights.append(np.zeros(shp, dtype=np.float32))
        else:
            fan_in = int(np.prod(shp[:-1]))
            scale = np.sqrt(2.0 / fan_in)
            w = rng.normal(int(np.prod(shp))).reshape(shp) * scale
            weights.append(w.astype(np.float32))
    return ModelParams(spec, weights)


def _check_batch(spec: ModelSpec, batch: np.ndarray) -> np.ndarray:
    batch = np.asarray(batch)
    if batch.ndim != 2 or batch.shape[1] != spec.input_width:
        raise DimensionError(
            f"input: batch rows must have width {spec.input_width}, got shape {tuple(batch.shape)}"
        )
    return batch.astype(np.float64)


def _conv_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int) -> np.ndarray:
    n, h, width, _ = x.shape
    kh, kw, _, cout = w.shape
    oh = (h - kh) // stride + 1
    ow = (width - kw) // stride + 1
    out = np.tile(b, (n, oh, ow, 1))
    for ki in range(kh):
        for kj in range(kw):
            patch = x[:, ki : ki + oh * stride : stride, kj : kj + ow * stride : stride, :]
            out += np.einsum("nijc,cf->nijf", patch, w[ki, kj])
    return out


def _conv_backward(x, w, stride, grad):
    n, h, width, _ = x.shape
    kh, kw, _, _ = w.shape
    oh, ow = grad.shape[1], grad.shape[2]
    dx = np.zeros_like(x)
    dw = np.zeros_like(w)
    for ki in range(kh):
        for kj in range(kw):
            patch = x[:, ki : ki + oh * stride : stride, kj : kj + ow * stride : stride, :]
            dw[ki, kj] = np.einsum("nijc,nijf->cf", patch, grad)
            dx[:, ki : ki + oh * stride : stride, kj : kj + ow * stride : stride, :] += np.einsum(
                "nijf,cf->nijc", grad, w[ki, kj]
            )
    db = grad.sum(axis=(0, 1, 2))
    return dx, dw, db


def _forward_trace(params: ModelParams, batch: np.ndarray):
    """Run the chain in float64, recording each layer's input for backward."""
    spec = params.spec
    x = _check_batch(spec, batch)
    h, w, c = spec.input_dims
    a = x.reshape(len(x), h, w, c)
    trace = []
    widx = 0
    for i, layer in enumerate(spec.layers):
        name = f"layer {i} ({type(layer).__name__})"
        if isinstance(layer, Dense):
            wgt = params.weights[widx].astype(np.float64)
            bias = params.weights[widx + 1].astype(np.float64)
            if a.ndim != 2 or a.shape[1] != wgt.shape[0]:
                raise DimensionError(f"{name}: expected width {wgt.shape[0]}, got {a.shape}")
            trace.append(("dense", a, widx))
            a = a @ wgt + bias
            widx += 2
        elif isinstance(layer, ReLU):
            trace.append(("relu", a, None))
            a = np.maximum(a, 0.0)
        elif isinstance(layer, Flatten):
            trace.append(("flatten", a.shape, None))
            a = a.reshape(len(a), -1)
        elif isinstance(layer, Conv2D):
            wgt = params.weights[widx].astype(np.float64)
            bias = params.weights[widx + 1].astype(np.float64)
            if a.ndim != 4 or a.shape[3] != wgt.shape[2]:
                raise DimensionError(f"{name}: expected {wgt.shape[2]} channels, got {a.shape}")
            trace.append(("conv", (a, layer.stride), widx))
            a = _conv_forward(a, wgt, bias, layer.stride)
            widx += 2
        elif isinstance(layer, AvgPool2D):
            p = layer.pool
            trace.append(("pool", (a.shape, p), None))
            n, hh, ww, cc = a.shape
            a = a.reshape(n, hh // p, p, ww // p, p, cc).mean(axis=(2, 4))
        if not np.all(np.isfinite(a)):
            raise NumericError(f"{name}: non-finite activation")
    return a, trace


def _backward(params: ModelParams, trace, dlogits: np.ndarray):
    """Walk the trace in reverse; returns (input grad, param grads by index)."""
    grads: dict[int, list[np.ndarray]] = {}
    g = dlogits
    for kind, saved, widx in reversed(trace):
        if kind == "dense":
            a = saved
            wgt = params.weights[widx].astype(np.float64)
            grads[widx] = [a.T @ g, g.sum(axis=0)]
            g = g @ wgt.T
        elif kind == "relu":
            g = g * (saved > 0.0)
        elif kind == "flatten":
            g = g.reshape(saved)
        elif kind == "conv":
            a, stride = saved
            wgt = params.weights[widx].astype(np.float64)
            g, dw, db = _conv_backward(a, wgt, stride, g)
            grads[widx] = [dw, db]
        elif kind == "pool":
            (n, hh, ww, cc), p = saved
            g = np.repeat(np.repeat(g, p, axis=1), p, axis=2) / (p * p)
    return g, grads


def forward(params: ModelParams, batch: np.ndarray) -> np.ndarray:
    """Logits (n, num_classes) as float32; deterministic for identical inputs."""
    logits, _ = _forward_trace(params, batch)
    return logits.astype(np.float32)


def softmax(logits: np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def predict_probs(params: ModelParams, batch: np.ndarray) -> np.ndarray:
    return softmax(_forward_trace(params, batch)[0])


def _check_labels(spec: ModelSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (len(x),):
        raise InputError(f"labels must have shape ({len(x)},), got {y.shape}")
    if y.min() < 0 or y.max() >= spec.num_classes:
        raise InputError(f"labels must lie in [0, {spec.num_classes})")
    return y


def _loss_and_grads(params: ModelParams, x: np.ndarray, y: np.ndarray):
    x = np.asarray(x)
    y = _check_labels(params.spec, x, y)
    logits, trace = _forward_trace(params, x)
    probs = softmax(logits)
    n = len(x)
    loss = float(-np.log(np.maximum(probs[np.arange(n), y], 1e-300)).mean())
    if not np.isfinite(loss):
        raise NumericError("loss is non-finite")
    dlogits = probs.copy()
    dlogits[np.arange(n), y] -= 1.0
    dlogits /= n
    input_grad, param_grads = _backward(params, trace, dlogits)
    return loss, input_grad.reshape(n, -1), param_grads


def loss_and_input_gradient(params: ModelParams, x: np.ndarray, y: np.ndarray):
    """Mean softmax cross-entropy and its gradient wrt the input batch."""
    loss, input_grad, _ = _loss_and_grads(params, x, y)
    return loss, input_grad.astype(np.float32)


def accuracy(params: ModelParams, images: np.ndarray, labels: np.ndarray) -> float:
    """Fraction of argmax(logits) == label; argmax ties break to the lowest class."""
    if len(images) == 0:
        raise InputError("accuracy over an empty batch is undefined")
    logits = forward(params, images)
    preds = np.argmax(logits, axis=1)  # np.argmax returns the first (lowest) max index
    return float(np.mean(preds == np.asarray(labels)))
