"""Model architecture descriptors and end-to-end shape checking."""

from __future__ import annotations

from dataclasses import dataclass

from maestro.errors import ConfigError, DimensionError


@dataclass(frozen=True)
class Dense:
    units: int


@dataclass(frozen=True)
class ReLU:
    pass


@dataclass(frozen=True)
class Conv2D:
    filters: int
    kernel: int
    stride: int = 1


@dataclass(frozen=True)
class AvgPool2D:
    pool: int


@dataclass(frozen=True)
class Flatten:
    pass


Layer = Dense | ReLU | Conv2D | AvgPool2D | Flatten


@dataclass(frozen=True)
class ModelSpec:
    """Ordered layer chain from (height, width, channels) input to class logits."""

    input_dims: tuple[int, int, int]
    layers: tuple[Layer, ...]
    num_classes: int

    def __post_init__(self):
        if any(d < 1 for d in self.input_dims):
            raise DimensionError(f"input_dims must be >= 1, got {self.input_dims}")
        if self.num_classes < 2:
            raise DimensionError(f"num_classes must be >= 2, got {self.num_classes}")
        out = self.output_width()
        if out != self.num_classes:
            raise DimensionError(
                f"layer chain produces {out} outputs, expected num_classes={self.num_classes}"
            )

    @property
    def input_width(self) -> int:
        h, w, c = self.input_dims
        return h * w * c

    def output_width(self) -> int:
        """Walk the chain validating shapes; raises naming the offending layer."""
        shape: tuple[int, ...] = self.input_dims  # (h, w, c) while spatial
        flat: int | None = None  # width once flattened
        for i, layer in enumerate(self.layers):
            name = f"layer {i} ({type(layer).__name__})"
            if isinstance(layer, Dense):
                if flat is None:
                    raise DimensionError(f"{name}: Dense requires a flat input; add Flatten first")
                if layer.units < 1:
                    raise DimensionError(f"{name}: units must be >= 1")
                flat = layer.units
            elif isinstance(layer, ReLU):
                pass
            elif isinstance(layer, Flatten):
                if flat is not None:
                    raise DimensionError(f"{name}: input is already flat")
                h, w, c = shape
                flat = h * w * c
            elif isinstance(layer, Conv2D):
                if flat is not None:
                    raise DimensionError(f"{name}: Conv2D requires a spatial input")
                h, w, c = shape
                oh = (h - layer.kernel) // layer.stride + 1
                ow = (w - layer.kernel) // layer.stride + 1
                if layer.kernel < 1 or layer.stride < 1 or oh < 1 or ow < 1:
                    raise DimensionError(
                        f"{name}: kernel {layer.kernel} stride {layer.stride} does not fit {h}x{w}"
                    )
                shape = (oh, ow, layer.filters)
            elif isinstance(layer, AvgPool2D):
                if flat is not None:
                    raise DimensionError(f"{name}: AvgPool2D requires a spatial input")
                h, w, c = shape
                if layer.pool < 1 or h % layer.pool or w % layer.pool:
                    raise DimensionError(f"{name}: pool {layer.pool} does not tile {h}x{w}")
                shape = (h // layer.pool, w // layer.pool, c)
            else:
                raise DimensionError(f"{name}: unknown layer kind")
        if flat is None:
            raise DimensionError("layer chain never flattens; logits must be flat")
        return flat

    def to_dict(self) -> dict:
        out = []
        for layer in self.layers:
            if isinstance(layer, Dense):
                out.append({"type": "dense", "units": layer.units})
            elif isinstance(layer, ReLU):
                out.append({"type": "relu"})
            elif isinstance(layer, Conv2D):
                out.append(
                    {"type": "conv2d", "filters": layer.filters, "kernel": layer.kernel, "stride": layer.stride}
                )
            elif isinstance(layer, AvgPool2D):
                out.append({"type": "avgpool2d", "pool": layer.pool})
            else:
                out.append({"type": "flatten"})
        return {"input_dims": list(self.input_dims), "layers": out, "num_classes": self.num_classes}

    @staticmethod
    def from_dict(doc: dict, pointer: str = "/model") -> "ModelSpec":
        try:
            dims = tuple(int(d) for d in doc["input_dims"])
            layers = []
            for i, entry in enumerate(doc["layers"]):
                kind = entry["type"]
                if kind == "dense":
                    layers.append(Dense(int(entry["units"])))
                elif kind == "relu":
                    layers.append(ReLU())
                elif kind == "conv2d":
                    layers.append(
                        Conv2D(int(entry["filters"]), int(entry["kernel"]), int(entry.get("stride", 1)))
                    )
                elif kind == "avgpool2d":
                    layers.append(AvgPool2D(int(entry["pool"])))
                elif kind == "flatten":
                    layers.append(Flatten())
                else:
                    raise ConfigError(f"unknown layer type '{kind}'", f"{pointer}/layers/{i}/type")
            return ModelSpec(dims, tuple(layers), int(doc["num_classes"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad model spec: {exc}", pointer) from exc


def mlp_spec(input_dims: tuple[int, int, int], hidden: tuple[int, ...], num_classes: int) -> ModelSpec:
    """Flatten -> (Dense h, ReLU)* -> Dense num_classes."""
    layers: list[Layer] = [Flatten()]
    for units in hidden:
        layers.append(Dense(units))
        layers.append(ReLU())
    layers.append(Dense(num_classes))
    return ModelSpec(tuple(input_dims), tuple(layers), num_classes)
