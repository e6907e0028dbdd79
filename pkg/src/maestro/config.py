"""Judge configuration: one JSON document drives phases, budgets, weights,
board semantics, and the deterministic clock. Validation errors carry a
JSON pointer to the offending field."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from maestro.attacks.genetic import GaConfig
from maestro.attacks.types import AttackBudget
from maestro.clock import Clock, make_clock
from maestro.errors import ConfigError
from maestro.nn.spec import ModelSpec, mlp_spec
from maestro.nn.train import TrainConfig
from maestro.scoring import (
    DEFAULT_ATTACK_WEIGHTS,
    DEFAULT_DEFENSE_WEIGHTS,
    ScoreWeights,
    WarWeights,
    default_l2_max,
)

CONFIG_VERSION = 1
ENV_CONFIG = "MAESTRO_CONFIG"

FAR_FUTURE = 4102444800.0  # 2100-01-01; effectively "no deadline"


@dataclass(frozen=True)
class DatasetConfig:
    kind: str = "synthetic"  # "synthetic" | "idx"
    num_classes: int = 10
    dims: tuple[int, int, int] = (8, 8, 1)
    train_n: int = 1200
    eval_n: int = 400
    noise_scale: float = 0.12
    # for kind == "idx": operator-provided files
    train_images: str | None = None
    train_labels: str | None = None
    eval_images: str | None = None
    eval_labels: str | None = None


@dataclass(frozen=True)
class PhaseConfig:
    name: str
    kind: str  # "attack" | "defense" | "war"
    deadline: float = FAR_FUTURE
    hidden_seeds: tuple[int, ...] = ()
    sources: dict[str, str] = field(default_factory=dict)  # war: {"attack": ..., "defense": ...}
    top_k: int | None = None


@dataclass(frozen=True)
class SubmitterConfig:
    id: str
    display_name: str
    kind: str = "individual"
    members: tuple[str, ...] = ()


@dataclass(frozen=True)
class MetricOverride:
    name: str
    fields: dict


@dataclass
class JudgeConfig:
    base_dir: Path
    store_dir: Path
    seed: int
    clock_doc: dict
    dataset: DatasetConfig
    model: ModelSpec
    training: TrainConfig
    attack_eval_samples: int
    attack_budget: AttackBudget
    ga: GaConfig
    defense_inner_attack: str
    defense_mix_ratio: float
    defense_time_budget: float
    attack_weights: dict[str, float]
    defense_weights: dict[str, float]
    budgets: dict[str, float]
    war_weights: WarWeights
    phases: dict[str, PhaseConfig]
    submitters: list[SubmitterConfig]
    auto_evaluate: bool
    board_overrides: dict[str, list[MetricOverride]]

    def make_clock(self) -> Clock:
        return make_clock(self.clock_doc)

    def score_weights(self, kind: str) -> ScoreWeights:
        weights = self.attack_weights if kind == "attack" else self.defense_weights
        l2_max = self.budgets.get("l2_max") or default_l2_max(self.model.input_width)
        return ScoreWeights(
            weights=dict(weights),
            l2_max=l2_max,
            query_budget=self.budgets.get("query_budget", 5000.0),
            time_budget=self.budgets.get("time_budget", 60.0),
            overhead_budget=self.budgets.get("overhead_budget", 300.0),
        )


def _expect(doc: dict, key: str, kind, pointer: str, default=None, required=False):
    if key not in doc:
        if required:
            raise ConfigError(f"missing required field '{key}'", f"{pointer}/{key}")
        return default
    value = doc[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(
            f"field '{key}' must be {getattr(kind, '__name__', kind)}, got {type(value).__name__}",
            f"{pointer}/{key}",
        )
    return value


def _parse_dataset(doc: dict) -> DatasetConfig:
    p = "/dataset"
    kind = _expect(doc, "kind", str, p, default="synthetic")
    if kind not in ("synthetic", "idx"):
        raise ConfigError(f"dataset kind must be synthetic or idx, got '{kind}'", f"{p}/kind")
    dims = tuple(_expect(doc, "dims", list, p, default=[8, 8, 1]))
    if len(dims) != 3 or any(not isinstance(d, int) or d < 1 for d in dims):
        raise ConfigError("dims must be three positive integers", f"{p}/dims")
    cfg = DatasetConfig(
        kind=kind,
        num_classes=_expect(doc, "num_classes", int, p, default=10),
        dims=dims,  # type: ignore[arg-type]
        train_n=_expect(doc, "train_n", int, p, default=1200),
        eval_n=_expect(doc, "eval_n", int, p, default=400),
        noise_scale=_expect(doc, "noise_scale", float, p, default=0.12),
        train_images=_expect(doc, "train_images", str, p),
        train_labels=_expect(doc, "train_labels", str, p),
        eval_images=_expect(doc, "eval_images", str, p),
        eval_labels=_expect(doc, "eval_labels", str, p),
    )
    if kind == "idx":
        for name in ("train_images", "train_labels", "eval_images", "eval_labels"):
            if getattr(cfg, name) is None:
                raise ConfigError(f"idx dataset requires '{name}'", f"{p}/{name}")
    return cfg


def _parse_phase(doc: dict, index: int) -> PhaseConfig:
    p = f"/phases/{index}"
    name = _expect(doc, "name", str, p, required=True)
    kind = _expect(doc, "kind", str, p, required=True)
    if kind not in ("attack", "defense", "war"):
        raise ConfigError(f"phase kind must be attack, defense, or war, got '{kind}'", f"{p}/kind")
    deadline = _expect(doc, "deadline", float, p, default=FAR_FUTURE)
    if not math.isfinite(deadline):
        raise ConfigError("deadline must be finite", f"{p}/deadline")
    seeds = tuple(_expect(doc, "hidden_seeds", list, p, default=[]))
    sources = _expect(doc, "sources", dict, p, default={})
    if kind == "war":
        for side in ("attack", "defense"):
            if side not in sources:
                raise ConfigError(f"war phase needs sources/{side}", f"{p}/sources/{side}")
    elif not seeds:
        raise ConfigError("attack/defense phases need at least one hidden seed", f"{p}/hidden_seeds")
    top_k = _expect(doc, "top_k", int, p)
    if top_k is not None and top_k < 1:
        raise ConfigError("top_k must be >= 1 when given", f"{p}/top_k")
    return PhaseConfig(name, kind, deadline, seeds, dict(sources), top_k)


def _parse_weights(doc: dict | None, defaults: dict[str, float], pointer: str) -> dict[str, float]:
    if doc is None:
        return dict(defaults)
    out = {}
    for key, value in doc.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError("weight values must be numbers", f"{pointer}/{key}")
        out[key] = float(value)
    return out


def load_config(path: str | os.PathLike) -> JudgeConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", "")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}", "")
    return parse_config(doc, base_dir=path.parent)


def parse_config(doc: dict, base_dir: Path) -> JudgeConfig:
    version = _expect(doc, "config_version", int, "", required=True)
    if version != CONFIG_VERSION:
        raise ConfigError(f"unsupported config_version {version}", "/config_version")
    seed = _expect(doc, "seed", int, "", default=20240601)
    dataset = _parse_dataset(_expect(doc, "dataset", dict, "", default={}))

    model_doc = _expect(doc, "model", dict, "", default={})
    if "layers" in model_doc:
        spec = ModelSpec.from_dict(
            {
                "input_dims": model_doc.get("input_dims", list(dataset.dims)),
                "layers": model_doc["layers"],
                "num_classes": model_doc.get("num_classes", dataset.num_classes),
            }
        )
    else:
        hidden = tuple(model_doc.get("hidden", [64, 32]))
        spec = mlp_spec(dataset.dims, hidden, dataset.num_classes)

    tr = _expect(doc, "training", dict, "", default={})
    training = TrainConfig(
        learning_rate=_expect(tr, "learning_rate", float, "/training", default=0.05),
        epochs=_expect(tr, "epochs", int, "/training", default=20),
        batch_size=_expect(tr, "batch_size", int, "/training", default=32),
        seed=seed,
    )

    ae = _expect(doc, "attack_eval", dict, "", default={})
    attack_budget = AttackBudget(
        epsilon=_expect(ae, "epsilon", float, "/attack_eval", default=0.2),
        step_size=_expect(ae, "step_size", float, "/attack_eval", default=0.05),
        iterations=_expect(ae, "iterations", int, "/attack_eval", default=10),
        query_budget=_expect(ae, "query_budget", int, "/attack_eval", default=5000),
        time_budget=_expect(ae, "time_budget", float, "/attack_eval", default=60.0),
        random_start=_expect(ae, "random_start", bool, "/attack_eval", default=False),
        seed=seed,
    )
    samples = _expect(ae, "samples", int, "/attack_eval", default=16)

    ga_doc = _expect(doc, "ga", dict, "", default={})
    ga = GaConfig(
        population=_expect(ga_doc, "population", int, "/ga", default=20),
        generations=_expect(ga_doc, "generations", int, "/ga", default=30),
        mutation_scale=_expect(ga_doc, "mutation_scale", float, "/ga"),
        crossover_rate=_expect(ga_doc, "crossover_rate", float, "/ga", default=0.7),
        stealth_weight=_expect(ga_doc, "stealth_weight", float, "/ga", default=0.1),
        seed=seed,
    )

    de = _expect(doc, "defense", dict, "", default={})
    defense_inner = _expect(de, "inner_attack", str, "/defense", default="pgd")
    if defense_inner not in ("fgsm", "pgd"):
        raise ConfigError("defense inner_attack must be fgsm or pgd", "/defense/inner_attack")
    mix_ratio = _expect(de, "mix_ratio", float, "/defense", default=0.5)
    if not 0.0 <= mix_ratio <= 1.0:
        raise ConfigError("mix_ratio must lie in [0, 1]", "/defense/mix_ratio")
    defense_time_budget = _expect(de, "time_budget", float, "/defense", default=300.0)

    sw = _expect(doc, "score_weights", dict, "", default={})
    attack_weights = _parse_weights(sw.get("attack"), DEFAULT_ATTACK_WEIGHTS, "/score_weights/attack")
    defense_weights = _parse_weights(sw.get("defense"), DEFAULT_DEFENSE_WEIGHTS, "/score_weights/defense")
    budgets_doc = _expect(sw, "budgets", dict, "/score_weights", default={})
    budgets = {
        "l2_max": _expect(budgets_doc, "l2_max", float, "/score_weights/budgets"),
        "query_budget": _expect(budgets_doc, "query_budget", float, "/score_weights/budgets", default=5000.0),
        "time_budget": _expect(budgets_doc, "time_budget", float, "/score_weights/budgets", default=60.0),
        "overhead_budget": _expect(budgets_doc, "overhead_budget", float, "/score_weights/budgets", default=300.0),
    }

    ww = _expect(doc, "war_weights", dict, "", default={})
    war_weights = WarWeights(
        attack_weight=_expect(ww, "attack_weight", float, "/war_weights", default=0.5),
        defense_weight=_expect(ww, "defense_weight", float, "/war_weights", default=0.5),
    )

    phase_docs = _expect(doc, "phases", list, "", default=None)
    if phase_docs is None:
        phase_docs = [
            {"name": "attack", "kind": "attack", "hidden_seeds": [101, 102]},
            {"name": "defense", "kind": "defense", "hidden_seeds": [201]},
            {"name": "war", "kind": "war", "sources": {"attack": "attack", "defense": "defense"}},
        ]
    phases: dict[str, PhaseConfig] = {}
    for i, pd in enumerate(phase_docs):
        phase = _parse_phase(pd, i)
        if phase.name in phases:
            raise ConfigError(f"duplicate phase name '{phase.name}'", f"/phases/{i}/name")
        phases[phase.name] = phase
    for name, phase in phases.items():
        for side, source in phase.sources.items():
            if source not in phases:
                raise ConfigError(f"unknown source phase '{source}'", f"/phases/{name}/sources/{side}")

    submitters = []
    for i, sd in enumerate(_expect(doc, "submitters", list, "", default=[])):
        sid = _expect(sd, "id", str, f"/submitters/{i}", required=True)
        submitters.append(
            SubmitterConfig(
                id=sid,
                display_name=_expect(sd, "display_name", str, f"/submitters/{i}", default=sid),
                kind=_expect(sd, "kind", str, f"/submitters/{i}", default="individual"),
                members=tuple(_expect(sd, "members", list, f"/submitters/{i}", default=[])),
            )
        )

    board = _expect(doc, "board", dict, "", default={})
    overrides: dict[str, list[MetricOverride]] = {}
    for kind, entries in _expect(board, "metrics", dict, "/board", default={}).items():
        if not isinstance(entries, list):
            raise ConfigError("board metric overrides must be lists", f"/board/metrics/{kind}")
        overrides[kind] = [
            MetricOverride(name=e["name"], fields={k: v for k, v in e.items() if k != "name"})
            for e in entries
        ]

    store_dir = Path(_expect(doc, "store_dir", str, "", default="store"))
    if not store_dir.is_absolute():
        store_dir = base_dir / store_dir

    return JudgeConfig(
        base_dir=base_dir,
        store_dir=store_dir,
        seed=seed,
        clock_doc=_expect(doc, "clock", dict, "", default={"mode": "wall"}),
        dataset=dataset,
        model=spec,
        training=training,
        attack_eval_samples=samples,
        attack_budget=attack_budget,
        ga=ga,
        defense_inner_attack=defense_inner,
        defense_mix_ratio=mix_ratio,
        defense_time_budget=defense_time_budget,
        attack_weights=attack_weights,
        defense_weights=defense_weights,
        budgets=budgets,
        war_weights=war_weights,
        phases=phases,
        submitters=submitters,
        auto_evaluate=_expect(board, "auto_evaluate", bool, "/board", default=True),
        board_overrides=overrides,
    )


def resolve_config_path(flag_value: str | None) -> str:
    path = flag_value or os.environ.get(ENV_CONFIG)
    if not path:
        raise ConfigError(
            f"no config given: pass --config or set {ENV_CONFIG}", ""
        )
    return path
