"""Shared desk-scale fixtures: one dataset, one trained hidden model, one
hardened model, and an arena factory with pre-trained weights copied in so
each test gets an isolated store without retraining."""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from pathlib import Path

import pytest

from maestro.arena import Arena
from maestro.attacks.types import AttackBudget
from maestro.config import JudgeConfig, parse_config
from maestro.defense.adversarial import DefenseConfig, HardenedModel, adversarial_train
from maestro.nn.data import Dataset, gen_synthetic
from maestro.nn.net import ModelParams
from maestro.nn.spec import ModelSpec, mlp_spec
from maestro.nn.train import TrainConfig, sgd_train

DESK_DIMS = (8, 8, 1)
DESK_CLASSES = 10
DESK_SEED = 42
TRAIN_SEED = 11
TRAIN_N = 1200
EVAL_N = 400

CONFIG_SEED = 20240601


@dataclass
class Desk:
    spec: ModelSpec
    train: Dataset
    eval: Dataset
    params: ModelParams  # plain-trained hidden model
    train_cfg: TrainConfig


@pytest.fixture(scope="session")
def desk() -> Desk:
    spec = mlp_spec(DESK_DIMS, (64, 32), DESK_CLASSES)
    full = gen_synthetic(seed=DESK_SEED, n=TRAIN_N + EVAL_N, num_classes=DESK_CLASSES, dims=DESK_DIMS)
    train = Dataset(full.images[:TRAIN_N], full.labels[:TRAIN_N], DESK_DIMS, DESK_CLASSES)
    evalset = Dataset(full.images[TRAIN_N:], full.labels[TRAIN_N:], DESK_DIMS, DESK_CLASSES)
    cfg = TrainConfig(learning_rate=0.05, epochs=20, batch_size=32, seed=TRAIN_SEED)
    params = sgd_train(spec, train, cfg)
    return Desk(spec=spec, train=train, eval=evalset, params=params, train_cfg=cfg)


@pytest.fixture(scope="session")
def hardened(desk: Desk) -> HardenedModel:
    cfg = DefenseConfig(
        inner_attack="pgd",
        inner_budget=AttackBudget(epsilon=0.2, step_size=0.05, iterations=10, query_budget=None),
        mix_ratio=0.5,
        train=desk.train_cfg,
    )
    return adversarial_train(desk.spec, desk.train, cfg)


def judge_config_doc(store_dir: Path, **overrides) -> dict:
    doc = {
        "config_version": 1,
        "store_dir": str(store_dir),
        "seed": CONFIG_SEED,
        "clock": {"mode": "fixed", "start": 1700000000.0, "step": 0.001},
        "dataset": {
            "kind": "synthetic",
            "num_classes": DESK_CLASSES,
            "dims": list(DESK_DIMS),
            "train_n": TRAIN_N,
            "eval_n": EVAL_N,
        },
        "training": {"learning_rate": 0.05, "epochs": 20, "batch_size": 32},
        "attack_eval": {"samples": 16, "epsilon": 0.2, "step_size": 0.05, "iterations": 10,
                        "query_budget": 20000, "time_budget": 60.0},
        "submitters": [
            {"id": "alice", "display_name": "Alice"},
            {"id": "bob", "display_name": "Bob"},
            {"id": "ali-team", "display_name": "ALI-team", "kind": "team", "members": ["x", "y"]},
        ],
        "phases": [
            {"name": "attack", "kind": "attack", "hidden_seeds": [101, 102], "deadline": 1700000600.0},
            {"name": "defense", "kind": "defense", "hidden_seeds": [201], "deadline": 1700000600.0},
            {"name": "war", "kind": "war", "sources": {"attack": "attack", "defense": "defense"}},
        ],
    }
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(doc.get(key), dict):
            doc[key].update(value)
        else:
            doc[key] = value
    return doc


@pytest.fixture(scope="session")
def seeded_store(tmp_path_factory) -> Path:
    """A store with dataset and hidden models already materialized."""
    root = tmp_path_factory.mktemp("seed-store")
    config = parse_config(judge_config_doc(root / "store"), base_dir=root)
    arena = Arena(config)
    arena.evaluator.gen_data()
    arena.evaluator.train_hidden()
    return root / "store"


@pytest.fixture
def arena_factory(seeded_store: Path, tmp_path: Path):
    """Fresh arenas backed by copies of the pre-trained store."""
    counter = {"n": 0}

    def make(**overrides) -> Arena:
        counter["n"] += 1
        store_dir = tmp_path / f"store{counter['n']}"
        shutil.copytree(seeded_store, store_dir)
        # events are per-test state; only data and models carry over
        for leftover in (store_dir / "events").glob("*.jsonl"):
            leftover.unlink()
        config = parse_config(judge_config_doc(store_dir, **overrides), base_dir=tmp_path)
        return Arena(config)

    return make


@pytest.fixture
def arena(arena_factory) -> Arena:
    return arena_factory()


def make_config(store_dir: Path, **overrides) -> JudgeConfig:
    return parse_config(judge_config_doc(store_dir, **overrides), base_dir=store_dir.parent)
