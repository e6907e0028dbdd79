"""Benchmark submissions against hidden models and assemble metric maps."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from maestro.arena.entities import Submission
from maestro.arena.protocol import SubmissionFailure, run_external_attack, run_external_defense
from maestro.arena.store import EventStore
from maestro.attacks.genetic import GaConfig, ga_attack
from maestro.attacks.gradient import fgsm, pgd
from maestro.attacks.measure import measure_attack
from maestro.attacks.oracle import BLACK_BOX, WHITE_BOX, ModelOracle
from maestro.attacks.types import AttackBudget, AttackResult
from maestro.clock import Clock
from maestro.config import JudgeConfig, PhaseConfig
from maestro.defense.adversarial import DefenseConfig, HardenedModel, adversarial_train
from maestro.defense.measure import SuiteAttack, measure_defense
from maestro.errors import FormatError, InputError, MaestroError
from maestro.nn.data import Dataset, gen_synthetic, load_idx, save_idx
from maestro.nn.net import ModelParams, accuracy
from maestro.nn.train import TrainConfig, sgd_train
from maestro.nn.weights_io import load_weights, save_weights
from maestro.rng import derive_seed
from maestro.scoring import attack_subscores, defense_subscores, overall

RAW_ATTACK_KEYS = ("clean_acc", "adv_acc", "mean_l2", "queries", "gradient_queries", "runtime_s")

REFERENCE_ATTACKS = ("fgsm", "pgd", "ga")
REFERENCE_DEFENSES = ("adv_train",)


def validate_payload(kind: str, payload: dict) -> None:
    """Reject malformed payloads at submit time, before anything is stored."""
    if not isinstance(payload, dict):
        raise InputError("payload must be an object")
    pkind = payload.get("kind")
    if pkind == "reference":
        method = payload.get("method")
        allowed = REFERENCE_ATTACKS if kind == "attack" else REFERENCE_DEFENSES
        if method not in allowed:
            raise InputError(f"unknown reference method '{method}' for {kind} phase")
    elif pkind == "external":
        command = payload.get("command")
        if not isinstance(command, list) or not command or not all(isinstance(c, str) for c in command):
            raise InputError("external payload needs a non-empty 'command' list of strings")
        if payload.get("capability", WHITE_BOX) not in (WHITE_BOX, BLACK_BOX):
            raise InputError("capability must be white_box or black_box")
    else:
        raise InputError("payload kind must be 'reference' or 'external'")


class Evaluator:
    """Owns datasets, hidden models, and the per-kind evaluation recipes."""

    def __init__(self, config: JudgeConfig, store: EventStore, clock: Clock):
        self.config = config
        self.store = store
        self.clock = clock
        self._train: Dataset | None = None
        self._eval: Dataset | None = None
        self._hidden: dict[str, list[ModelParams]] = {}
        self._baseline_seconds: dict[str, float] = {}

    # -- data ----------------------------------------------------------------

    def _data_paths(self) -> dict[str, Path]:
        d = self.store.data_dir()
        return {
            "train_images": d / "train-images.idx",
            "train_labels": d / "train-labels.idx",
            "eval_images": d / "eval-images.idx",
            "eval_labels": d / "eval-labels.idx",
        }

    def gen_data(self, force: bool = False) -> dict[str, Path]:
        """Materialize train/eval IDX files (synthetic datasets are generated)."""
        ds = self.config.dataset
        paths = self._data_paths()
        if ds.kind == "idx":
            base = self.config.base_dir
            return {
                "train_images": base / ds.train_images,
                "train_labels": base / ds.train_labels,
                "eval_images": base / ds.eval_images,
                "eval_labels": base / ds.eval_labels,
            }
        if force or not all(p.exists() for p in paths.values()):
            full = gen_synthetic(
                seed=derive_seed(self.config.seed, "dataset"),
                n=ds.train_n + ds.eval_n,
                num_classes=ds.num_classes,
                dims=ds.dims,
                noise_scale=ds.noise_scale,
            )
            train = Dataset(full.images[: ds.train_n], full.labels[: ds.train_n], ds.dims, ds.num_classes)
            evalset = Dataset(full.images[ds.train_n :], full.labels[ds.train_n :], ds.dims, ds.num_classes)
            save_idx(train, paths["train_images"], paths["train_labels"])
            save_idx(evalset, paths["eval_images"], paths["eval_labels"])
            self._train = None
            self._eval = None
        return paths

    def _require_data(self) -> None:
        paths = self._data_paths()
        if self.config.dataset.kind == "synthetic" and not all(p.exists() for p in paths.values()):
            raise InputError("dataset files missing; run gen-data first")

    def train_data(self) -> Dataset:
        if self._train is None:
            self._require_data()
            paths = self.gen_data() if self.config.dataset.kind == "idx" else self._data_paths()
            self._train = load_idx(
                paths["train_images"], paths["train_labels"], self.config.dataset.num_classes
            )
        return self._train

    def eval_data(self) -> Dataset:
        if self._eval is None:
            self._require_data()
            paths = self.gen_data() if self.config.dataset.kind == "idx" else self._data_paths()
            self._eval = load_idx(
                paths["eval_images"], paths["eval_labels"], self.config.dataset.num_classes
            )
        return self._eval

    def attack_subset(self) -> tuple[np.ndarray, np.ndarray]:
        ev = self.eval_data()
        n = min(self.config.attack_eval_samples, len(ev))
        return ev.images[:n], ev.labels[:n]

    # -- hidden models ---------------------------------------------------------

    def train_hidden(self, force: bool = False) -> dict[str, list[Path]]:
        """Train and persist every phase's hidden (or baseline) models."""
        out: dict[str, list[Path]] = {}
        train = self.train_data()
        for phase in self.config.phases.values():
            if phase.kind == "war":
                continue
            mdir = self.store.models_dir(phase.name)
            paths = []
            for i, seed in enumerate(phase.hidden_seeds):
                path = mdir / f"hidden_{i}.weights"
                if force or not path.exists():
                    cfg = TrainConfig(
                        learning_rate=self.config.training.learning_rate,
                        epochs=self.config.training.epochs,
                        batch_size=self.config.training.batch_size,
                        seed=seed,
                    )
                    params = sgd_train(self.config.model, train, cfg)
                    save_weights(params, path)
                paths.append(path)
            out[phase.name] = paths
            self._hidden.pop(phase.name, None)
        return out

    def hidden_models(self, phase: PhaseConfig) -> list[ModelParams]:
        if phase.name not in self._hidden:
            mdir = self.store.models_dir(phase.name)
            models = []
            for i in range(len(phase.hidden_seeds)):
                path = mdir / f"hidden_{i}.weights"
                if not path.exists():
                    raise InputError(
                        f"hidden model {path} missing for phase '{phase.name}'; run train-hidden"
                    )
                models.append(load_weights(path, self.config.model))
            self._hidden[phase.name] = models
        return self._hidden[phase.name]

    # -- attacks ---------------------------------------------------------------

    def _budget_for(self, submission_id: int) -> AttackBudget:
        b = self.config.attack_budget
        return AttackBudget(
            epsilon=b.epsilon,
            step_size=b.step_size,
            iterations=b.iterations,
            query_budget=b.query_budget,
            time_budget=b.time_budget,
            random_start=b.random_start,
            seed=derive_seed(self.config.seed, f"attack-{submission_id}"),
        )

    def _ga_for(self, submission_id: int) -> GaConfig:
        g = self.config.ga
        return GaConfig(
            population=g.population,
            generations=g.generations,
            mutation_scale=g.mutation_scale,
            crossover_rate=g.crossover_rate,
            stealth_weight=g.stealth_weight,
            seed=derive_seed(self.config.seed, f"ga-{submission_id}"),
        )

    def resolve_attack(self, payload: dict, submission_id: int):
        """Payload -> (attack callable, capability)."""
        budget = self._budget_for(submission_id)
        if payload["kind"] == "reference":
            method = payload["method"]
            if method == "fgsm":
                return (lambda o, x, y: fgsm(o, x, y, budget.epsilon)), WHITE_BOX
            if method == "pgd":
                return (lambda o, x, y: pgd(o, x, y, budget)), WHITE_BOX
            ga_cfg = self._ga_for(submission_id)
            return (lambda o, x, y: ga_attack(o, x, y, budget, ga_cfg)), BLACK_BOX
        command = payload["command"]
        capability = payload.get("capability", WHITE_BOX)
        scratch = self.store.scratch_dir(submission_id)
        task = {
            "epsilon": budget.epsilon,
            "step_size": budget.step_size,
            "iterations": budget.iterations,
            "query_budget": budget.query_budget,
            "time_budget": budget.time_budget,
            "random_start": budget.random_start,
            "seed": budget.seed,
            "capability": capability,
        }

        def run_external(oracle: ModelOracle, x: np.ndarray, y: np.ndarray) -> AttackResult:
            perturbed = run_external_attack(command, scratch, oracle, x, y, task)
            success = oracle.evaluate_unmetered(perturbed) != np.asarray(y)
            return AttackResult(
                perturbed=perturbed,
                per_sample_success=success,
                queries_used=oracle.predict_count,
                gradient_queries_used=oracle.gradient_count,
            )

        return run_external, capability

    def measure_attack_on(self, params: ModelParams, payload: dict, submission_id: int):
        """Raw metrics for one attack against one model, fresh oracle."""
        attack, capability = self.resolve_attack(payload, submission_id)
        budget = self._budget_for(submission_id)
        x, y = self.attack_subset()

        def factory() -> ModelOracle:
            return ModelOracle(params, capability=capability, query_budget=budget.query_budget)

        return measure_attack(factory, attack, x, y, budget.epsilon, timer=self.clock.perf)

    def evaluate_attack(self, submission: Submission, phase: PhaseConfig) -> dict[str, float]:
        models = self.hidden_models(phase)
        raws = []
        try:
            for params in models:
                raws.append(self.measure_attack_on(params, submission.payload, submission.id))
        except SubmissionFailure:
            raise
        except MaestroError as exc:
            raise SubmissionFailure(_categorize(exc), str(exc)) from exc
        avg = {key: math.fsum(r[key] for r in raws) / len(raws) for key in RAW_ATTACK_KEYS}
        weights = self.config.score_weights("attack")
        subscores = attack_subscores(avg, weights)
        metrics = dict(avg)
        metrics.update(subscores)
        metrics["overall_score"] = overall(subscores, weights)
        metrics["eval_timestamp"] = self.clock.now()
        return metrics

    # -- defenses ----------------------------------------------------------------

    def baseline_seconds(self, phase: PhaseConfig) -> float:
        """Timing of an identical-config plain training run, cached per phase."""
        if phase.name not in self._baseline_seconds:
            t0 = self.clock.perf()
            sgd_train(self.config.model, self.train_data(), self.config.training)
            self._baseline_seconds[phase.name] = self.clock.perf() - t0
        return self._baseline_seconds[phase.name]

    def _harden(self, submission: Submission, phase: PhaseConfig) -> HardenedModel:
        payload = submission.payload
        if payload["kind"] == "reference":
            train_cfg = TrainConfig(
                learning_rate=self.config.training.learning_rate,
                epochs=self.config.training.epochs,
                batch_size=self.config.training.batch_size,
                seed=derive_seed(self.config.seed, f"defense-{submission.id}"),
            )
            cfg = DefenseConfig(
                inner_attack=self.config.defense_inner_attack,
                inner_budget=self._budget_for(submission.id),
                mix_ratio=self.config.defense_mix_ratio,
                train=train_cfg,
            )
            return adversarial_train(self.config.model, self.train_data(), cfg, timer=self.clock.perf)
        scratch = self.store.scratch_dir(submission.id)
        paths = self.gen_data()
        task = {
            "train_images": str(paths["train_images"]),
            "train_labels": str(paths["train_labels"]),
            "num_classes": self.config.dataset.num_classes,
            "dims": list(self.config.dataset.dims),
            "model": self.config.model.to_dict(),
            "epsilon": self.config.attack_budget.epsilon,
            "output_dir": str(scratch),
            "time_budget": self.config.defense_time_budget,
        }
        t0 = self.clock.perf()
        weights_path = run_external_defense(payload["command"], scratch, task)
        hardening = self.clock.perf() - t0
        try:
            params = load_weights(weights_path, self.config.model)
        except FormatError as exc:
            raise SubmissionFailure("protocol", f"bad weight file: {exc}") from exc
        return HardenedModel(
            params=params,
            hardening_seconds=hardening,
            baseline_seconds=self.baseline_seconds(phase),
            provenance="external",
        )

    def evaluate_defense(self, submission: Submission, phase: PhaseConfig):
        baseline = self.hidden_models(phase)[0]
        ev = self.eval_data()
        base_clean = accuracy(baseline, ev.images, ev.labels)
        try:
            hardened = self._harden(submission, phase)
        except SubmissionFailure:
            raise
        except MaestroError as exc:
            raise SubmissionFailure(_categorize(exc), str(exc)) from exc

        budget = self._budget_for(submission.id)
        ga_cfg = self._ga_for(submission.id)
        suite = [
            SuiteAttack("fgsm", lambda o, x, y: fgsm(o, x, y, budget.epsilon)),
            SuiteAttack("pgd", lambda o, x, y: pgd(o, x, y, budget)),
            SuiteAttack(
                "ga",
                lambda o, x, y: ga_attack(o, x, y, budget, ga_cfg),
                capability=BLACK_BOX,
                query_budget=budget.query_budget,
            ),
        ]
        x, y = self.attack_subset()
        result = measure_defense(hardened, suite, x, y, timer=self.clock.perf)

        weights_path = self.store.models_dir(phase.name) / f"sub_{submission.id}.weights"
        save_weights(hardened.params, weights_path)

        metrics: dict[str, float] = {
            "clean_acc": accuracy(hardened.params, ev.images, ev.labels),
            "base_clean_acc": base_clean,
        }
        for name in sorted(result.robust_acc):
            metrics[f"robust_acc_{name}"] = result.robust_acc[name]
        metrics["overhead_s"] = result.overhead_seconds
        weights = self.config.score_weights("defense")
        subscores = defense_subscores(metrics, weights)
        metrics.update(subscores)
        metrics["overall_score"] = overall(subscores, weights)
        metrics["eval_timestamp"] = self.clock.now()
        artifacts = {"hardened_weights": str(weights_path.relative_to(self.store.root))}
        if result.failed:
            artifacts["failed_suite"] = json.dumps(result.failed)
        return metrics, artifacts


def _categorize(exc: MaestroError) -> str:
    from maestro.errors import AttackTimeout, CapabilityError, ProtocolError, QueryBudgetError

    if isinstance(exc, QueryBudgetError):
        return "budget"
    if isinstance(exc, AttackTimeout):
        return "timeout"
    if isinstance(exc, (ProtocolError, CapabilityError, FormatError)):
        return "protocol"
    return "crash"
