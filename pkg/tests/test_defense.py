"""Defense engine: adversarial training and the robustness harness."""

from dataclasses import replace

import numpy as np
import pytest

from maestro.attacks import AttackBudget, ModelOracle, fgsm, pgd
from maestro.attacks.types import AttackResult
from maestro.defense import DefenseConfig, adversarial_train, measure_defense
from maestro.defense.measure import SuiteAttack
from maestro.errors import InputError
from maestro.nn import accuracy, sgd_train


@pytest.fixture
def subset(desk):
    return desk.eval.images[:64], desk.eval.labels[:64]


def pgd_budget() -> AttackBudget:
    return AttackBudget(epsilon=0.2, step_size=0.05, iterations=10, query_budget=None)


class TestAdversarialTrain:
    def test_zero_mix_ratio_matches_plain_training(self, desk):
        cfg = DefenseConfig("pgd", pgd_budget(), mix_ratio=0.0, train=desk.train_cfg)
        hardened = adversarial_train(desk.spec, desk.train, cfg)
        plain = sgd_train(desk.spec, desk.train, desk.train_cfg)
        assert all(np.array_equal(a, b) for a, b in zip(hardened.params.weights, plain.weights))

    def test_same_seed_bit_identical(self, desk):
        cfg = DefenseConfig(
            "fgsm",
            AttackBudget(epsilon=0.1, query_budget=None),
            mix_ratio=0.25,
            train=replace(desk.train_cfg, epochs=2),
        )
        a = adversarial_train(desk.spec, desk.train, cfg)
        b = adversarial_train(desk.spec, desk.train, cfg)
        assert all(np.array_equal(x, y) for x, y in zip(a.params.weights, b.params.weights))

    def test_hardening_improves_pgd_robustness(self, desk, hardened, subset):
        # pinned-seed run pair recorded as the regression bound
        x, y = subset
        budget = pgd_budget()

        def robust_acc(params):
            oracle = ModelOracle(params)
            result = pgd(oracle, x, y, budget)
            return float(np.mean(oracle.evaluate_unmetered(result.perturbed) == y))

        plain_robust = robust_acc(desk.params)
        hard_robust = robust_acc(hardened.params)
        assert hard_robust >= plain_robust + 0.15

    def test_hardened_under_fgsm_beats_undefended(self, desk, hardened, subset):
        x, y = subset

        def fgsm_robust(params):
            oracle = ModelOracle(params)
            result = fgsm(oracle, x, y, 0.2)
            return float(np.mean(oracle.evaluate_unmetered(result.perturbed) == y))

        assert fgsm_robust(hardened.params) > fgsm_robust(desk.params)

    def test_clean_accuracy_stays_close(self, desk, hardened):
        plain = accuracy(desk.params, desk.eval.images, desk.eval.labels)
        hard = accuracy(hardened.params, desk.eval.images, desk.eval.labels)
        assert abs(plain - hard) <= 0.10

    def test_overhead_reported_nonnegative(self, hardened):
        assert hardened.hardening_seconds >= 0.0
        assert hardened.overhead_seconds >= 0.0

    def test_invalid_mix_ratio_rejected(self, desk):
        with pytest.raises(InputError):
            DefenseConfig("pgd", pgd_budget(), mix_ratio=1.5, train=desk.train_cfg)


def _identity_suite_attack(name: str) -> SuiteAttack:
    def run(oracle, images, labels):
        return AttackResult(
            perturbed=images.copy(),
            per_sample_success=np.zeros(len(images), bool),
            queries_used=0,
            gradient_queries_used=0,
        )

    return SuiteAttack(name, run)


class TestMeasureDefense:
    def test_identity_attack_robust_equals_clean(self, hardened, subset):
        x, y = subset
        result = measure_defense(hardened, [_identity_suite_attack("noop")], x, y)
        assert result.robust_acc["noop"] == result.clean_acc

    def test_one_entry_per_suite_attack(self, hardened, subset):
        x, y = subset
        suite = [_identity_suite_attack(f"a{i}") for i in range(3)]
        result = measure_defense(hardened, suite, x, y)
        assert sorted(result.robust_acc) == ["a0", "a1", "a2"]

    def test_empty_suite_rejected(self, hardened, subset):
        x, y = subset
        with pytest.raises(InputError):
            measure_defense(hardened, [], x, y)

    def test_failure_marks_entry_and_keeps_others(self, hardened, subset):
        x, y = subset

        def broken(oracle, images, labels):
            raise InputError("synthetic failure")

        suite = [_identity_suite_attack("ok"), SuiteAttack("bad", broken)]
        result = measure_defense(hardened, suite, x, y)
        assert "ok" in result.robust_acc
        assert "bad" in result.failed and "bad" not in result.robust_acc

    def test_model_not_mutated(self, hardened, subset):
        x, y = subset
        before = [w.copy() for w in hardened.params.weights]
        suite = [SuiteAttack("pgd", lambda o, xx, yy: pgd(o, xx, yy, pgd_budget()))]
        measure_defense(hardened, suite, x, y)
        assert all(np.array_equal(a, b) for a, b in zip(before, hardened.params.weights))
