"""Attack engine: oracle metering, FGSM/PGD/GA behavior, raw metrics."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maestro.attacks import (
    AttackBudget,
    GaConfig,
    ModelOracle,
    fgsm,
    ga_attack,
    l2_distances,
    measure_attack,
    pgd,
)
from maestro.attacks.types import clip_to_ball
from maestro.errors import AttackTimeout, CapabilityError, InputError, QueryBudgetError


@pytest.fixture
def subset(desk):
    return desk.eval.images[:16], desk.eval.labels[:16]


class TestOracle:
    def test_predict_charges_per_sample(self, desk, subset):
        x, _ = subset
        oracle = ModelOracle(desk.params)
        oracle.predict(x[:5])
        oracle.predict(x[:3])
        assert oracle.predict_count == 8
        assert oracle.gradient_count == 0

    def test_gradient_metered_separately(self, desk, subset):
        x, y = subset
        oracle = ModelOracle(desk.params)
        oracle.gradient(x[:4], y[:4])
        assert oracle.gradient_count == 4
        assert oracle.predict_count == 0

    def test_black_box_rejects_gradients(self, desk, subset):
        x, y = subset
        oracle = ModelOracle(desk.params, capability="black_box")
        with pytest.raises(CapabilityError):
            oracle.gradient(x, y)

    def test_budget_enforced(self, desk, subset):
        x, _ = subset
        oracle = ModelOracle(desk.params, query_budget=10)
        oracle.predict(x[:10])
        with pytest.raises(QueryBudgetError):
            oracle.predict(x[:1])
        assert oracle.predict_count == 10  # failed request not charged

    def test_counters_monotone(self, desk, subset):
        x, _ = subset
        oracle = ModelOracle(desk.params)
        seen = []
        for k in (1, 4, 2):
            oracle.predict(x[:k])
            seen.append(oracle.predict_count)
        assert seen == sorted(seen) and seen[-1] == 7


class TestFgsm:
    def test_zero_epsilon_returns_input(self, desk, subset):
        x, y = subset
        result = fgsm(ModelOracle(desk.params), x, y, 0.0)
        assert np.array_equal(result.perturbed, x)

    def test_sign_step_pixel_math(self):
        # pixel 0.5, gradient +2.3, eps 0.1 -> 0.6; pixel 0.95, grad +1 -> 1.0 clipped
        from maestro.attacks.gradient import _sign_step

        x = np.array([[0.5, 0.95]], np.float32)
        grad = np.array([[2.3, 1.0]], np.float32)
        out = _sign_step(x, x, grad, 0.1, 0.1)
        assert out[0, 0] == pytest.approx(0.6, abs=1e-7)
        assert out[0, 1] == 1.0

    def test_exactly_one_gradient_query_per_sample(self, desk, subset):
        x, y = subset
        oracle = ModelOracle(desk.params)
        result = fgsm(oracle, x, y, 0.2)
        assert oracle.gradient_count == len(x)
        assert oracle.predict_count == 0
        assert result.gradient_queries_used == len(x)
        assert result.queries_used == 0

    def test_black_box_oracle_rejected(self, desk, subset):
        x, y = subset
        with pytest.raises(CapabilityError):
            fgsm(ModelOracle(desk.params, capability="black_box"), x, y, 0.2)

    def test_ball_and_box_invariants(self, desk, subset):
        x, y = subset
        result = fgsm(ModelOracle(desk.params), x, y, 0.2)
        assert np.abs(result.perturbed - x).max() <= 0.2 + 1e-6
        assert result.perturbed.min() >= 0.0 and result.perturbed.max() <= 1.0


class TestPgd:
    def test_linf_projection_example(self):
        # candidate 0.75 around x0=0.5 with eps 0.1 -> 0.6
        out = clip_to_ball(np.array([[0.75]], np.float32), np.array([[0.5]], np.float32), 0.1)
        assert out[0, 0] == pytest.approx(0.6, abs=1e-7)

    def test_single_step_equals_fgsm_bit_exact(self, desk, subset):
        x, y = subset
        a = fgsm(ModelOracle(desk.params), x, y, 0.2)
        budget = AttackBudget(epsilon=0.2, step_size=0.2, iterations=1, random_start=False)
        b = pgd(ModelOracle(desk.params), x, y, budget)
        assert np.array_equal(a.perturbed, b.perturbed)

    def test_every_iterate_within_constraints(self, desk, subset):
        x, y = subset
        budget = AttackBudget(epsilon=0.15, step_size=0.05, iterations=7, random_start=True, seed=4)
        result = pgd(ModelOracle(desk.params), x, y, budget)
        assert np.abs(result.perturbed - x).max() <= 0.15 + 1e-6
        assert result.perturbed.min() >= 0.0 and result.perturbed.max() <= 1.0

    def test_random_start_is_seeded(self, desk, subset):
        x, y = subset
        budget = AttackBudget(epsilon=0.2, step_size=0.05, iterations=2, random_start=True, seed=9)
        a = pgd(ModelOracle(desk.params), x, y, budget)
        b = pgd(ModelOracle(desk.params), x, y, budget)
        assert np.array_equal(a.perturbed, b.perturbed)

    def test_timeout_carries_partial_result(self, desk, subset):
        x, y = subset
        budget = AttackBudget(epsilon=0.2, step_size=0.05, iterations=5, time_budget=0.0)
        with pytest.raises(AttackTimeout) as err:
            pgd(ModelOracle(desk.params), x, y, budget)
        partial = err.value.partial
        assert partial is not None and partial.perturbed.shape == x.shape

    def test_step_larger_than_epsilon_warns(self):
        with pytest.warns(UserWarning, match="step_size"):
            AttackBudget(epsilon=0.1, step_size=0.5)


class TestGa:
    def test_black_box_contract(self, desk, subset):
        x, y = subset
        oracle = ModelOracle(desk.params, capability="black_box", query_budget=20000)
        result = ga_attack(oracle, x, y, AttackBudget(epsilon=0.3, query_budget=20000), GaConfig(seed=5))
        assert result.gradient_queries_used == 0
        assert oracle.gradient_count == 0
        assert result.queries_used == oracle.predict_count
        assert result.queries_used <= 20000

    def test_early_stop_spends_population_per_generation(self, desk):
        # single sample that generation 0 already misclassifies (eps large)
        x = desk.eval.images[:1]
        y = desk.eval.labels[:1]
        oracle = ModelOracle(desk.params, capability="black_box")
        cfg = GaConfig(population=10, generations=50, stealth_weight=0.0, seed=3)
        result = ga_attack(oracle, x, y, AttackBudget(epsilon=0.9, query_budget=None), cfg)
        assert result.per_sample_success[0]
        assert result.queries_used % 10 == 0  # P per generation elapsed
        assert result.queries_used == 10  # success in generation 0

    def test_budget_exhaustion_returns_best_so_far(self, desk, subset):
        x, y = subset
        oracle = ModelOracle(desk.params, capability="black_box", query_budget=30)
        cfg = GaConfig(population=20, generations=10, seed=6)
        result = ga_attack(oracle, x, y, AttackBudget(epsilon=0.05, query_budget=30), cfg)
        assert result.budget_exhausted
        assert result.queries_used <= 30
        assert result.perturbed.shape == x.shape

    def test_ball_constraint(self, desk, subset):
        x, y = subset
        oracle = ModelOracle(desk.params, capability="black_box")
        result = ga_attack(oracle, x, y, AttackBudget(epsilon=0.3, query_budget=None), GaConfig(seed=7))
        assert np.abs(result.perturbed - x).max() <= 0.3 + 1e-6
        assert result.perturbed.min() >= 0.0 and result.perturbed.max() <= 1.0

    def test_config_invariants(self):
        with pytest.raises(InputError):
            GaConfig(population=1)
        with pytest.raises(InputError):
            GaConfig(generations=0)
        with pytest.raises(InputError):
            GaConfig(stealth_weight=-1.0)


class TestMeasure:
    def test_identity_attack(self, desk, subset):
        x, y = subset

        def identity(oracle, images, labels):
            from maestro.attacks.types import AttackResult

            return AttackResult(
                perturbed=images.copy(),
                per_sample_success=np.zeros(len(images), bool),
                queries_used=0,
                gradient_queries_used=0,
            )

        raw = measure_attack(lambda: ModelOracle(desk.params), identity, x, y, epsilon=0.2)
        assert raw["adv_acc"] == raw["clean_acc"]
        assert raw["mean_l2"] == 0.0
        assert raw["queries"] == 0.0

    def test_l2_three_four_five(self):
        x = np.array([[0.0, 0.0]], np.float32)
        xp = np.array([[0.3, 0.4]], np.float32)
        assert l2_distances(x, xp)[0] == pytest.approx(0.5, rel=1e-6)

    def test_fgsm_halves_accuracy(self, desk, subset):
        x, y = subset
        raw = measure_attack(
            lambda: ModelOracle(desk.params),
            lambda o, xx, yy: fgsm(o, xx, yy, 0.2),
            x, y, epsilon=0.2,
        )
        assert raw["adv_acc"] <= 0.5 * raw["clean_acc"]  # pinned-seed regression bound

    def test_out_of_ball_result_rejected(self, desk, subset):
        x, y = subset

        def cheating(oracle, images, labels):
            from maestro.attacks.types import AttackResult

            return AttackResult(
                perturbed=np.clip(images + 0.5, 0, 1),
                per_sample_success=np.ones(len(images), bool),
                queries_used=0,
                gradient_queries_used=0,
            )

        from maestro.errors import ProtocolError

        with pytest.raises(ProtocolError, match="epsilon"):
            measure_attack(lambda: ModelOracle(desk.params), cheating, x, y, epsilon=0.1)


class TestL2Properties:
    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_metric_axioms_on_random_triples(self, seed):
        from maestro.rng import Rng

        vals = Rng(seed).uniform(12).reshape(3, 4).astype(np.float32)
        a, b, c = vals[0:1], vals[1:2], vals[2:3]
        assert l2_distances(a, a)[0] == 0.0
        assert l2_distances(a, b)[0] == pytest.approx(l2_distances(b, a)[0], rel=1e-9)
        assert l2_distances(a, c)[0] <= l2_distances(a, b)[0] + l2_distances(b, c)[0] + 1e-9


class TestEpsilonZero:
    def test_all_attacks_return_input_unchanged(self, desk, subset):
        x, y = subset
        assert np.array_equal(fgsm(ModelOracle(desk.params), x, y, 0.0).perturbed, x)
        budget = AttackBudget(epsilon=0.0, step_size=0.01, iterations=3)
        assert np.array_equal(pgd(ModelOracle(desk.params), x, y, budget).perturbed, x)
        oracle = ModelOracle(desk.params, capability="black_box")
        ga = ga_attack(oracle, x, y, AttackBudget(epsilon=0.0, query_budget=None),
                       GaConfig(population=4, generations=2, seed=1))
        assert np.array_equal(ga.perturbed, x)
