import random
from fractions import Fraction

import pytest

import oracle
from pottsverify import (
    IndexList,
    ModelError,
    build_model,
    check_positive_covariance,
    check_positive_expectation,
    check_power_sum_gap_recursion,
    check_quadratic,
    covariance,
    power_sum_gap,
    quadratic_decomposition,
    scaled_covariance,
    uniform_scaled_covariance,
)
from pottsverify.generators import (
    random_coupling,
    random_even_index_list,
    random_index_list,
    random_model,
    random_site_subset,
)


class TestFirstInequality:
    def test_pair_value(self, pair_model_q2):
        report = check_positive_expectation(pair_model_q2, IndexList((1, 2)))
        assert report.value == Fraction(1, 8)
        assert report.satisfied
        assert report.kind == "theorem1"
        assert report.witness is None

    def test_single_site_zero(self, worked_example_model):
        report = check_positive_expectation(worked_example_model, IndexList((1,)))
        assert report.value == 0
        assert report.satisfied

    def test_uniform_even_groups(self):
        model = build_model(3, 2, [])
        report = check_positive_expectation(model, IndexList((1, 1, 2, 2)))
        assert report.value == Fraction(1, 16)
        assert report.satisfied

    def test_fuzz_nonnegative_and_odd_zero(self):
        rng = random.Random(71)
        for _ in range(60):
            model = random_model(rng, n_max=5, q_set=(2, 3, 4, 5), state_limit=1024)
            indices = random_index_list(rng, model.n)
            report = check_positive_expectation(model, indices)
            assert report.satisfied
            assert report.value >= 0
            if len(indices) % 2:
                assert report.value == 0


class TestCovariance:
    def test_pair_of_singletons(self, pair_model_q2):
        assert covariance(pair_model_q2, IndexList((1,)), IndexList((2,))) == Fraction(1, 8)

    def test_uniform_disjoint_even_lists(self):
        model = build_model(3, 3, [])
        assert covariance(model, IndexList((1, 1)), IndexList((2, 2))) == 0

    def test_pair_q3_squares(self, pair_model_q3):
        r, s = IndexList((1, 1)), IndexList((2, 2))
        assert scaled_covariance(pair_model_q3, r, s) == 8
        assert covariance(pair_model_q3, r, s) == Fraction(1, 18)

    def test_against_independent_oracle(self):
        rng = random.Random(73)
        for _ in range(10):
            model = random_model(rng, n_max=4, q_set=(2, 3), state_limit=256)
            r = random_index_list(rng, model.n, max_len=4)
            s = random_index_list(rng, model.n, max_len=4)
            expected = oracle.scaled_covariance(
                model.n, model.q, dict(model.interactions.couplings),
                r.entries, s.entries,
            )
            assert scaled_covariance(model, r, s) == expected


class TestSecondInequality:
    def test_parity_shortcut_is_zero(self, worked_example_model):
        report = check_positive_covariance(
            worked_example_model, IndexList((1,)), IndexList((2, 3))
        )
        assert report.value == 0
        assert report.satisfied
        assert report.kind == "theorem2"

    def test_pair_of_singletons(self, pair_model_q2):
        report = check_positive_covariance(
            pair_model_q2, IndexList((1,)), IndexList((2,))
        )
        assert report.value == Fraction(1, 8)
        assert report.satisfied

    def test_fuzz_nonnegative(self):
        rng = random.Random(79)
        for _ in range(40):
            model = random_model(rng, n_max=5, q_set=(2, 3, 4, 5), state_limit=1024)
            r = random_index_list(rng, model.n)
            s = random_index_list(rng, model.n)
            report = check_positive_covariance(model, r, s)
            assert report.satisfied
            assert report.value >= 0
            if (len(r) % 2) != (len(s) % 2):
                assert report.value == 0


class TestPowerSumGap:
    @pytest.mark.parametrize("a", (2, 4, 6))
    @pytest.mark.parametrize("b", (2, 4, 6))
    def test_binary_case_vanishes(self, a, b):
        assert power_sum_gap(2, a, b) == 0

    @pytest.mark.parametrize("a", (2, 4, 6))
    @pytest.mark.parametrize("b", (2, 4, 6))
    def test_ternary_case_is_two(self, a, b):
        assert power_sum_gap(3, a, b) == 2

    def test_quaternary_value(self):
        assert power_sum_gap(4, 2, 2) == 16

    def test_quinary_value(self):
        assert power_sum_gap(5, 2, 2) == 70

    def test_odd_exponent_rejected(self):
        with pytest.raises(ModelError):
            power_sum_gap(3, 3, 2)
        with pytest.raises(ModelError):
            power_sum_gap(3, 2, 1)

    def test_nonpositive_exponent_rejected(self):
        with pytest.raises(ModelError):
            power_sum_gap(3, 0, 2)

    @pytest.mark.parametrize("q", range(2, 13))
    @pytest.mark.parametrize("a", (2, 4, 6, 8))
    @pytest.mark.parametrize("b", (2, 4, 6, 8))
    def test_nonnegative_family(self, q, a, b):
        assert power_sum_gap(q, a, b) >= 0


class TestPowerSumGapRecursion:
    def test_base_step_q2(self):
        report = check_power_sum_gap_recursion(2, 2, 2)
        gap, gap_next, increment = report.values
        assert (gap, gap_next, increment) == (0, 16, 16)
        assert report.satisfied

    def test_step_q3(self):
        report = check_power_sum_gap_recursion(3, 2, 2)
        gap, gap_next, increment = report.values
        assert (gap, gap_next, increment) == (2, 70, 68)
        assert report.satisfied

    @pytest.mark.parametrize("q", range(2, 11))
    @pytest.mark.parametrize("a", (2, 4, 6))
    @pytest.mark.parametrize("b", (2, 4, 6))
    def test_sweep(self, q, a, b):
        assert check_power_sum_gap_recursion(q, a, b).satisfied

    def test_recursion_is_an_oracle_for_higher_q(self):
        # Climb from the two base cases using only the increment formula
        # and compare against the direct definition.
        for a in (2, 4):
            for b in (2, 4):
                climbed = {2: power_sum_gap(2, a, b), 3: power_sum_gap(3, a, b)}
                for q in range(2, 11):
                    report = check_power_sum_gap_recursion(q, a, b)
                    climbed[q + 2] = climbed[q] + report.values[2]
                for q in range(2, 13):
                    assert climbed[q] == power_sum_gap(q, a, b)


class TestUniformFactorization:
    def test_requires_uniform_model(self, pair_model_q2):
        with pytest.raises(ModelError, match="s=0"):
            uniform_scaled_covariance(pair_model_q2, IndexList((1, 1)), IndexList((2, 2)))

    def test_requires_even_lists(self):
        model = build_model(2, 3, [])
        with pytest.raises(ModelError, match="even-only"):
            uniform_scaled_covariance(model, IndexList((1,)), IndexList((2, 2)))

    def test_disjoint_supports_vanish(self):
        model = build_model(3, 4, [])
        assert uniform_scaled_covariance(model, IndexList((1, 1)), IndexList((2, 2))) == 0

    def test_shared_support_value(self):
        model = build_model(1, 3, [])
        r = s = IndexList((1, 1))
        assert uniform_scaled_covariance(model, r, s) == 2

    def test_matches_enumeration(self):
        rng = random.Random(83)
        for _ in range(30):
            q = rng.choice((2, 3, 4, 5))
            n = rng.randint(1, 4)
            model = build_model(n, q, [])
            r = random_even_index_list(rng, n)
            s = random_even_index_list(rng, n)
            assert uniform_scaled_covariance(model, r, s) == scaled_covariance(model, r, s)


class TestQuadraticDecomposition:
    def test_reference_instance(self):
        base = build_model(2, 3, [])
        r, s = IndexList((1, 1)), IndexList((2, 2))
        qd = quadratic_decomposition(base, {1, 2}, 2, r, s)
        assert (qd.u, qd.v, qd.w) == (2, 2, -4)
        assert qd.z_agree == 3
        assert qd.z_disagree == 6
        assert qd.value_at(2) == 8
        augmented = base.with_coupling({1, 2}, 2)
        assert scaled_covariance(augmented, r, s) == 8

    def test_weight_one_addition_reduces_to_base(self):
        base = build_model(2, 3, [])
        r, s = IndexList((1, 1)), IndexList((2, 2))
        qd = quadratic_decomposition(base, {1, 2}, 1, r, s)
        assert qd.u + qd.v + qd.w == 0

    def test_duplicate_interaction_rejected(self, pair_model_q2):
        with pytest.raises(ModelError, match="duplicate"):
            quadratic_decomposition(
                pair_model_q2, {1, 2}, 2, IndexList((1,)), IndexList((2,))
            )

    def test_weight_below_one_rejected(self):
        base = build_model(2, 3, [])
        with pytest.raises(ModelError):
            quadratic_decomposition(
                base, {1, 2}, Fraction(1, 2), IndexList((1,)), IndexList((2,))
            )

    def test_fuzz_identity_and_coefficient_inequalities(self):
        rng = random.Random(89)
        done = 0
        while done < 25:
            model = random_model(
                rng, n_max=4, n_min=2, q_set=(2, 3, 4), max_interactions=3,
                state_limit=256,
            )
            merged = random_site_subset(rng, model.n)
            if merged in model.interactions.couplings:
                continue
            x = random_coupling(rng)
            extra = (random_coupling(rng), random_coupling(rng))
            r = random_index_list(rng, model.n, max_len=4)
            s = random_index_list(rng, model.n, max_len=4)
            report = check_quadratic(model, merged, x, r, s, extra_x=extra)
            assert report.satisfied
            u, v, w = report.values
            assert u >= 0
            assert 2 * u + v >= 0
            assert u + v + w >= 0
            done += 1

    def test_scaled_covariance_monotone_in_added_weight(self):
        rng = random.Random(97)
        done = 0
        while done < 15:
            model = random_model(
                rng, n_max=4, n_min=2, q_set=(2, 3), max_interactions=2,
                state_limit=256,
            )
            merged = random_site_subset(rng, model.n)
            if merged in model.interactions.couplings:
                continue
            r = random_index_list(rng, model.n, max_len=4)
            s = random_index_list(rng, model.n, max_len=4)
            x1 = random_coupling(rng)
            x2 = x1 + random_coupling(rng)  # strictly larger, both >= 1
            low = scaled_covariance(model.with_coupling(merged, x1), r, s)
            high = scaled_covariance(model.with_coupling(merged, x2), r, s)
            assert high >= low
            done += 1
