# type: ignore
# pylint: disable=all

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from scoreaudit.exceptions import (
    EvaluationException,
    InvalidArgumentException,
    UnknownNameException,
)
from scoreaudit.first_order import (
    Categorical,
    FiniteMixture,
    GaussianDist,
    StudentTDist,
    TruncatedGaussian,
    brier_loss,
    ce_loss,
    collapse,
    describe_task,
    expect_fn,
    expect_fn_on,
    get_first_order_loss,
    linear_loss,
    mean,
    quadrature_rule,
    s1,
    sample,
)
from scoreaudit.messages import MEAN_TASK_ERROR
from scoreaudit.values import METHOD_EXACT
from tests.fixtures.distributions import FIRST_ORDER_SCORES, REGRESSION_MOMENTS


def simplex_points(k_min=2, k_max=5):
    return st.lists(
        st.floats(min_value=0.01, max_value=1.0), min_size=k_min, max_size=k_max
    ).map(lambda values: tuple(np.asarray(values) / np.sum(values)))


class TestDistributions:
    def test__categorical__rejects_unnormalised(self):
        with pytest.raises(InvalidArgumentException):
            Categorical((0.5, 0.6))

    def test__categorical__rejects_single_class(self):
        with pytest.raises(InvalidArgumentException):
            Categorical((1.0,))

    def test__gaussian__rejects_non_positive_sigma(self):
        with pytest.raises(InvalidArgumentException):
            GaussianDist(0.0, 0.0)

    def test__truncated_gaussian__rejects_empty_interval(self):
        with pytest.raises(InvalidArgumentException):
            TruncatedGaussian(0.0, 1.0, lo=1.0, hi=1.0)

    def test__truncated_gaussian__upper_tail_mass(self):
        p = TruncatedGaussian(0.0, 1.0, lo=10.0)
        assert p.mass > 0
        assert p.mass == pytest.approx(special.ndtr(-10.0), rel=1e-12)

    def test__finite_mixture__rejects_mixed_tasks(self):
        with pytest.raises(InvalidArgumentException):
            FiniteMixture((0.5, 0.5), (Categorical((0.5, 0.5)), GaussianDist(0.0, 1.0)))

    def test__describe_task__includes_class_count(self):
        assert describe_task(Categorical((0.2, 0.3, 0.5))) == "classification(K=3)"
        assert describe_task(GaussianDist(0.0, 1.0)) == "regression"

    def test__collapse__merges_categorical_mixture(self):
        mixture = FiniteMixture(
            (0.5, 0.5), (Categorical((1.0, 0.0)), Categorical((0.0, 1.0)))
        )
        assert collapse(mixture).probs == pytest.approx((0.5, 0.5))


class TestLosses:
    def test__brier_loss__uniform(self):
        assert brier_loss(Categorical((0.5, 0.5)), 0) == pytest.approx(0.5)

    def test__ce_loss__impossible_class_is_infinite(self):
        assert ce_loss(Categorical((1.0, 0.0)), 1) == math.inf

    def test__linear_loss(self):
        assert linear_loss(Categorical((0.25, 0.75)), 1) == pytest.approx(0.25)

    def test__brier_loss__rejects_bad_index(self):
        with pytest.raises(InvalidArgumentException):
            brier_loss(Categorical((0.5, 0.5)), 2)

    def test__brier_loss__rejects_fractional_index(self):
        with pytest.raises(InvalidArgumentException):
            brier_loss(Categorical((0.5, 0.5)), 0.5)

    def test__get_first_order_loss__unknown_name(self):
        with pytest.raises(UnknownNameException):
            get_first_order_loss("hinge")


class TestS1:
    @pytest.mark.parametrize("loss, p_hat, p, expected", FIRST_ORDER_SCORES)
    def test__s1__worked_values(self, loss, p_hat, p, expected):
        assert s1(loss, p_hat, p).value == pytest.approx(expected, abs=1e-10)

    def test__s1__categorical_is_exact(self):
        score = s1("brier", Categorical((0.5, 0.5)), Categorical((0.5, 0.5)))
        assert score.method == METHOD_EXACT
        assert score.stderr == 0.0

    def test__s1__gaussian_is_quadrature(self):
        score = s1("squared", GaussianDist(0.0, 1.0), GaussianDist(0.0, 1.0), nodes=32)
        assert score.method == "quadrature(32)"

    @settings(max_examples=50, deadline=None)
    @given(p_hat=simplex_points(3, 3), p=simplex_points(3, 3))
    def test__s1__brier_gap_is_squared_distance(self, p_hat, p):
        p_hat, p = Categorical(p_hat), Categorical(p)
        gap = s1("brier", p_hat, p).value - s1("brier", p, p).value
        distance = float(np.sum((p_hat.as_array() - p.as_array()) ** 2))
        assert gap == pytest.approx(distance, abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(p_hat=simplex_points(4, 4), p=simplex_points(4, 4))
    def test__s1__ce_gap_is_kl_divergence(self, p_hat, p):
        p_hat, p = Categorical(p_hat), Categorical(p)
        gap = s1("ce", p_hat, p).value - s1("ce", p, p).value
        kl = float(special.rel_entr(p.as_array(), p_hat.as_array()).sum())
        assert gap == pytest.approx(kl, abs=1e-12)


class TestQuadrature:
    @pytest.mark.parametrize("p", [GaussianDist(0.0, 1.0), StudentTDist(1.0, 2.0, 4.0)])
    def test__quadrature_rule__weights_sum_to_one(self, p):
        _, weights = quadrature_rule(p)
        assert weights.sum() == pytest.approx(1.0, abs=1e-12)

    def test__expect_fn__gaussian_second_moment(self):
        p = GaussianDist(1.5, 0.5)
        value = expect_fn(p, lambda y: y**2, vectorized=True)
        assert value == pytest.approx(1.5**2 + 0.5**2, abs=1e-12)

    def test__expect_fn__student_t_mean(self):
        p = StudentTDist(-2.0, 1.0, 5.0)
        assert expect_fn(p, lambda y: y, vectorized=True) == pytest.approx(-2.0, abs=1e-8)

    @pytest.mark.parametrize("p, expected_mean, expected_variance", REGRESSION_MOMENTS[:2])
    def test__expect_fn__variance(self, p, expected_mean, expected_variance):
        variance = expect_fn(p, lambda y: (y - expected_mean) ** 2, vectorized=True)
        assert variance == pytest.approx(expected_variance, rel=1e-6)

    def test__expect_fn__truncated_mean_matches_closed_form(self):
        p = TruncatedGaussian(0.0, 1.0, lo=0.5, hi=3.0)
        assert expect_fn(p, lambda y: y, vectorized=True) == pytest.approx(mean(p), abs=1e-10)

    def test__expect_fn_on__half_line_mass(self):
        p = GaussianDist(0.0, 1.0)
        assert expect_fn_on(p, lambda y: np.ones_like(y), lo=0.0, vectorized=True) == pytest.approx(0.5, abs=1e-8)

    def test__expect_fn_on__categorical_range(self):
        p = Categorical((0.2, 0.3, 0.5))
        assert expect_fn_on(p, lambda y: 1.0, lo=1, hi=2) == pytest.approx(0.8)

    def test__expect_fn__categorical_infinite_value(self):
        p = Categorical((0.5, 0.5))
        assert expect_fn(p, lambda y: ce_loss(Categorical((1.0, 0.0)), y)) == math.inf

    def test__expect_fn__nonfinite_node_reports_node(self):
        with pytest.raises(EvaluationException) as error:
            expect_fn(GaussianDist(0.0, 1.0), lambda y: math.inf)
        assert error.value.node is not None

    def test__expect_fn__rejects_too_few_nodes(self):
        with pytest.raises(InvalidArgumentException):
            expect_fn(GaussianDist(0.0, 1.0), lambda y: y, nodes=4)


    @pytest.mark.parametrize(
        "p",
        [
            GaussianDist(0.5, 1.5),
            TruncatedGaussian(0.0, 1.0, lo=-0.5, hi=2.0),
            StudentTDist(1.0, 2.0, 6.0),
        ],
    )
    def test__expect_fn__matches_sampled_expectation(self, p):
        def f(y):
            return np.cos(y) + 0.25 * y**2

        draws = f(sample(p, 200_000, np.random.default_rng(13)))
        stderr = draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(expect_fn(p, f, vectorized=True) - draws.mean()) <= 4 * stderr


class TestMeanAndSample:
    def test__mean__mixture(self):
        p = FiniteMixture((0.25, 0.75), (GaussianDist(0.0, 1.0), GaussianDist(4.0, 1.0)))
        assert mean(p) == pytest.approx(3.0)

    def test__mean__student_t_without_mean(self):
        with pytest.raises(EvaluationException):
            mean(StudentTDist(0.0, 1.0, 1.0))

    def test__mean__categorical_is_rejected(self):
        with pytest.raises(InvalidArgumentException) as error:
            mean(Categorical((0.5, 0.5)))
        assert str(error.value) == MEAN_TASK_ERROR

    def test__sample__is_deterministic_for_seed(self):
        p = FiniteMixture((0.5, 0.5), (GaussianDist(0.0, 1.0), StudentTDist(3.0, 1.0, 5.0)))
        first = sample(p, 100, np.random.default_rng(3))
        second = sample(p, 100, np.random.default_rng(3))
        assert np.array_equal(first, second)

    def test__sample__categorical_range(self):
        draws = sample(Categorical((0.1, 0.2, 0.7)), 500, np.random.default_rng(0))
        assert set(draws.tolist()) <= {0, 1, 2}
