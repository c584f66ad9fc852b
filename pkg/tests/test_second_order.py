# type: ignore
# pylint: disable=all

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from scoreaudit.constants import MAX_CONVEX_DEPTH
from scoreaudit.exceptions import InvalidArgumentException
from scoreaudit.first_order import Categorical, GaussianDist, StudentTDist, expect_fn, mean
from scoreaudit.second_order import (
    NIG,
    ConvexMix,
    DiracMix,
    Dirichlet,
    depth,
    describe_task,
    kl_dirichlet,
    marginal,
    mean_prob,
    mix,
    require_regression,
    sample_first_order,
    sample_outcomes,
    task_of,
)
from tests.fixtures.distributions import REGRESSION_MOMENTS


class TestConstruction:
    def test__dirichlet__rejects_non_positive(self):
        with pytest.raises(InvalidArgumentException):
            Dirichlet((1.0, 0.0))

    def test__nig__accepts_unit_shape(self):
        assert NIG(0.0, 1.0, 1.0, 1.0).m3 == 1.0

    def test__nig__rejects_shape_below_one(self):
        with pytest.raises(InvalidArgumentException):
            NIG(0.0, 1.0, 0.5, 1.0)

    def test__dirac_mix__rejects_mixed_class_counts(self):
        with pytest.raises(InvalidArgumentException):
            DiracMix((0.5, 0.5), (Categorical((0.5, 0.5)), Categorical((0.2, 0.3, 0.5))))

    def test__convex_mix__rejects_lambda_out_of_range(self):
        with pytest.raises(InvalidArgumentException):
            ConvexMix(1.5, Dirichlet((1.0, 1.0)), Dirichlet((2.0, 2.0)))

    def test__convex_mix__rejects_task_mismatch(self):
        with pytest.raises(InvalidArgumentException):
            mix(Dirichlet((1.0, 1.0)), NIG(0.0, 1.0, 2.0, 1.0), 0.5)

    def test__convex_mix__nesting_limit(self):
        q = Dirichlet((1.0, 1.0))
        for _ in range(MAX_CONVEX_DEPTH):
            q = mix(q, Dirichlet((2.0, 2.0)), 0.5)
        assert depth(q) == MAX_CONVEX_DEPTH
        with pytest.raises(InvalidArgumentException):
            mix(q, Dirichlet((2.0, 2.0)), 0.5)

    def test__describe_task(self):
        assert describe_task(Dirichlet((1.0, 1.0, 1.0))) == "classification(K=3)"
        assert task_of(NIG(0.0, 1.0, 2.0, 1.0)) == "regression"

    def test__require_regression(self):
        with pytest.raises(InvalidArgumentException):
            require_regression(Dirichlet((1.0, 1.0)))


class TestMarginal:
    def test__marginal__dirichlet(self):
        assert marginal(Dirichlet((1.0, 3.0))).probs == pytest.approx((0.25, 0.75))

    def test__marginal__nig_is_student_t(self):
        p = marginal(NIG(1.0, 2.0, 3.0, 4.0))
        assert isinstance(p, StudentTDist)
        assert p.loc == 1.0
        assert p.dof == 6.0
        assert p.scale == pytest.approx(math.sqrt(4.0 * 3.0 / (2.0 * 3.0)))

    def test__marginal__convex_mix_collapses(self):
        q = mix(Dirichlet((1.0, 3.0)), Dirichlet((3.0, 1.0)), 0.5)
        assert marginal(q).probs == pytest.approx((0.5, 0.5))

    def test__marginal__convex_mix_endpoint(self):
        q_a, q_b = Dirichlet((1.0, 3.0)), Dirichlet((3.0, 1.0))
        assert marginal(ConvexMix(1.0, q_a, q_b)) == marginal(q_b)
        assert marginal(ConvexMix(0.0, q_a, q_b)) == marginal(q_a)

    def test__marginal__dirac_mix_of_gaussians(self):
        q = DiracMix((0.5, 0.5), (GaussianDist(-1.0, 1.0), GaussianDist(1.0, 1.0)))
        p = marginal(q)
        assert expect_fn(p, lambda y: y, vectorized=True) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("q, expected_mean, expected_variance", REGRESSION_MOMENTS[2:])
    def test__marginal__nig_moments(self, q, expected_mean, expected_variance):
        p = marginal(q)
        assert expect_fn(p, lambda y: y, vectorized=True) == pytest.approx(expected_mean, abs=1e-8)
        variance = expect_fn(p, lambda y: (y - expected_mean) ** 2, vectorized=True)
        assert variance == pytest.approx(expected_variance, rel=1e-6)

    def test__mean_prob(self):
        assert mean_prob(Dirichlet((1.0, 3.0)), 1) == pytest.approx(0.75)

    def test__mean_prob__regression_rejected(self):
        with pytest.raises(InvalidArgumentException):
            mean_prob(NIG(0.0, 1.0, 2.0, 1.0), 0)


class TestKLDirichlet:
    def test__kl_dirichlet__equal_parameters(self):
        assert kl_dirichlet((2.0, 3.0), (2.0, 3.0)) == 0.0

    def test__kl_dirichlet__known_value(self):
        # KL(Dir(5, 1) || Dir(1, 1)) = log 5 - 4/5
        assert kl_dirichlet(Dirichlet((5.0, 1.0)), (1.0, 1.0)) == pytest.approx(
            math.log(5.0) - 0.8, abs=1e-12
        )

    def test__kl_dirichlet__positive(self):
        assert kl_dirichlet((2.0, 2.0), (1.0, 1.0)) > 0

    def test__kl_dirichlet__dimension_mismatch(self):
        with pytest.raises(InvalidArgumentException):
            kl_dirichlet((1.0, 1.0), (1.0, 1.0, 1.0))


class TestSampling:
    def test__sample_first_order__deterministic(self):
        q = Dirichlet((2.0, 3.0, 4.0))
        assert sample_first_order(q, 11) == sample_first_order(q, 11)

    def test__sample_first_order__nig_gives_gaussian(self):
        assert isinstance(sample_first_order(NIG(0.0, 1.0, 2.0, 1.0), 0), GaussianDist)

    def test__sample_outcomes__dirichlet_frequencies(self):
        draws = sample_outcomes(Dirichlet((1.0, 3.0)), 20_000, np.random.default_rng(5))
        assert np.mean(draws == 1) == pytest.approx(0.75, abs=0.02)

    def test__sample_outcomes__convex_mix_size(self):
        q = mix(NIG(0.0, 1.0, 2.0, 1.0), DiracMix.point(GaussianDist(3.0, 1.0)), 0.3)
        assert sample_outcomes(q, 1000, np.random.default_rng(1)).shape == (1000,)

    def test__sample_outcomes__empty(self):
        assert sample_outcomes(Dirichlet((1.0, 1.0)), 0, np.random.default_rng(0)).size == 0


N_DRAWS = 4000


def _within(samples, expected, sigmas=4.0):
    samples = np.asarray(samples, dtype=float)
    stderr = samples.std(ddof=1) / math.sqrt(samples.size)
    return abs(samples.mean() - expected) <= sigmas * stderr


def _draws(q):
    return [sample_first_order(q, seed) for seed in range(N_DRAWS)]


def _dirichlet_log_density(x, alpha):
    alpha = np.asarray(alpha)
    return special.gammaln(alpha.sum()) - special.gammaln(alpha).sum() + ((alpha - 1.0) * np.log(x)).sum(axis=1)


class TestSamplingMoments:
    def test__nig__mean_matches_marginal(self):
        q = NIG(1.5, 2.0, 4.0, 3.0)
        draws = _draws(q)
        assert _within([p.mu for p in draws], marginal(q).loc)
        # E[sigma^2] = m4 / (m3 - 1)
        assert _within([p.sigma**2 for p in draws], 3.0 / 3.0)

    def test__dirac_mix__mean_matches_marginal(self):
        q = DiracMix((0.2, 0.5, 0.3), (Categorical((0.9, 0.1)), Categorical((0.5, 0.5)), Categorical((0.1, 0.9))))
        probs = [p.probs[0] for p in _draws(q)]
        assert _within(probs, mean_prob(q, 0))
        assert mean_prob(q, 0) == pytest.approx(0.2 * 0.9 + 0.5 * 0.5 + 0.3 * 0.1)

    def test__convex_mix__classification_mean_matches_marginal(self):
        q = mix(Dirichlet((1.0, 3.0)), DiracMix.point(Categorical((0.5, 0.5))), 0.3)
        probs = [p.probs[1] for p in _draws(q)]
        assert _within(probs, mean_prob(q, 1))
        assert mean_prob(q, 1) == pytest.approx(0.7 * 0.75 + 0.3 * 0.5)

    def test__convex_mix__regression_mean_matches_marginal(self):
        q = mix(NIG(0.0, 1.0, 3.0, 1.0), DiracMix.point(GaussianDist(3.0, 1.0)), 0.3)
        assert _within([p.mu for p in _draws(q)], mean(marginal(q)))
        assert mean(marginal(q)) == pytest.approx(0.9)

    def test__dirichlet__second_moments(self):
        alpha = (2.0, 3.0, 4.0)
        alpha0 = sum(alpha)
        probs = np.array([p.probs for p in _draws(Dirichlet(alpha))])
        for k, a in enumerate(alpha):
            assert _within(probs[:, k] ** 2, a * (a + 1.0) / (alpha0 * (alpha0 + 1.0)))


class TestKLDirichletMonteCarlo:
    @pytest.mark.parametrize(
        "alpha, beta",
        [((2.0, 2.0), (1.0, 1.0)), ((0.7, 3.0, 1.5), (2.0, 2.0, 2.0)), ((5.0, 1.0), (1.0, 5.0))],
    )
    def test__kl_dirichlet__matches_sampled_log_ratio(self, alpha, beta):
        x = np.random.default_rng(9).dirichlet(alpha, size=50_000)
        ratio = _dirichlet_log_density(x, alpha) - _dirichlet_log_density(x, beta)
        assert _within(ratio, kl_dirichlet(alpha, beta))

    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(min_value=2, max_value=4).flatmap(
            lambda k: st.tuples(
                st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=k, max_size=k),
                st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=k, max_size=k),
            )
        )
    )
    def test__kl_dirichlet__non_negative(self, pair):
        alpha, beta = pair
        assert kl_dirichlet(tuple(alpha), tuple(beta)) >= 0.0
        assert kl_dirichlet(tuple(alpha), tuple(alpha)) == 0.0
