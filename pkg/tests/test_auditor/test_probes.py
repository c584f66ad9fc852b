# type: ignore
# pylint: disable=all

import math
from unittest.mock import patch

import pytest

from scoreaudit.auditor import (
    FamilyBox,
    Outcome,
    ProbeConfig,
    affine_invariance_check,
    bayes_peakedness_sweep,
    concavity_probe,
    equal_marginal_pairs,
    generalized_entropy,
    order_sensitivity_probe,
    propriety_search,
    revalidate,
    strictness_impossibility,
)
from scoreaudit.auditor.verdict import FLAG_IMPLEMENTATION_DEFECT, FLAG_STRICTNESS
from scoreaudit.exceptions import InvalidArgumentException, UnknownNameException
from scoreaudit.losses import LOSS_NAMES, AffineWrappedLoss, BayesLoss, DERLoss, MeanComposedLoss, get_loss
from scoreaudit.messages import EVIDENCE_NOTE
from scoreaudit.second_order import Dirichlet, marginal


@pytest.fixture
def cfg():
    return ProbeConfig(seed=7, n_random_pairs=20)


class TestFamilyBox:
    def test__default_dirichlet(self):
        box = FamilyBox.default("dirichlet", k=3)
        assert box.bounds == ((0.5, 5.0),) * 3
        assert box.task == "classification"

    def test__unknown_family(self):
        with pytest.raises(UnknownNameException):
            FamilyBox("beta", ((0.5, 5.0),))

    def test__nig_needs_four_ranges(self):
        with pytest.raises(InvalidArgumentException):
            FamilyBox("nig", ((0.0, 1.0),))

    def test__anchors_inside_box(self):
        box = FamilyBox.default("nig")
        for anchor in box.anchors():
            assert box.contains(anchor.params)

    def test__pairs_are_deterministic(self):
        box = FamilyBox.default("dirichlet")
        assert list(box.pairs(5, 3)) == list(box.pairs(5, 3))

    def test__pairs_skip_equal_anchors(self):
        box = FamilyBox.default("dirichlet")
        assert all(q_hat != q for q_hat, q in box.pairs(0, 0))


class TestEqualMarginalPairs:
    @pytest.mark.parametrize("task", ["classification", "regression"])
    def test__marginals_agree(self, task):
        for q_a, q_b in equal_marginal_pairs(task, 6, seed=1):
            assert q_a != q_b
            p_a, p_b = marginal(q_a), marginal(q_b)
            if task == "classification":
                assert p_a.probs == pytest.approx(p_b.probs, abs=1e-12)
            else:
                assert type(p_a) is type(p_b)

    def test__count(self):
        assert len(equal_marginal_pairs("classification", 5, seed=0, k=3)) == 5


class TestProprietySearch:
    def test__bayes_ce_violation(self, cfg):
        verdict = propriety_search(BayesLoss(0.0), FamilyBox.default("dirichlet"), cfg)
        assert verdict.outcome is Outcome.VIOLATION_FOUND
        assert verdict.witness.gap.gap < -cfg.abs_tol
        assert verdict.witness.gap.gap < -0.5
        assert revalidate(verdict, cfg)

    def test__mean_brier_no_violation(self, cfg):
        verdict = propriety_search(MeanComposedLoss("brier"), FamilyBox.default("dirichlet"), cfg)
        assert verdict.outcome is Outcome.NO_VIOLATION_FOUND
        assert EVIDENCE_NOTE in verdict.notes
        assert verdict.probes_run > 0
        assert all(gap >= -cfg.abs_tol for gap in verdict.tables["propriety-gaps"].column("gap"))

    def test__explicit_equal_pair(self, cfg):
        q = Dirichlet((1.0, 1.0))
        verdict = propriety_search(BayesLoss(0.0), FamilyBox.default("dirichlet"), cfg, pairs=[(q, q)])
        assert verdict.outcome is Outcome.NO_VIOLATION_FOUND
        assert verdict.tables["propriety-gaps"].column("gap") == [0.0]

    def test__task_mismatch(self, cfg):
        verdict = propriety_search(DERLoss(), FamilyBox.default("dirichlet"), cfg)
        assert verdict.outcome is Outcome.CONDITIONS_NOT_MET

    def test__der_on_nig_box(self):
        cfg = ProbeConfig(seed=1, n_random_pairs=5)
        verdict = propriety_search(DERLoss(1.0), FamilyBox.default("nig"), cfg)
        assert verdict.outcome in (Outcome.VIOLATION_FOUND, Outcome.NO_VIOLATION_FOUND)
        assert verdict.probes_run > 0


class TestStrictness:
    @pytest.mark.parametrize("name", LOSS_NAMES)
    def test__every_loss_is_not_strictly_proper(self, name):
        loss = get_loss(name)
        verdict = strictness_impossibility(loss, loss.task, ProbeConfig())
        assert verdict.outcome is Outcome.VIOLATION_FOUND
        assert FLAG_STRICTNESS in verdict.flags
        assert verdict.witness.gap.gap <= ProbeConfig().abs_tol

    def test__tie_is_not_a_certified_gap(self):
        cfg = ProbeConfig()
        verdict = strictness_impossibility(BayesLoss(0.0), "classification", cfg)
        assert verdict.violated
        assert not verdict.certified_gap
        assert abs(verdict.witness.gap.gap) <= cfg.margin(verdict.witness.gap.stderr)
        assert not cfg.certifies(verdict.witness.gap)

    def test__propriety_witness_is_a_certified_gap(self, cfg):
        verdict = propriety_search(BayesLoss(0.0), FamilyBox.default("dirichlet"), cfg)
        assert verdict.certified_gap
        assert cfg.certifies(verdict.witness.gap)

    def test__regularised_bayes_uses_dirichlet_pair(self):
        verdict = strictness_impossibility(BayesLoss(1.0), "classification", ProbeConfig())
        assert isinstance(verdict.witness.q, Dirichlet)

    def test__revalidate(self):
        cfg = ProbeConfig()
        verdict = strictness_impossibility(BayesLoss(0.0), "classification", cfg)
        assert revalidate(verdict, cfg)


class TestOrderSensitivity:
    def test__bayes_ce_increase(self, cfg):
        verdict = order_sensitivity_probe(BayesLoss(0.0), Dirichlet((1.0, 1.0)), Dirichlet((2.0, 2.0)), cfg)
        assert verdict.outcome is Outcome.VIOLATION_FOUND
        lam_a, lam_b = verdict.witness.lambdas
        assert lam_a < lam_b
        assert len(verdict.tables["order-sensitivity"].rows) == cfg.lambda_grid
        assert revalidate(verdict, cfg)

    def test__bayes_ce_agrees_with_propriety_search(self, cfg):
        q, q_prime = Dirichlet((1.0, 1.0)), Dirichlet((2.0, 2.0))
        path = order_sensitivity_probe(BayesLoss(0.0), q, q_prime, cfg)
        search = propriety_search(BayesLoss(0.0), FamilyBox.default("dirichlet"), cfg, pairs=[(q_prime, q)])
        assert path.violated and search.violated
        values = path.tables["order-sensitivity"].column("value")
        assert search.witness.gap.gap == pytest.approx(values[0] - values[-1], abs=1e-12)
        assert search.witness.gap.gap == pytest.approx(-1.0 / 6.0, abs=1e-12)

    def test__mean_brier_is_non_increasing(self, cfg):
        verdict = order_sensitivity_probe(
            MeanComposedLoss("brier"), Dirichlet((1.0, 3.0)), Dirichlet((3.0, 1.0)), cfg
        )
        assert verdict.outcome is Outcome.NO_VIOLATION_FOUND

    def test__equal_endpoints(self, cfg):
        q = Dirichlet((2.0, 3.0))
        verdict = order_sensitivity_probe(BayesLoss(0.0), q, q, cfg)
        assert verdict.outcome is Outcome.NO_VIOLATION_FOUND

    def test__unsupported_mixture(self, cfg):
        verdict = order_sensitivity_probe(BayesLoss(1.0), Dirichlet((1.0, 1.0)), Dirichlet((2.0, 2.0)), cfg)
        assert verdict.outcome is Outcome.CONDITIONS_NOT_MET


class TestConcavity:
    def test__generalized_entropy(self, cfg):
        q = Dirichlet((1.0, 1.0))
        assert generalized_entropy(BayesLoss(0.0), q, cfg).value == pytest.approx(1.0)

    def test__mean_brier_concave(self, cfg):
        verdict = concavity_probe(MeanComposedLoss("brier"), Dirichlet((1.0, 3.0)), Dirichlet((3.0, 1.0)), cfg)
        assert verdict.outcome is Outcome.NO_VIOLATION_FOUND
        table = verdict.tables["concavity"]
        assert table.column("g2")[0] == pytest.approx(table.column("chord")[0], abs=1e-12)
        assert table.column("g2")[-1] == pytest.approx(table.column("chord")[-1], abs=1e-12)

    def test__unsupported_mixture(self, cfg):
        verdict = concavity_probe(BayesLoss(1.0), Dirichlet((1.0, 1.0)), Dirichlet((2.0, 2.0)), cfg)
        assert verdict.outcome is Outcome.CONDITIONS_NOT_MET


class TestAffineInvariance:
    @pytest.mark.parametrize("name", ["bayes-ce", "mean-brier", "mean-squared"])
    def test__identity_holds(self, cfg, name):
        verdict = affine_invariance_check(get_loss(name), 3.7, (0.0, 0.0, 1.0), cfg)
        assert verdict.outcome is Outcome.NO_VIOLATION_FOUND
        assert isinstance(verdict.loss, AffineWrappedLoss)
        assert verdict.probes_run > 0

    def test__explicit_suite(self, cfg):
        suite = [(Dirichlet((2.0, 2.0)), Dirichlet((1.0, 1.0)))]
        verdict = affine_invariance_check(BayesLoss(0.0), 2.0, (1.0,), cfg, suite=suite)
        (row,) = verdict.tables["affine-gaps"].rows
        assert row[1] == pytest.approx(-1.0 / 6.0)
        assert row[2] == pytest.approx(-1.0 / 3.0)

    def test__defect_is_flagged(self, cfg):
        def broken_wrap(inner, c, g=(0.0,)):
            return AffineWrappedLoss(2.0 * c, tuple(g), inner)

        with patch("scoreaudit.auditor.probes.affine_wrap", side_effect=broken_wrap):
            verdict = affine_invariance_check(BayesLoss(0.0), 3.7, (0.0,), cfg)
        assert verdict.outcome is Outcome.VIOLATION_FOUND
        assert FLAG_IMPLEMENTATION_DEFECT in verdict.flags


class TestBayesPeakednessSweep:
    def test__unregularised_decreases_towards_log_two(self):
        table = bayes_peakedness_sweep((1.0, 1.0), (1.0, 2.0, 4.0, 8.0, 16.0), 0.0)
        values = table.column("value")
        assert values[0] == pytest.approx(1.0)
        assert values[1] == pytest.approx(5.0 / 6.0)
        assert all(b < a for a, b in zip(values, values[1:]))
        assert abs(values[-1] - math.log(2.0)) < 0.05

    def test__regularised_increases(self):
        values = bayes_peakedness_sweep((1.0, 1.0), (1.0, 2.0, 4.0), 10.0).column("value")
        assert values[1] > values[0]

    def test__brier_kind(self):
        table = bayes_peakedness_sweep((1.0, 1.0), (1.0,), 0.0, kind="brier")
        assert table.column("value") == pytest.approx([2.0 / 3.0])

    @pytest.mark.parametrize("grid", [(), (0.0, 1.0), (2.0, 1.0)])
    def test__invalid_grid(self, grid):
        with pytest.raises(InvalidArgumentException):
            bayes_peakedness_sweep((1.0, 1.0), grid, 0.0)


class TestRevalidate:
    def test__no_violation_is_not_revalidated(self, cfg):
        verdict = order_sensitivity_probe(
            MeanComposedLoss("brier"), Dirichlet((1.0, 3.0)), Dirichlet((3.0, 1.0)), cfg
        )
        assert not revalidate(verdict, cfg)

    def test__monte_carlo_witness(self):
        cfg = ProbeConfig(seed=3, n_random_pairs=0, mc_samples=20_000, method="mc")
        pairs = [(Dirichlet((5.0, 5.0)), Dirichlet((0.5, 0.5)))]
        verdict = propriety_search(BayesLoss(0.0), FamilyBox.default("dirichlet"), cfg, pairs=pairs)
        assert verdict.outcome is Outcome.VIOLATION_FOUND
        assert verdict.witness.gap.lhs.method.startswith("mc(")
        assert revalidate(verdict, cfg)
