# type: ignore
# pylint: disable=all

import math

import numpy as np
import pytest

from scoreaudit.exceptions import UnknownNameException
from scoreaudit.first_order import Categorical, GaussianDist
from scoreaudit.losses import MeanComposedLoss, mean_composed_loss
from scoreaudit.second_order import NIG, DiracMix, Dirichlet


class TestMeanComposedLoss:
    def test__brier_of_marginal(self):
        assert mean_composed_loss("brier", Dirichlet((1.0, 1.0)), 0) == pytest.approx(0.5)

    def test__squared_of_marginal_mean(self):
        assert mean_composed_loss("squared", NIG(1.0, 2.0, 3.0, 4.0), 3.0) == pytest.approx(4.0)

    def test__ce_impossible_class(self):
        q = DiracMix.point(Categorical((1.0, 0.0)))
        assert mean_composed_loss("ce", q, 1) == math.inf

    def test__depends_only_on_marginal(self):
        loss = MeanComposedLoss("brier")
        q_a = Dirichlet((1.0, 1.0))
        q_b = DiracMix.point(Categorical((0.5, 0.5)))
        assert loss.evaluate(q_a, 1) == pytest.approx(loss.evaluate(q_b, 1))

    def test__task(self):
        assert MeanComposedLoss("squared").task == "regression"
        assert MeanComposedLoss("linear").task == "classification"

    def test__supports(self):
        assert MeanComposedLoss("squared").supports(DiracMix.point(GaussianDist(0.0, 1.0)))
        assert not MeanComposedLoss("squared").supports(Dirichlet((1.0, 1.0)))

    def test__evaluate_many__squared(self):
        values = MeanComposedLoss("squared").evaluate_many(
            DiracMix.point(GaussianDist(1.0, 1.0)), np.array([0.0, 1.0, 3.0])
        )
        assert values.tolist() == pytest.approx([1.0, 0.0, 4.0])

    def test__name(self):
        assert MeanComposedLoss("linear").name == "mean-linear"

    def test__unknown_kind(self):
        with pytest.raises(UnknownNameException):
            MeanComposedLoss("hinge")
