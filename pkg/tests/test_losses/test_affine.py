# type: ignore
# pylint: disable=all

import numpy as np
import pytest

from scoreaudit.constants import MAX_AFFINE_DEPTH
from scoreaudit.exceptions import InvalidArgumentException
from scoreaudit.losses import AffineWrappedLoss, BayesLoss, MeanComposedLoss, affine_wrap
from scoreaudit.second_order import NIG, Dirichlet


class TestAffineWrappedLoss:
    def test__evaluate(self):
        inner = BayesLoss(0.0)
        loss = affine_wrap(inner, 2.0, (1.0, 0.0, 1.0))
        q = Dirichlet((2.0, 2.0))
        assert loss.evaluate(q, 1) == pytest.approx(2.0 * 5.0 / 6.0 + 1.0 + 1.0)

    def test__evaluate_many(self):
        inner = MeanComposedLoss("squared")
        loss = affine_wrap(inner, 3.0, (0.0, 1.0))
        q = NIG(0.0, 1.0, 2.0, 1.0)
        ys = np.array([-1.0, 2.0])
        assert loss.evaluate_many(q, ys).tolist() == pytest.approx([3.0 - 1.0, 12.0 + 2.0])

    def test__task_follows_inner(self):
        assert affine_wrap(MeanComposedLoss("squared"), 1.0).task == "regression"

    def test__supports_follows_inner(self):
        loss = affine_wrap(BayesLoss(1.0), 1.0)
        assert loss.supports(Dirichlet((1.0, 1.0)))
        assert not loss.supports(NIG(0.0, 1.0, 2.0, 1.0))

    @pytest.mark.parametrize("c", [0.0, -1.0, float("inf")])
    def test__rejects_bad_scale(self, c):
        with pytest.raises(InvalidArgumentException):
            affine_wrap(BayesLoss(0.0), c)

    def test__rejects_cubic_shift(self):
        with pytest.raises(InvalidArgumentException):
            affine_wrap(BayesLoss(0.0), 1.0, (0.0, 0.0, 0.0, 1.0))

    def test__nesting_limit(self):
        loss = BayesLoss(0.0)
        for _ in range(MAX_AFFINE_DEPTH):
            loss = affine_wrap(loss, 2.0)
        assert isinstance(loss, AffineWrappedLoss)
        assert loss.depth == MAX_AFFINE_DEPTH
        with pytest.raises(InvalidArgumentException):
            affine_wrap(loss, 2.0)
