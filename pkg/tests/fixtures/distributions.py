# type: ignore
# pylint: disable=all

import math

from scoreaudit.first_order import Categorical, GaussianDist, StudentTDist
from scoreaudit.second_order import NIG, Dirichlet, DiracMix

# Bayes cross-entropy scores: prediction, target, expected S2
BAYES_CE_SCORES = [
    (Dirichlet((2.0, 2.0)), Dirichlet((1.0, 1.0)), 5.0 / 6.0),
    (Dirichlet((1.0, 1.0)), Dirichlet((1.0, 1.0)), 1.0),
    (Dirichlet((1.0, 1.0)), DiracMix.point(Categorical((0.5, 0.5))), 1.0),
    (Dirichlet((2.0, 1.0)), Dirichlet((1.0, 1.0)), 1.0),
]

# first-order scores: loss, prediction, target, expected S1
FIRST_ORDER_SCORES = [
    ("brier", Categorical((0.5, 0.5)), Categorical((1.0, 0.0)), 0.5),
    ("brier", Categorical((1.0, 0.0)), Categorical((1.0, 0.0)), 0.0),
    ("ce", Categorical((0.5, 0.5)), Categorical((0.3, 0.7)), math.log(2.0)),
    ("linear", Categorical((0.25, 0.75)), Categorical((1.0, 0.0)), 0.75),
    ("squared", GaussianDist(1.0, 2.0), GaussianDist(0.0, 1.0), 2.0),
]

# regression targets with known variance: target, mean, variance
REGRESSION_MOMENTS = [
    (GaussianDist(0.5, 1.5), 0.5, 2.25),
    (StudentTDist(1.0, 1.0, 6.0), 1.0, 1.5),
    (NIG(0.0, 1.0, 3.0, 1.0), 0.0, 1.0),
    (NIG(2.0, 4.0, 5.0, 8.0), 2.0, 2.5),
]
