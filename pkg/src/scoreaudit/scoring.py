"""
Expected second-order scores ``S2(Q_hat, Q) = E_{p~Q} E_{Y~p}[L2(Q_hat, Y)]``
with exact, quadrature and Monte-Carlo evaluation paths.
"""

import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import console
from .constants import (
    MIN_NODES,
    TASK_CLASSIFICATION,
    get_default_mc_samples,
)
from .exceptions import (
    ConfigurationException,
    EvaluationException,
    InvalidArgumentException,
)
from .first_order import Categorical, default_nodes, expect_fn
from .losses import SecondOrderLoss
from .messages import (
    EXACT_PATH_ERROR,
    INVALID_SCORE_ERROR,
    LAMBDA_GRID_ERROR,
    MC_SAMPLES_ERROR,
    METHOD_NAME_ERROR,
    MIXED_TASK_ERROR,
    NONFINITE_SAMPLE_ERROR,
    SEED_REQUIRED_ERROR,
)
from .second_order import (
    SecondOrderDist,
    describe_task,
    marginal,
    mix,
    sample_outcomes,
    task_of,
)
from .values import (
    FLAG_INFINITE,
    METHOD_EXACT,
    METHOD_MC,
    METHOD_QUADRATURE,
    ScoreGap,
    ScoreValue,
    mc_tag,
    quadrature_tag,
)

METHOD_AUTO = "auto"
METHODS = (METHOD_AUTO, METHOD_EXACT, METHOD_QUADRATURE, METHOD_MC)


@lru_cache(maxsize=4096)
def _class_values(loss: SecondOrderLoss, q_hat: SecondOrderDist, k: int) -> Tuple[float, ...]:
    """Loss value of ``q_hat`` at every class, computed once per pair."""
    return tuple(float(loss.evaluate(q_hat, y)) for y in range(k))


def _resolve_method(method: str, task: str) -> str:
    if method not in METHODS:
        raise InvalidArgumentException(
            METHOD_NAME_ERROR % (method, ", ".join(METHODS))
        )
    if method == METHOD_AUTO:
        return METHOD_EXACT if task == TASK_CLASSIFICATION else METHOD_QUADRATURE
    if method == METHOD_EXACT and task != TASK_CLASSIFICATION:
        raise InvalidArgumentException(
            EXACT_PATH_ERROR
        )
    if method == METHOD_QUADRATURE and task == TASK_CLASSIFICATION:
        return METHOD_EXACT
    return method


def _exact(loss: SecondOrderLoss, q_hat: SecondOrderDist, q: SecondOrderDist) -> ScoreValue:
    p_bar: Categorical = marginal(q)  # type: ignore[assignment]
    values = _class_values(loss, q_hat, p_bar.k)

    total = 0.0
    for prob, value in zip(p_bar.probs, values):
        if prob == 0:
            continue
        if math.isnan(value) or value == -math.inf:
            raise EvaluationException(INVALID_SCORE_ERROR % value)
        total += prob * value

    if math.isinf(total):
        return ScoreValue(total, 0.0, METHOD_EXACT, (FLAG_INFINITE,))
    return ScoreValue(total, 0.0, METHOD_EXACT)


def _quadrature(
    loss: SecondOrderLoss,
    q_hat: SecondOrderDist,
    q: SecondOrderDist,
    nodes: Optional[int],
) -> ScoreValue:
    p_bar = marginal(q)
    value = expect_fn(
        p_bar, lambda ys: loss.evaluate_many(q_hat, ys), nodes=nodes, vectorized=True
    )
    return ScoreValue(value, 0.0, quadrature_tag(nodes or default_nodes(p_bar)))


def _monte_carlo(
    loss: SecondOrderLoss,
    q_hat: SecondOrderDist,
    q: SecondOrderDist,
    n_samples: Optional[int],
    seed: Optional[int],
) -> ScoreValue:
    if seed is None:
        raise ConfigurationException(SEED_REQUIRED_ERROR)
    n = n_samples or get_default_mc_samples()
    if n < 2:
        raise InvalidArgumentException(MC_SAMPLES_ERROR % n)

    ys = sample_outcomes(q, n, np.random.default_rng(seed))
    if task_of(q) == TASK_CLASSIFICATION:
        table = np.asarray(_class_values(loss, q_hat, int(marginal(q).k)))  # type: ignore[union-attr]
        values = table[ys.astype(int)]
    else:
        values = loss.evaluate_many(q_hat, ys)

    bad = ~np.isfinite(values)
    if bad.any():
        sample = ys[np.argmax(bad)].item()
        raise EvaluationException(NONFINITE_SAMPLE_ERROR % sample, node=sample)

    stderr = float(values.std(ddof=1) / math.sqrt(n))
    return ScoreValue(float(values.mean()), stderr, mc_tag(n, seed))


def s2(
    loss: SecondOrderLoss,
    q_hat: SecondOrderDist,
    q: SecondOrderDist,
    method: str = METHOD_AUTO,
    nodes: Optional[int] = None,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> ScoreValue:
    """
    Expected second-order score of the prediction ``q_hat`` under the target ``q``.

    The classification exact path sums ``mean_prob(q, y) * L2(q_hat, y)`` over
    the classes, reusing per-class loss values, so two targets with equal
    marginals score bit-identically. The regression quadrature path integrates
    ``L2(q_hat, .)`` against ``marginal(q)``. The Monte-Carlo path draws
    ``p ~ q`` then ``Y ~ p`` and averages.

    Args:
        loss (SecondOrderLoss): The loss ``L2``.
        q_hat (SecondOrderDist): The prediction.
        q (SecondOrderDist): The target.
        method (str): ``auto``, ``exact``, ``quadrature`` or ``mc``.
        nodes (Optional[int]): Quadrature node count.
        n_samples (Optional[int]): Monte-Carlo sample count.
        seed (Optional[int]): Monte-Carlo seed; required for ``mc``.

    Returns:
        ScoreValue: The score with its method tag; ``+inf`` scores on the exact
            path carry the ``infinite`` flag.

    Raises:
        InvalidArgumentException: If the loss does not support ``q_hat`` or the
            task types differ.
        ConfigurationException: If ``mc`` is requested without a seed.
        EvaluationException: If quadrature meets a non-finite integrand or a
            Monte-Carlo sample has a non-finite loss.
    """
    if describe_task(q_hat) != describe_task(q):
        raise InvalidArgumentException(
            MIXED_TASK_ERROR % (describe_task(q_hat), describe_task(q))
        )
    loss.check_supported(q_hat)

    resolved = _resolve_method(method, task_of(q))
    if resolved == METHOD_EXACT:
        return _exact(loss, q_hat, q)
    if resolved == METHOD_QUADRATURE:
        return _quadrature(loss, q_hat, q, nodes)
    return _monte_carlo(loss, q_hat, q, n_samples, seed)


def score_gap(
    loss: SecondOrderLoss,
    q_hat: SecondOrderDist,
    q: SecondOrderDist,
    method: str = METHOD_AUTO,
    nodes: Optional[int] = None,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> ScoreGap:
    """
    Propriety gap ``S2(q_hat, q) - S2(q, q)``.

    Equal arguments share one evaluation, so their gap is exactly 0. Under the
    Monte-Carlo path the two scores use the seeds ``seed`` and ``seed + 1``.

    Args:
        loss (SecondOrderLoss): The loss ``L2``.
        q_hat (SecondOrderDist): The candidate prediction.
        q (SecondOrderDist): The target, also the reference prediction.
        method (str): Evaluation method, as for ``s2``.
        nodes (Optional[int]): Quadrature node count.
        n_samples (Optional[int]): Monte-Carlo sample count.
        seed (Optional[int]): Monte-Carlo seed.

    Returns:
        ScoreGap: The gap; negative values beyond the certification margin
            witness impropriety.
    """
    reference = s2(loss, q, q, method, nodes, n_samples, seed)
    if q_hat == q:
        return ScoreGap.between(reference, reference)

    lhs_seed = None if seed is None else seed + 1
    candidate = s2(loss, q_hat, q, method, nodes, n_samples, lhs_seed)
    return ScoreGap.between(candidate, reference)


def check_lambda_grid(lambda_grid: Sequence[float]) -> List[float]:
    """
    Validate a mixing-weight grid.

    Args:
        lambda_grid (Sequence[float]): Candidate grid.

    Returns:
        List[float]: The grid as floats.

    Raises:
        InvalidArgumentException: If the grid is unsorted, leaves ``[0, 1]``
            or has fewer than 3 points.
    """
    grid = [float(lam) for lam in lambda_grid]
    valid = (
        len(grid) >= 3
        and all(0.0 <= lam <= 1.0 for lam in grid)
        and all(a < b for a, b in zip(grid, grid[1:]))
    )
    if not valid:
        raise InvalidArgumentException(LAMBDA_GRID_ERROR)
    return grid


def order_sensitivity_curve(
    loss: SecondOrderLoss,
    q: SecondOrderDist,
    q_prime: SecondOrderDist,
    lambda_grid: Sequence[float],
    method: str = METHOD_AUTO,
    nodes: Optional[int] = None,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[Tuple[float, ScoreValue]]:
    """
    Evaluate ``f(lam) = S2(mix(q_prime, q, lam), q)`` along a grid.

    A proper loss gives a non-increasing curve. Monte-Carlo points use the
    seed ``seed + j`` for grid index ``j``.

    Args:
        loss (SecondOrderLoss): The loss ``L2``.
        q (SecondOrderDist): The target, reached at ``lam = 1``.
        q_prime (SecondOrderDist): The starting prediction at ``lam = 0``.
        lambda_grid (Sequence[float]): Sorted grid inside ``[0, 1]``.
        method (str): Evaluation method, as for ``s2``.
        nodes (Optional[int]): Quadrature node count.
        n_samples (Optional[int]): Monte-Carlo sample count.
        seed (Optional[int]): Base Monte-Carlo seed.

    Returns:
        List[Tuple[float, ScoreValue]]: ``(lam, f(lam))`` per grid point.
    """
    grid = check_lambda_grid(lambda_grid)
    curve = []
    for index, lam in enumerate(grid):
        point_seed = None if seed is None else seed + index
        value = s2(loss, mix(q_prime, q, lam), q, method, nodes, n_samples, point_seed)
        curve.append((lam, value))
    console.verbose(f"order-sensitivity curve: {len(curve)} points evaluated")
    return curve


def quadrature_residual(
    loss: SecondOrderLoss,
    q_hat: SecondOrderDist,
    q: SecondOrderDist,
    nodes: Optional[int] = None,
) -> float:
    """
    Error estimate of a quadrature score: ``|S2(n nodes) - S2(n/2 nodes)|``.

    Classification targets are evaluated exactly and have residual 0.

    Args:
        loss (SecondOrderLoss): The loss ``L2``.
        q_hat (SecondOrderDist): The prediction.
        q (SecondOrderDist): The target.
        nodes (Optional[int]): The full node count.

    Returns:
        float: The residual.
    """
    if task_of(q) == TASK_CLASSIFICATION:
        return 0.0
    full = nodes or default_nodes(marginal(q))
    half = max(full // 2, MIN_NODES)
    fine = s2(loss, q_hat, q, METHOD_QUADRATURE, nodes=full).value
    coarse = s2(loss, q_hat, q, METHOD_QUADRATURE, nodes=half).value
    return abs(fine - coarse)


__all__ = [
    "METHODS",
    "METHOD_AUTO",
    "check_lambda_grid",
    "order_sensitivity_curve",
    "quadrature_residual",
    "s2",
    "score_gap",
]
