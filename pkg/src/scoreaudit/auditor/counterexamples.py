"""
Constructors that instantiate the non-existence arguments for proper
second-order losses on concrete losses: two classification cases, two
regression cases and the deep-evidential-regression demonstration.

Each constructor checks the premises of its construction numerically. When
they hold it certifies the resulting negative propriety gap; when they do not
it reports ``ConditionsNotMet`` together with the scanned trace.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .. import codec, console
from ..constants import (
    DER_DEMO_LAMBDAS,
    NEAR_DIRAC_M2,
    NEAR_DIRAC_M3,
    NEAR_DIRAC_VARIANCE_TOL,
    NEIGHBOURHOOD_POINTS,
    SCAN_POINTS,
    SPLIT_OFFSET,
    SPLIT_POINT,
    SPLIT_SIGMA,
    TASK_CLASSIFICATION,
    TASK_REGRESSION,
)
from ..exceptions import EvaluationException, InvalidArgumentException
from ..first_order import Categorical, FirstOrderDist, TruncatedGaussian, expect_fn, expect_fn_on, mean
from ..losses import DERLoss, SecondOrderLoss
from ..messages import (
    CENTRE_MEAN_ERROR,
    HALF_WIDTH_ERROR,
    INFINITE_EXCLUDED_NOTE,
    NEAR_DIRAC_ERROR,
    POSITIVE_PARAMETER_ERROR,
    QUADRATURE_FAILED_NOTE,
    SIDE_ERROR,
    THRESHOLD_TENSION_NOTE,
    UNSUPPORTED_PREDICTION_NOTE,
)
from ..scoring import quadrature_residual, score_gap
from ..second_order import (
    NIG,
    ConvexMix,
    DiracMix,
    SecondOrderDist,
    marginal,
    mean_prob,
    num_classes,
    task_of,
)
from ..values import METHOD_QUADRATURE
from .verdict import WITNESS_PROPRIETY, AuditVerdict, Outcome, ProbeConfig, Table, Witness

SIDES = ("left", "right")
DELTA_SCALES = (4.0, 3.0, 2.0, 1.0, 0.5, 0.25)


def threshold(a: float, b: float) -> float:
    """
    Mixing-weight threshold ``T = B / (A + B)``.

    For the gap ``m * A - (1 - m) * B`` and ``A + B > 0``, the gap is negative
    exactly when ``m < T``.
    """
    return b / (a + b)


def threshold_gap(m: float, a: float, b: float) -> float:
    """Propriety gap ``m * A - (1 - m) * B`` of a two-point construction."""
    return m * a - (1.0 - m) * b


def scan_grid() -> np.ndarray:
    """Log-spaced interior grid of ``SCAN_POINTS`` weights in ``(0, 1)``."""
    return np.geomspace(1e-6, 1.0, SCAN_POINTS + 1)[:-1]


def _not_met(probe: str, loss: SecondOrderLoss, notes: List[str], **kwargs) -> AuditVerdict:  # type: ignore[no-untyped-def]
    return AuditVerdict(probe, loss, Outcome.CONDITIONS_NOT_MET, notes=notes, **kwargs)


def _is_monotone(values: Sequence[float], increasing: bool) -> bool:
    diffs = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(diffs >= 0) if increasing else np.all(diffs <= 0))


def classif_counterexample_i(loss: SecondOrderLoss, cfg: ProbeConfig) -> AuditVerdict:
    """
    Binary construction with a point prediction at the first vertex.

    With ``Q~ = delta(categorical(1, 0))`` and
    ``Q(m) = (1 - m) * delta(categorical(1, 0)) + m * delta(categorical(0, 1))``
    the gap ``S2(Q~, Q(m)) - S2(Q(m), Q(m))`` equals ``m * A - (1 - m) * B`` with
    ``A = L2(Q~, 1) - L2(Q(m), 1)`` and ``B = L2(Q(m), 0) - L2(Q~, 0)``. The scan
    over a log grid of ``m`` looks for ``m < B / (A + B)``.

    Args:
        loss (SecondOrderLoss): A classification loss defined on Dirac mixtures.
        cfg (ProbeConfig): Probe settings.

    Returns:
        AuditVerdict: ``ViolationFound`` with the most negative certified gap,
            else ``ConditionsNotMet`` with table ``threshold``.
    """
    probe = "classif_counterexample_i"
    vertices = (Categorical((1.0, 0.0)), Categorical((0.0, 1.0)))
    q_tilde = DiracMix.point(vertices[0])
    if loss.task not in (None, TASK_CLASSIFICATION) or not loss.supports(q_tilde):
        return _not_met(probe, loss, [UNSUPPORTED_PREDICTION_NOTE % (loss.name, "Dirac mixtures")])

    base = (loss.evaluate(q_tilde, 0), loss.evaluate(q_tilde, 1))
    rows = []
    losses_at = []
    infinite = skipped = 0
    best: Optional[Tuple[float, DiracMix]] = None
    for m in scan_grid():
        q = DiracMix((1.0 - m, m), vertices)
        at_0, at_1 = loss.evaluate(q, 0), loss.evaluate(q, 1)
        if not all(math.isfinite(v) for v in (*base, at_0, at_1)):
            infinite += 1
            continue
        losses_at.append((at_0, at_1))
        a, b = base[1] - at_1, at_0 - base[0]
        if a <= 0 or b <= 0:
            skipped += 1
            continue
        limit, gap = threshold(a, b), threshold_gap(m, a, b)
        rows.append((float(m), limit, gap))
        if m < limit and (best is None or gap < best[0]):
            best = (gap, q)

    console.verbose(f"{probe}: {len(rows)} of {SCAN_POINTS} grid points usable")
    notes = []
    if infinite:
        notes.append(INFINITE_EXCLUDED_NOTE % infinite)
    if skipped:
        notes.append(f"{skipped} grid point(s) skipped because A <= 0 or B <= 0.")
    tables = {"threshold": Table(("m", "threshold", "gap"), tuple(rows), "exact")}

    if best is not None:
        q = best[1]
        gap = score_gap(loss, q_tilde, q, cfg.method, cfg.nodes, cfg.mc_samples, cfg.seed)
        if cfg.certifies(gap):
            witness = Witness(WITNESS_PROPRIETY, q_tilde, q, gap)
            return AuditVerdict(
                probe, loss, Outcome.VIOLATION_FOUND, witness, len(rows), notes, tables=tables
            )
        notes.append(f"Best threshold point gap {gap.gap:.6g} is not certified.")
        return _not_met(probe, loss, notes, probes_run=len(rows), tables=tables)

    premise = len(losses_at) > 1 and _is_monotone([v[1] for v in losses_at], False) and _is_monotone(
        [v[0] for v in losses_at], True
    )
    if premise and rows:
        notes.append(THRESHOLD_TENSION_NOTE)
    notes.append("No scanned m satisfies m < T(m).")
    return _not_met(probe, loss, notes, probes_run=len(rows), tables=tables)


def classif_counterexample_ii(
    loss: SecondOrderLoss,
    y: int,
    q: SecondOrderDist,
    q_bar: SecondOrderDist,
    cfg: ProbeConfig,
) -> AuditVerdict:
    """
    Construction for losses that favour a flatter prediction ``q_bar``.

    Premises: ``L2(q_bar, y) < L2(q, y)``, ``E_{q_bar}[p_y] < E_q[p_y]`` and
    ``sum_{k != y} (L2(q_bar, k) - L2(q_bar, y)) <= sum_{k != y} (L2(q, k) - L2(q, y))``.
    When they hold, ``S2(q_bar, q) < S2(q, q)`` is certified.

    Args:
        loss (SecondOrderLoss): A classification loss.
        y (int): The distinguished class.
        q (SecondOrderDist): The target.
        q_bar (SecondOrderDist): The competing prediction.
        cfg (ProbeConfig): Probe settings.

    Returns:
        AuditVerdict: ``ViolationFound`` or ``ConditionsNotMet``; the notes
            report both sides of every premise.
    """
    probe = "classif_counterexample_ii"
    if task_of(q) != TASK_CLASSIFICATION or task_of(q_bar) != TASK_CLASSIFICATION:
        raise InvalidArgumentException("Classification construction needs classification arguments.")
    if not (loss.supports(q) and loss.supports(q_bar)):
        return _not_met(probe, loss, [UNSUPPORTED_PREDICTION_NOTE % (loss.name, "both predictions")])

    k = num_classes(q) or 0
    bar_values = [loss.evaluate(q_bar, c) for c in range(k)]
    q_values = [loss.evaluate(q, c) for c in range(k)]
    bar_sum = sum(v - bar_values[y] for c, v in enumerate(bar_values) if c != y)
    q_sum = sum(v - q_values[y] for c, v in enumerate(q_values) if c != y)
    conditions = [
        ("loss at y", bar_values[y], q_values[y], bar_values[y] < q_values[y]),
        ("mean probability of y", mean_prob(q_bar, y), mean_prob(q, y), mean_prob(q_bar, y) < mean_prob(q, y)),
        ("class-sum", bar_sum, q_sum, bar_sum <= q_sum),
    ]
    notes = [
        f"{name}: q_bar {lhs:.6g} vs q {rhs:.6g} ({'holds' if held else 'fails'})"
        for name, lhs, rhs, held in conditions
    ]
    if not all(held for *_, held in conditions):
        return _not_met(probe, loss, notes, probes_run=1)

    gap = score_gap(loss, q_bar, q, cfg.method, cfg.nodes, cfg.mc_samples, cfg.seed)
    if cfg.certifies(gap):
        witness = Witness(WITNESS_PROPRIETY, q_bar, q, gap)
        return AuditVerdict(probe, loss, Outcome.VIOLATION_FOUND, witness, 1, notes)
    notes.append(f"Gap {gap.gap:.6g} is not certified.")
    return _not_met(probe, loss, notes, probes_run=1)


def _expected_loss(
    loss: SecondOrderLoss, q_hat: SecondOrderDist, p: FirstOrderDist, cfg: ProbeConfig
) -> float:
    return expect_fn(p, lambda ys: loss.evaluate_many(q_hat, ys), nodes=cfg.nodes, vectorized=True)


def _quadrature_margin(
    loss: SecondOrderLoss, q_hat: SecondOrderDist, q: SecondOrderDist, cfg: ProbeConfig
) -> float:
    residual = quadrature_residual(loss, q_hat, q, cfg.nodes) + quadrature_residual(loss, q, q, cfg.nodes)
    return cfg.margin_factor * residual


def split_pair(
    mu_star: float = SPLIT_POINT, offset: float = SPLIT_OFFSET, sigma: float = SPLIT_SIGMA
) -> Tuple[TruncatedGaussian, TruncatedGaussian]:
    """Gaussians truncated to either side of ``mu_star``, centred ``offset`` away."""
    left = TruncatedGaussian(mu_star - offset, sigma, -math.inf, mu_star)
    right = TruncatedGaussian(mu_star + offset, sigma, mu_star, math.inf)
    return left, right


def regress_counterexample_i(
    loss: SecondOrderLoss,
    cfg: ProbeConfig,
    mu_star: float = SPLIT_POINT,
    offset: float = SPLIT_OFFSET,
    sigma: float = SPLIT_SIGMA,
    side: str = "left",
) -> AuditVerdict:
    """
    Regression construction from two truncated Gaussians split at ``mu_star``.

    With ``Q~ = delta(p_l)`` and ``Q_lam = (1 - lam) delta(p_l) + lam delta(p_r)``
    the gap ``S2(Q~, Q_lam) - S2(Q_lam, Q_lam)`` equals ``lam * A - (1 - lam) * B``
    where ``A = E_{p_r}[L2(Q~) - L2(Q_lam)]`` and ``B = E_{p_l}[L2(Q_lam) - L2(Q~)]``.
    ``side="right"`` swaps the roles of ``p_l`` and ``p_r``.

    Args:
        loss (SecondOrderLoss): A regression loss defined on Dirac mixtures.
        cfg (ProbeConfig): Probe settings.
        mu_star (float): Split point.
        offset (float): Distance of both untruncated means from ``mu_star``.
        sigma (float): Scale of both truncated Gaussians.
        side (str): ``left`` or ``right``.

    Returns:
        AuditVerdict: ``ViolationFound`` with a gap certified against
            ``margin_factor`` times the quadrature residual, else
            ``ConditionsNotMet`` with table ``sweep``.
    """
    probe = "regress_counterexample_i"
    if side not in SIDES:
        raise InvalidArgumentException(SIDE_ERROR % (", ".join(SIDES), side))
    p_l, p_r = split_pair(mu_star, offset, sigma)
    if side == "right":
        p_l, p_r = p_r, p_l

    q_tilde = DiracMix.point(p_l)
    q_far = DiracMix.point(p_r)
    if loss.task not in (None, TASK_REGRESSION) or not loss.supports(q_tilde):
        return _not_met(probe, loss, [UNSUPPORTED_PREDICTION_NOTE % (loss.name, "Dirac mixtures")])

    rows = []
    best: Optional[Tuple[float, ConvexMix]] = None
    try:
        tilde_l = _expected_loss(loss, q_tilde, p_l, cfg)
        tilde_r = _expected_loss(loss, q_tilde, p_r, cfg)
        for lam in scan_grid():
            q = ConvexMix(float(lam), q_tilde, q_far)
            a = tilde_r - _expected_loss(loss, q, p_r, cfg)
            b = _expected_loss(loss, q, p_l, cfg) - tilde_l
            if a + b <= 0:
                continue
            limit, gap = threshold(a, b), threshold_gap(float(lam), a, b)
            rows.append((float(lam), limit, gap))
            if lam < limit and (best is None or gap < best[0]):
                best = (gap, q)
    except EvaluationException as exc:
        return _not_met(probe, loss, [QUADRATURE_FAILED_NOTE % exc], probes_run=len(rows))

    console.verbose(f"{probe} ({side}): {len(rows)} sweep points")
    tables = {"sweep": Table(("lambda", "threshold", "gap"), tuple(rows), METHOD_QUADRATURE)}
    notes = [f"Split at {mu_star:g}; q_tilde = {codec.dump(q_tilde)}."]
    if best is None:
        notes.append("No swept lambda satisfies lambda < T(lambda).")
        return _not_met(probe, loss, notes, probes_run=len(rows), tables=tables)

    q = best[1]
    gap = score_gap(loss, q_tilde, q, METHOD_QUADRATURE, cfg.nodes)
    if cfg.certifies(gap, _quadrature_margin(loss, q_tilde, q, cfg)):
        witness = Witness(WITNESS_PROPRIETY, q_tilde, q, gap, lambdas=(q.lam,))
        return AuditVerdict(probe, loss, Outcome.VIOLATION_FOUND, witness, len(rows), notes, tables=tables)
    notes.append(f"Gap {gap.gap:.6g} is within the quadrature margin.")
    return _not_met(probe, loss, notes, probes_run=len(rows), tables=tables)


@dataclass(frozen=True)
class NeighbourhoodCheck:
    """Premises of the neighbourhood construction for one ``delta``."""

    delta: float
    grid: Tuple[float, ...]
    dominated: int
    ties: int
    inside_holds: bool
    outside_bar: float
    outside_point: float

    @property
    def outside_holds(self) -> bool:
        """Whether ``q_bar`` has the smaller loss integral off the neighbourhood."""
        return self.outside_bar < self.outside_point

    @property
    def holds(self) -> bool:
        """Whether both premises hold."""
        return bool(self.grid) and self.inside_holds and self.outside_holds


def neighbourhood_grid(mu: float, delta: float) -> np.ndarray:
    """Open grid over ``(mu - delta, mu + delta)`` with ``mu`` removed."""
    grid = np.linspace(mu - delta, mu + delta, NEIGHBOURHOOD_POINTS + 2)[1:-1]
    return grid[(grid != mu) & (grid > mu - delta) & (grid < mu + delta)]


def check_neighbourhood(
    loss: SecondOrderLoss,
    mu: float,
    p_tilde: FirstOrderDist,
    q_bar: SecondOrderDist,
    q_point: SecondOrderDist,
    delta: float,
    cfg: ProbeConfig,
) -> NeighbourhoodCheck:
    """
    Check ``L2(q_bar, y) < L2(q_point, y)`` on the neighbourhood grid and
    compare both loss integrals under ``p_tilde`` off ``(mu - delta, mu + delta)``.

    Grid points whose losses agree within ``abs_tol`` count as neither.
    """
    grid = neighbourhood_grid(mu, delta)
    bar = np.asarray(loss.evaluate_many(q_bar, grid), dtype=float)
    point = np.asarray(loss.evaluate_many(q_point, grid), dtype=float)
    ties = np.abs(bar - point) <= cfg.abs_tol
    dominated = (bar < point) & ~ties

    def outside(q: SecondOrderDist) -> float:
        f = lambda ys: loss.evaluate_many(q, ys)  # noqa: E731
        below = expect_fn_on(p_tilde, f, hi=mu - delta, nodes=cfg.nodes, vectorized=True)
        above = expect_fn_on(p_tilde, f, lo=mu + delta, nodes=cfg.nodes, vectorized=True)
        return below + above

    return NeighbourhoodCheck(
        float(delta),
        tuple(grid.tolist()),
        int(dominated.sum()),
        int(ties.sum()),
        bool(np.all(dominated | ties)) and bool(dominated.any()),
        outside(q_bar),
        outside(q_point),
    )


def regress_counterexample_ii(
    loss: SecondOrderLoss,
    mu: float,
    p_tilde: FirstOrderDist,
    q_bar: SecondOrderDist,
    delta: float,
    cfg: ProbeConfig,
    q_point: Optional[SecondOrderDist] = None,
) -> AuditVerdict:
    """
    Regression construction for losses that over-penalise point predictions.

    Premises: ``L2(q_bar, y) < L2(delta(p_tilde), y)`` near ``mu`` and the same
    ordering of the loss integrals under ``p_tilde`` off the neighbourhood.
    When both hold, ``S2(q_bar, Q) < S2(Q, Q)`` is certified for
    ``Q = delta(p_tilde)``.

    Args:
        loss (SecondOrderLoss): A regression loss.
        mu (float): Mean of ``p_tilde``.
        p_tilde (FirstOrderDist): The first-order distribution.
        q_bar (SecondOrderDist): The competing prediction.
        delta (float): Half-width of the neighbourhood, ``>= 0``.
        cfg (ProbeConfig): Probe settings.
        q_point (Optional[SecondOrderDist]): Stand-in for ``delta(p_tilde)``
            with the same marginal, for losses that cannot evaluate Dirac
            mixtures; defaults to ``delta(p_tilde)``.

    Returns:
        AuditVerdict: ``ViolationFound`` or ``ConditionsNotMet``.

    Raises:
        InvalidArgumentException: If ``delta < 0`` or ``p_tilde`` does not have
            mean ``mu``.
    """
    probe = "regress_counterexample_ii"
    if not delta >= 0:
        raise InvalidArgumentException(HALF_WIDTH_ERROR % delta)
    if not math.isclose(mean(p_tilde), mu, rel_tol=1e-9, abs_tol=1e-9):
        raise InvalidArgumentException(CENTRE_MEAN_ERROR % (mean(p_tilde), mu))
    point = q_point if q_point is not None else DiracMix.point(p_tilde)
    if not (loss.supports(q_bar) and loss.supports(point)):
        return _not_met(probe, loss, [UNSUPPORTED_PREDICTION_NOTE % (loss.name, "both predictions")])

    try:
        check = check_neighbourhood(loss, mu, p_tilde, q_bar, point, delta, cfg)
    except EvaluationException as exc:
        return _not_met(probe, loss, [QUADRATURE_FAILED_NOTE % exc])

    notes = [
        f"delta = {check.delta:.6g}: q_bar dominates at {check.dominated} of {len(check.grid)} grid points.",
        f"Off-neighbourhood integrals: q_bar {check.outside_bar:.6g} vs point {check.outside_point:.6g}.",
    ]
    if check.ties:
        notes.append(f"{check.ties} grid point(s) tie within abs_tol and count as neither.")
    if not check.grid:
        notes.append("The neighbourhood grid is empty; the premise is vacuous.")
        return _not_met(probe, loss, notes)
    if not check.holds:
        return _not_met(probe, loss, notes, probes_run=len(check.grid))

    gap = score_gap(loss, q_bar, point, METHOD_QUADRATURE, cfg.nodes)
    if cfg.certifies(gap, _quadrature_margin(loss, q_bar, point, cfg)):
        witness = Witness(WITNESS_PROPRIETY, q_bar, point, gap)
        return AuditVerdict(probe, loss, Outcome.VIOLATION_FOUND, witness, len(check.grid), notes)
    notes.append(f"Gap {gap.gap:.6g} is within the quadrature margin.")
    return _not_met(probe, loss, notes, probes_run=len(check.grid))


def near_dirac_nig(mu: float, sigma: float) -> NIG:
    """
    NIG standing in for a point mass at ``N(mu, sigma^2)``.

    Uses ``m2 = 1e6`` and ``m3 = 1e3`` with ``m4 = (m3 - 1) sigma^2``, whose
    posterior predictive has variance within 0.2% of ``sigma^2``.

    Raises:
        InvalidArgumentException: If ``sigma`` is not positive or the variance
            check fails.
    """
    if not (math.isfinite(sigma) and sigma > 0):
        raise InvalidArgumentException(POSITIVE_PARAMETER_ERROR % ("sigma", sigma))
    m4 = (NEAR_DIRAC_M3 - 1.0) * sigma**2
    q = NIG(mu, NEAR_DIRAC_M2, NEAR_DIRAC_M3, m4)
    variance = m4 * (1.0 + NEAR_DIRAC_M2) / (NEAR_DIRAC_M2 * (NEAR_DIRAC_M3 - 1.0))
    if abs(variance / sigma**2 - 1.0) > NEAR_DIRAC_VARIANCE_TOL:
        raise InvalidArgumentException(NEAR_DIRAC_ERROR % (variance, sigma**2))
    return q


def der_proposition_demo(
    mu: float, sigma: float, cfg: ProbeConfig, lam: float = 1.0
) -> AuditVerdict:
    """
    Certify that the DER loss prefers ``NIG(mu, 1, 1, m4)`` over a near point
    prediction at ``N(mu, sigma^2)``.

    ``delta`` is the largest of ``sigma * (4, 3, 2, 1, 0.5, 0.25)`` at which
    both premises of ``regress_counterexample_ii`` hold, or the smallest when
    none does. The verdict carries table ``der-loss-curve`` with both loss
    curves on the neighbourhood grid.

    Args:
        mu (float): Mean of the point prediction.
        sigma (float): Standard deviation of the point prediction.
        cfg (ProbeConfig): Probe settings.
        lam (float): DER regularisation weight.

    Returns:
        AuditVerdict: The verdict of ``regress_counterexample_ii``.
    """
    loss = DERLoss(lam)
    q_peak = near_dirac_nig(mu, sigma)
    q_bar = NIG(mu, 1.0, 1.0, q_peak.m4)
    p_tilde = marginal(q_peak)

    chosen = sigma * DELTA_SCALES[-1]
    for scale in DELTA_SCALES:
        check = check_neighbourhood(loss, mu, p_tilde, q_bar, q_peak, sigma * scale, cfg)
        console.verbose(f"der demo: delta {sigma * scale:g} premises {'hold' if check.holds else 'fail'}")
        if check.holds:
            chosen = sigma * scale
            break

    verdict = regress_counterexample_ii(loss, mu, p_tilde, q_bar, chosen, cfg, q_point=q_peak)
    verdict.probe = "der_proposition_demo"
    grid = neighbourhood_grid(mu, chosen)
    curve = zip(grid.tolist(), loss.evaluate_many(q_bar, grid).tolist(), loss.evaluate_many(q_peak, grid).tolist())
    verdict.tables["der-loss-curve"] = Table(("y", "loss_bar", "loss_peak"), tuple(curve), "exact")
    verdict.notes.insert(0, f"lambda = {lam:g}, q_peak = {codec.dump(q_peak)}, q_bar = {codec.dump(q_bar)}.")
    return verdict


def der_lambda_sweep(
    mu: float, sigma: float, cfg: ProbeConfig, lambdas: Sequence[float] = DER_DEMO_LAMBDAS
) -> List[AuditVerdict]:
    """Run ``der_proposition_demo`` for every regularisation weight."""
    return [der_proposition_demo(mu, sigma, cfg, lam) for lam in lambdas]


__all__ = [
    "NeighbourhoodCheck",
    "check_neighbourhood",
    "classif_counterexample_i",
    "classif_counterexample_ii",
    "der_lambda_sweep",
    "der_proposition_demo",
    "near_dirac_nig",
    "neighbourhood_grid",
    "regress_counterexample_i",
    "regress_counterexample_ii",
    "scan_grid",
    "split_pair",
    "threshold",
    "threshold_gap",
]
