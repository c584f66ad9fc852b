"""
Probes for propriety, strictness, order sensitivity, concavity and affine
invariance of second-order losses.

A ``NoViolationFound`` verdict is evidence from the probes that ran, never a
proof of propriety.
"""

import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .. import codec, console
from ..constants import (
    DEFAULT_SUITE_SIZE,
    SECOND_ORDER_FAMILY_NAMES,
    TASK_CLASSIFICATION,
    TASK_REGRESSION,
)
from ..exceptions import EvaluationException, InvalidArgumentException, UnknownNameException
from ..first_order import Categorical, GaussianDist
from ..losses import AffineWrappedLoss, BayesLoss, SecondOrderLoss, affine_wrap
from ..messages import (
    EMPTY_RANGE_ERROR,
    EVIDENCE_NOTE,
    FAMILY_BOUNDS_ERROR,
    INFINITE_EXCLUDED_NOTE,
    NONFINITE_GAP_NOTE,
    REVALIDATE_KIND_ERROR,
    STRICTNESS_NOTE,
)
from ..scoring import order_sensitivity_curve, quadrature_residual, s2, score_gap
from ..second_order import (
    NIG,
    ConvexMix,
    DiracMix,
    Dirichlet,
    SecondOrderDist,
    mix,
)
from ..values import FLAG_INFINITE, METHOD_QUADRATURE, ScoreGap, ScoreValue, method_kind
from .verdict import (
    FLAG_IMPLEMENTATION_DEFECT,
    FLAG_STRICTNESS,
    WITNESS_AFFINE,
    WITNESS_CONCAVITY,
    WITNESS_PATH,
    WITNESS_PROPRIETY,
    WITNESS_STRICTNESS,
    AuditVerdict,
    Outcome,
    ProbeConfig,
    Table,
    Witness,
)

Pair = Tuple[SecondOrderDist, SecondOrderDist]

DIRICHLET_BOX = (0.5, 5.0)
NIG_BOX = ((-1.0, 1.0), (0.5, 5.0), (1.5, 5.0), (0.5, 5.0))
ISOTROPIC_LEVELS = (1.0, 2.0, 4.0)


@dataclass(frozen=True)
class FamilyBox:
    """A second-order family with a box of admissible parameters."""

    family: str
    bounds: Tuple[Tuple[float, float], ...]

    def __post_init__(self) -> None:
        if self.family not in SECOND_ORDER_FAMILY_NAMES:
            raise UnknownNameException("family", self.family, SECOND_ORDER_FAMILY_NAMES)
        expected = 4 if self.family == "nig" else len(self.bounds)
        if len(self.bounds) != expected or (self.family == "dirichlet" and expected < 2):
            raise InvalidArgumentException(
                FAMILY_BOUNDS_ERROR % (self.family, max(expected, 2))
            )
        for lo, hi in self.bounds:
            if not lo <= hi:
                raise InvalidArgumentException(EMPTY_RANGE_ERROR % (lo, hi))

    @classmethod
    def default(cls, family: str, k: int = 2) -> "FamilyBox":
        """
        Default box: ``alpha in [0.5, 5]^k`` for Dirichlet; ``m1 in [-1, 1]``,
        ``m2 in [0.5, 5]``, ``m3 in [1.5, 5]``, ``m4 in [0.5, 5]`` for NIG.
        """
        if family == "dirichlet":
            return cls(family, (DIRICHLET_BOX,) * k)
        return cls(family, NIG_BOX)

    @property
    def task(self) -> str:
        """Task type of the family."""
        return TASK_CLASSIFICATION if self.family == "dirichlet" else TASK_REGRESSION

    def build(self, params: Sequence[float]) -> SecondOrderDist:
        """Distribution with the given parameter vector."""
        if self.family == "dirichlet":
            return Dirichlet(tuple(params))
        return NIG(*params)

    def contains(self, params: Sequence[float]) -> bool:
        """Whether a parameter vector lies inside the box."""
        return all(lo <= v <= hi for v, (lo, hi) in zip(params, self.bounds))

    def anchors(self) -> List[SecondOrderDist]:
        """Deterministic members: box corners, centre and isotropic points."""
        lower = [lo for lo, _ in self.bounds]
        upper = [hi for _, hi in self.bounds]
        centre = [0.5 * (lo + hi) for lo, hi in self.bounds]
        candidates = [lower, centre, upper]
        if self.family == "dirichlet":
            candidates += [[level] * len(self.bounds) for level in ISOTROPIC_LEVELS]
        else:
            candidates += [[0.0, 1.0, 2.0, 1.0], [0.0, 3.0, 2.0, 1.5]]

        members: List[SecondOrderDist] = []
        for params in candidates:
            if self.contains(params):
                member = self.build(params)
                if member not in members:
                    members.append(member)
        return members

    def draw(self, rng: np.random.Generator) -> SecondOrderDist:
        """A uniformly drawn member of the box."""
        return self.build([rng.uniform(lo, hi) for lo, hi in self.bounds])

    def pairs(self, n_random: int, seed: int) -> Iterator[Pair]:
        """All ordered anchor pairs, then ``n_random`` random pairs."""
        anchors = self.anchors()
        for q_hat in anchors:
            for q in anchors:
                if q_hat != q:
                    yield q_hat, q
        rng = np.random.default_rng(seed)
        for _ in range(n_random):
            yield self.draw(rng), self.draw(rng)


def _nig_twin(q: NIG, m2: float) -> NIG:
    """NIG with precision ``m2`` and the same posterior predictive as ``q``."""
    m4 = q.m4 * (1.0 + q.m2) * m2 / (q.m2 * (1.0 + m2))
    return NIG(q.m1, m2, q.m3, m4)


def equal_marginal_pairs(task: str, count: int, seed: int, k: int = 2) -> List[Pair]:
    """
    Pairs ``Q_a != Q_b`` with identical marginals.

    Classification pairs are ``Dir(alpha)`` vs ``Dir(c * alpha)`` and a Dirac
    at a categorical vs a two-atom Dirac mixture with the same mean;
    regression pairs are NIG distributions sharing one posterior predictive
    and Dirac measures at a Gaussian vs a convex mixture of two copies.

    Args:
        task (str): ``classification`` or ``regression``.
        count (int): Number of pairs.
        seed (int): Seed of the parameter draws.
        k (int): Number of classes for classification pairs.

    Returns:
        List[Pair]: The pairs.
    """
    rng = np.random.default_rng(seed)
    pairs: List[Pair] = []
    while len(pairs) < count:
        if task == TASK_CLASSIFICATION:
            alpha = tuple(rng.uniform(0.5, 5.0, size=k))
            pairs.append((Dirichlet(alpha), Dirichlet(tuple(2.0 * a for a in alpha))))
            if len(pairs) < count:
                a, b = rng.dirichlet(np.ones(k)), rng.dirichlet(np.ones(k))
                w = float(rng.uniform(0.1, 0.9))
                centre = Categorical(tuple(w * a + (1.0 - w) * b))
                spread = DiracMix((w, 1.0 - w), (Categorical(tuple(a)), Categorical(tuple(b))))
                pairs.append((DiracMix.point(centre), spread))
        else:
            q = NIG(
                float(rng.uniform(-1, 1)),
                float(rng.uniform(0.5, 5)),
                float(rng.uniform(1.5, 5)),
                float(rng.uniform(0.5, 5)),
            )
            pairs.append((q, _nig_twin(q, float(rng.uniform(0.5, 5)))))
            if len(pairs) < count:
                point = DiracMix.point(GaussianDist(float(rng.uniform(-1, 1)), float(rng.uniform(0.5, 2))))
                pairs.append((point, ConvexMix(float(rng.uniform(0.1, 0.9)), point, point)))
    return pairs


def _gap(loss: SecondOrderLoss, q_hat: SecondOrderDist, q: SecondOrderDist, cfg: ProbeConfig, index: int) -> ScoreGap:
    return score_gap(
        loss, q_hat, q, cfg.method, cfg.nodes, cfg.mc_samples, seed=cfg.seed + 2 * index
    )


def _has_infinite(gap: ScoreGap) -> bool:
    return FLAG_INFINITE in gap.lhs.flags or FLAG_INFINITE in gap.rhs.flags


def _residual_margin(
    loss: SecondOrderLoss, q_hat: SecondOrderDist, q: SecondOrderDist, cfg: ProbeConfig, gap: ScoreGap
) -> float:
    """Quadrature error bound of a gap, scaled by ``margin_factor``; 0 off the quadrature path."""
    if method_kind(gap.lhs.method) != METHOD_QUADRATURE:
        return 0.0
    residual = quadrature_residual(loss, q_hat, q, cfg.nodes) + quadrature_residual(loss, q, q, cfg.nodes)
    return cfg.margin_factor * residual


def propriety_search(
    loss: SecondOrderLoss,
    family: FamilyBox,
    cfg: ProbeConfig,
    pairs: Optional[Sequence[Pair]] = None,
) -> AuditVerdict:
    """
    Search a parameter box for a certified propriety violation.

    Evaluates ``score_gap`` on every anchor pair and ``cfg.n_random_pairs``
    random pairs of the box (or on the given pairs) and reports the most
    negative certified gap as witness. Non-finite gaps are skipped and counted.

    Args:
        loss (SecondOrderLoss): The audited loss.
        family (FamilyBox): The family and its parameter box.
        cfg (ProbeConfig): Probe settings.
        pairs (Optional[Sequence[Pair]]): Explicit ``(q_hat, q)`` pairs.

    Returns:
        AuditVerdict: ``ViolationFound`` with witness, or ``NoViolationFound``.
    """
    probe = "propriety_search"
    candidates = list(pairs) if pairs is not None else list(family.pairs(cfg.n_random_pairs, cfg.seed))
    if loss.task is not None and loss.task != family.task:
        return AuditVerdict(
            probe, loss, Outcome.CONDITIONS_NOT_MET,
            notes=[f"Loss '{loss.name}' is a {loss.task} loss; family '{family.family}' is {family.task}."],
        )

    best: Optional[Witness] = None
    evaluated = infinite = nonfinite = unsupported = 0
    rows = []
    for index, (q_hat, q) in enumerate(candidates):
        if not (loss.supports(q_hat) and loss.supports(q)):
            unsupported += 1
            continue
        try:
            gap = _gap(loss, q_hat, q, cfg, index)
        except EvaluationException as exc:
            console.verbose(f"propriety probe {index} failed: {exc}")
            nonfinite += 1
            continue
        if _has_infinite(gap):
            infinite += 1
            continue
        if not gap.is_finite:
            nonfinite += 1
            continue

        evaluated += 1
        rows.append((float(index), gap.gap, gap.stderr))
        if best is not None and gap.gap >= best.gap.gap:
            continue
        if cfg.certifies(gap) and cfg.certifies(gap, _residual_margin(loss, q_hat, q, cfg, gap)):
            best = Witness(WITNESS_PROPRIETY, q_hat, q, gap)

    console.verbose(f"propriety search: {evaluated} gaps evaluated for {codec.dump(loss)}")
    notes = []
    if infinite:
        notes.append(INFINITE_EXCLUDED_NOTE % infinite)
    if nonfinite:
        notes.append(NONFINITE_GAP_NOTE % nonfinite)
    if unsupported:
        notes.append(f"{unsupported} probe(s) skipped because the loss does not support the pair.")

    tables = {"propriety-gaps": Table(("probe", "gap", "stderr"), tuple(rows), cfg.method)}
    if best is not None:
        return AuditVerdict(probe, loss, Outcome.VIOLATION_FOUND, best, evaluated, notes, tables=tables)
    if evaluated == 0:
        notes.append("No probe pair could be evaluated.")
        return AuditVerdict(probe, loss, Outcome.CONDITIONS_NOT_MET, None, 0, notes, tables=tables)
    notes.append(EVIDENCE_NOTE)
    return AuditVerdict(probe, loss, Outcome.NO_VIOLATION_FOUND, None, evaluated, notes, tables=tables)


def _strictness_candidates(task: str) -> List[Pair]:
    if task == TASK_CLASSIFICATION:
        vertices = (Categorical((1.0, 0.0)), Categorical((0.0, 1.0)))
        return [
            (DiracMix.point(Categorical((0.5, 0.5))), DiracMix((0.5, 0.5), vertices)),
            (Dirichlet((1.0, 1.0)), Dirichlet((2.0, 2.0))),
        ]
    gaussian = GaussianDist(0.0, 2.0)
    return [
        (DiracMix.point(gaussian), ConvexMix(0.5, DiracMix.point(gaussian), DiracMix.point(gaussian))),
        (NIG(0.0, 1.0, 2.0, 1.0), NIG(0.0, 3.0, 2.0, 1.5)),
    ]


def strictness_impossibility(
    loss: SecondOrderLoss, task: str, cfg: ProbeConfig
) -> AuditVerdict:
    """
    Show that ``loss`` cannot be strictly proper.

    Takes ``Q1 != Q2`` with equal marginals that the loss supports. Scores
    depend on the target only through its marginal, so
    ``S2(Q2, Q1) - S2(Q1, Q1) = -(S2(Q1, Q2) - S2(Q2, Q2))`` and one of the
    two gaps is not positive, contradicting strict propriety. That gap is the
    witness, flagged ``strictness``.

    Args:
        loss (SecondOrderLoss): The audited loss.
        task (str): ``classification`` or ``regression``.
        cfg (ProbeConfig): Probe settings.

    Returns:
        AuditVerdict: ``ViolationFound`` flagged ``strictness``, or
            ``ConditionsNotMet`` when no supported pair exists.
    """
    probe = "strictness_impossibility"
    for q1, q2 in _strictness_candidates(task):
        if not (loss.supports(q1) and loss.supports(q2)):
            continue
        if loss.task is not None and loss.task != task:
            break

        collapse = [
            abs(s2(loss, q_hat, q1, cfg.method, cfg.nodes, cfg.mc_samples, cfg.seed).value
                - s2(loss, q_hat, q2, cfg.method, cfg.nodes, cfg.mc_samples, cfg.seed).value)
            for q_hat in (q1, q2)
        ]
        gap_21 = score_gap(loss, q2, q1, cfg.method, cfg.nodes, cfg.mc_samples, cfg.seed)
        gap_12 = score_gap(loss, q1, q2, cfg.method, cfg.nodes, cfg.mc_samples, cfg.seed)
        if not (gap_21.is_finite and gap_12.is_finite):
            console.verbose(f"strictness: infinite gap for {codec.dump(q1)}, trying next pair")
            continue
        if gap_21.gap <= gap_12.gap:
            witness = Witness(WITNESS_STRICTNESS, q2, q1, gap_21)
        else:
            witness = Witness(WITNESS_STRICTNESS, q1, q2, gap_12)

        notes = [
            STRICTNESS_NOTE % (codec.dump(q1), codec.dump(q2)),
            f"Marginal collapse deviation: {max(collapse):.3g}.",
        ]
        if max(collapse) > cfg.margin(max(gap_21.stderr, gap_12.stderr)):
            notes.append("Equal-marginal targets scored differently.")
            return AuditVerdict(
                probe, loss, Outcome.NO_VIOLATION_FOUND, None, 2, notes,
                flags=[FLAG_IMPLEMENTATION_DEFECT],
            )
        if witness.gap.gap > cfg.margin(witness.gap.stderr):
            notes.append("Both gaps are positive beyond the margin.")
            return AuditVerdict(probe, loss, Outcome.NO_VIOLATION_FOUND, None, 2, notes)
        return AuditVerdict(
            probe, loss, Outcome.VIOLATION_FOUND, witness, 2, notes, flags=[FLAG_STRICTNESS]
        )

    return AuditVerdict(
        probe, loss, Outcome.CONDITIONS_NOT_MET,
        notes=[f"No equal-marginal {task} pair is supported by '{loss.name}'."],
    )


def order_sensitivity_probe(
    loss: SecondOrderLoss,
    q: SecondOrderDist,
    q_prime: SecondOrderDist,
    cfg: ProbeConfig,
) -> AuditVerdict:
    """
    Look for a certified increase of ``lam -> S2(mix(q_prime, q, lam), q)``.

    A proper loss gives a non-increasing curve, so an increase
    ``f(lam_j+1) > f(lam_j) + max(abs_tol, margin_factor * stderr)`` certifies
    impropriety. The largest such increase is the witness.

    Args:
        loss (SecondOrderLoss): The audited loss.
        q (SecondOrderDist): The target, reached at ``lam = 1``.
        q_prime (SecondOrderDist): The start of the path.
        cfg (ProbeConfig): Probe settings.

    Returns:
        AuditVerdict: The verdict with the curve as table ``order-sensitivity``.
    """
    probe = "order_sensitivity_probe"
    midpoint = mix(q_prime, q, 0.5)
    if not loss.supports(midpoint):
        return AuditVerdict(
            probe, loss, Outcome.CONDITIONS_NOT_MET,
            notes=[f"Loss '{loss.name}' cannot be evaluated at convex mixtures."],
        )

    curve = order_sensitivity_curve(
        loss, q, q_prime, cfg.lambdas(), cfg.method, cfg.nodes, cfg.mc_samples, cfg.seed
    )
    best: Optional[Witness] = None
    for (lam_a, f_a), (lam_b, f_b) in zip(curve, curve[1:]):
        step = ScoreGap.between(f_a, f_b)
        if cfg.certifies(step) and (best is None or step.gap < best.gap.gap):
            best = Witness(
                WITNESS_PATH, mix(q_prime, q, lam_a), q, step,
                reference=mix(q_prime, q, lam_b), lambdas=(lam_a, lam_b),
            )

    rows = tuple((lam, value.value, value.stderr) for lam, value in curve)
    tables = {"order-sensitivity": Table(("lambda", "value", "stderr"), rows, curve[0][1].method)}
    if best is not None:
        return AuditVerdict(probe, loss, Outcome.VIOLATION_FOUND, best, len(curve), tables=tables)
    return AuditVerdict(
        probe, loss, Outcome.NO_VIOLATION_FOUND, None, len(curve), [EVIDENCE_NOTE], tables=tables
    )


def _chord(lam: float, g_start: ScoreValue, g_end: ScoreValue) -> ScoreValue:
    value = (1.0 - lam) * g_start.value + lam * g_end.value
    stderr = math.hypot((1.0 - lam) * g_start.stderr, lam * g_end.stderr)
    return ScoreValue(value, stderr, g_start.method)


def generalized_entropy(
    loss: SecondOrderLoss, q: SecondOrderDist, cfg: ProbeConfig, seed: Optional[int] = None
) -> ScoreValue:
    """``G2(q) = S2(q, q)``, concave for every proper loss."""
    return s2(loss, q, q, cfg.method, cfg.nodes, cfg.mc_samples, cfg.seed if seed is None else seed)


def concavity_probe(
    loss: SecondOrderLoss,
    q: SecondOrderDist,
    q_tilde: SecondOrderDist,
    cfg: ProbeConfig,
) -> AuditVerdict:
    """
    Test concavity of ``G2(Q) = S2(Q, Q)`` along the segment from ``q_tilde``
    to ``q``.

    A point with ``G2(mix) < (1 - lam) G2(q_tilde) + lam G2(q)`` beyond the
    certification margin certifies impropriety.

    Args:
        loss (SecondOrderLoss): The audited loss.
        q (SecondOrderDist): End of the segment (``lam = 1``).
        q_tilde (SecondOrderDist): Start of the segment (``lam = 0``).
        cfg (ProbeConfig): Probe settings.

    Returns:
        AuditVerdict: The verdict with table ``concavity``.
    """
    probe = "concavity_probe"
    if not loss.supports(mix(q_tilde, q, 0.5)):
        return AuditVerdict(
            probe, loss, Outcome.CONDITIONS_NOT_MET,
            notes=[f"Loss '{loss.name}' cannot be evaluated at convex mixtures."],
        )

    g_start = generalized_entropy(loss, q_tilde, cfg)
    g_end = generalized_entropy(loss, q, cfg, cfg.seed + 1)
    best: Optional[Witness] = None
    rows = []
    for index, lam in enumerate(cfg.lambdas()):
        point = mix(q_tilde, q, lam)
        value = generalized_entropy(loss, point, cfg, cfg.seed + 2 + index)
        chord = _chord(lam, g_start, g_end)
        gap = ScoreGap.between(value, chord)
        rows.append((lam, value.value, chord.value))
        if 0 < lam < 1 and cfg.certifies(gap) and (best is None or gap.gap < best.gap.gap):
            best = Witness(WITNESS_CONCAVITY, point, q, gap, reference=q_tilde, lambdas=(lam,))

    tables = {"concavity": Table(("lambda", "g2", "chord"), tuple(rows), g_start.method)}
    if best is not None:
        return AuditVerdict(probe, loss, Outcome.VIOLATION_FOUND, best, len(rows), tables=tables)
    return AuditVerdict(
        probe, loss, Outcome.NO_VIOLATION_FOUND, None, len(rows), [EVIDENCE_NOTE], tables=tables
    )


def _suite(loss: SecondOrderLoss, size: int, seed: int) -> List[Pair]:
    task = loss.task or TASK_CLASSIFICATION
    box = FamilyBox.default("dirichlet" if task == TASK_CLASSIFICATION else "nig")
    pairs = [pair for pair in box.pairs(0, seed)][:size // 2]
    rng = np.random.default_rng(seed)
    while len(pairs) < size:
        pairs.append((box.draw(rng), box.draw(rng)))
    return [(a, b) for a, b in pairs if loss.supports(a) and loss.supports(b)]


def affine_invariance_check(
    loss: SecondOrderLoss,
    c: float,
    g: Tuple[float, ...],
    cfg: ProbeConfig,
    suite: Optional[Sequence[Pair]] = None,
) -> AuditVerdict:
    """
    Verify that ``c * L2 + g`` scales every propriety gap by exactly ``c``.

    The identity holds by linearity of expectation, so any deviation beyond
    ``abs_tol`` is flagged ``implementation defect``. Sign changes of a gap are
    reported as well.

    Args:
        loss (SecondOrderLoss): The inner loss.
        c (float): Positive scale.
        g (Tuple[float, ...]): Polynomial coefficients of the outcome shift.
        cfg (ProbeConfig): Probe settings.
        suite (Optional[Sequence[Pair]]): Explicit pairs; defaults to a random
            suite of 30 pairs from the loss's default family box.

    Returns:
        AuditVerdict: ``NoViolationFound`` when the identity holds everywhere.
    """
    probe = "affine_invariance_check"
    wrapped: AffineWrappedLoss = affine_wrap(loss, c, g)
    pairs = list(suite) if suite is not None else _suite(loss, DEFAULT_SUITE_SIZE, cfg.seed)

    rows = []
    worst: Optional[Witness] = None
    worst_deviation = 0.0
    for index, (q_hat, q) in enumerate(pairs):
        inner_gap = _gap(loss, q_hat, q, cfg, index)
        outer_gap = _gap(wrapped, q_hat, q, cfg, index)
        if not (inner_gap.is_finite and outer_gap.is_finite):
            continue
        scaled = c * inner_gap.gap
        deviation = abs(outer_gap.gap - scaled)
        tolerance = max(cfg.margin(outer_gap.stderr), cfg.abs_tol * abs(scaled))
        sign_flip = scaled * outer_gap.gap < 0 and min(abs(scaled), abs(outer_gap.gap)) > tolerance
        rows.append((float(index), inner_gap.gap, outer_gap.gap, deviation))
        if (deviation > tolerance or sign_flip) and deviation >= worst_deviation:
            worst_deviation = deviation
            worst = Witness(WITNESS_AFFINE, q_hat, q, outer_gap)

    tables = {
        "affine-gaps": Table(("probe", "inner_gap", "wrapped_gap", "deviation"), tuple(rows), cfg.method)
    }
    if worst is not None:
        return AuditVerdict(
            probe, wrapped, Outcome.VIOLATION_FOUND, worst, len(rows),
            [f"Gap identity off by {worst_deviation:.3g}."],
            flags=[FLAG_IMPLEMENTATION_DEFECT], tables=tables,
        )
    return AuditVerdict(probe, wrapped, Outcome.NO_VIOLATION_FOUND, None, len(rows), tables=tables)


def bayes_peakedness_sweep(
    alpha: Sequence[float], c_grid: Sequence[float], lam: float, kind: str = "ce"
) -> Table:
    """
    Tabulate ``S2(Bayes(lam), Dir(c * alpha), Dir(alpha))`` over ``c``.

    With ``lam = 0`` the values decrease in ``c``: the loss rewards ever more
    peaked predictions. Large ``lam`` makes them increase: flat predictions
    are rewarded instead.

    Args:
        alpha (Sequence[float]): Target Dirichlet parameters.
        c_grid (Sequence[float]): Positive, increasing scale factors.
        lam (float): Regularisation weight.
        kind (str): ``ce`` or ``brier``.

    Returns:
        Table: Columns ``c`` and ``value``, exact method.
    """
    grid = [float(c) for c in c_grid]
    if not grid or any(c <= 0 for c in grid) or any(a >= b for a, b in zip(grid, grid[1:])):
        raise InvalidArgumentException("c grid must be positive and strictly increasing.")

    loss = BayesLoss(lam, kind)
    target = Dirichlet(tuple(alpha))
    rows = []
    for c in grid:
        value = s2(loss, Dirichlet(tuple(c * a for a in target.alpha)), target)
        rows.append((c, value.value))
    return Table(("c", "value"), tuple(rows), value.method)


def revalidate(verdict: AuditVerdict, cfg: ProbeConfig) -> bool:
    """
    Recompute the witness of a ``ViolationFound`` verdict and confirm it.

    Monte-Carlo witnesses are recomputed with doubled samples and fresh
    seeds; deterministic witnesses with the same method.

    Args:
        verdict (AuditVerdict): The verdict.
        cfg (ProbeConfig): Probe settings of the original run.

    Returns:
        bool: Whether the recomputed witness keeps its certified sign.
    """
    witness, loss = verdict.witness, verdict.loss
    if witness is None or loss is None or not verdict.violated:
        return False

    seed = cfg.seed + 10_007
    args = (cfg.method, cfg.nodes, 2 * cfg.mc_samples)
    if witness.kind in (WITNESS_PROPRIETY, WITNESS_STRICTNESS):
        gap = score_gap(loss, witness.q_hat, witness.q, *args, seed=seed)
        if witness.kind == WITNESS_STRICTNESS:
            return gap.gap <= cfg.margin(gap.stderr)
        return cfg.certifies(gap, _residual_margin(loss, witness.q_hat, witness.q, cfg, gap))

    if witness.kind == WITNESS_PATH:
        lhs = s2(loss, witness.q_hat, witness.q, *args, seed=seed)
        rhs = s2(loss, witness.reference, witness.q, *args, seed=seed + 1)  # type: ignore[arg-type]
        return cfg.certifies(ScoreGap.between(lhs, rhs))

    if witness.kind == WITNESS_CONCAVITY:
        (lam,) = witness.lambdas
        double = ProbeConfig(seed, cfg.n_random_pairs, 2 * cfg.mc_samples, cfg.lambda_grid,
                             cfg.abs_tol, cfg.margin_factor, cfg.method, cfg.nodes)
        value = generalized_entropy(loss, witness.q_hat, double)
        chord = _chord(
            lam,
            generalized_entropy(loss, witness.reference, double, seed + 1),  # type: ignore[arg-type]
            generalized_entropy(loss, witness.q, double, seed + 2),
        )
        return cfg.certifies(ScoreGap.between(value, chord))

    if witness.kind == WITNESS_AFFINE and isinstance(loss, AffineWrappedLoss):
        inner_gap = score_gap(loss.inner, witness.q_hat, witness.q, *args, seed=seed)
        outer_gap = score_gap(loss, witness.q_hat, witness.q, *args, seed=seed)
        scaled = loss.c * inner_gap.gap
        return abs(outer_gap.gap - scaled) > max(cfg.margin(outer_gap.stderr), cfg.abs_tol * abs(scaled))

    raise InvalidArgumentException(REVALIDATE_KIND_ERROR % witness.kind)


__all__ = [
    "FamilyBox",
    "affine_invariance_check",
    "bayes_peakedness_sweep",
    "concavity_probe",
    "equal_marginal_pairs",
    "generalized_entropy",
    "order_sensitivity_probe",
    "propriety_search",
    "revalidate",
    "strictness_impossibility",
]
