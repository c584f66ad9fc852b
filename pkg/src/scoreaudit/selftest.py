"""
Invariant suite behind ``scoreaudit selftest``.

Every check is an ``InvariantCheck`` subclass that records the violations it
finds; ``run_checks`` runs a list of them and collects the errors.
"""

import math
from abc import ABC, abstractmethod
from typing import List, Tuple, Type

import numpy as np
from scipy import special

from . import console
from .auditor import (
    ProbeConfig,
    affine_invariance_check,
    bayes_peakedness_sweep,
    classif_counterexample_i,
    der_proposition_demo,
    equal_marginal_pairs,
    order_sensitivity_probe,
    strictness_impossibility,
    threshold,
    threshold_gap,
)
from .auditor.verdict import FLAG_STRICTNESS
from .first_order import Categorical, s1
from .losses import LOSS_NAMES, BayesLoss, SecondOrderLoss, der_loss, get_loss
from .scoring import s2
from .second_order import Dirichlet

IDENTITY_TOL = 1e-12
COLLAPSE_TOL = 1e-9
AFFINE_SCALE = 3.7
AFFINE_SHIFT = (0.0, 0.0, 1.0)
PEAKEDNESS_GRID = (1.0, 2.0, 4.0, 8.0, 16.0)


def zoo() -> List[SecondOrderLoss]:
    """Every registered loss with its default regularisation weight."""
    return [get_loss(name) for name in LOSS_NAMES]


class InvariantCheck(ABC):
    """Abstract base of a self-test invariant."""

    def __init__(self, cfg: ProbeConfig) -> None:
        self._cfg = cfg
        self._errors: List[str] = []

        # start checking
        self.check()

    @abstractmethod
    def check(self) -> None:
        """Performs the check."""
        raise NotImplementedError  # pragma: no cover

    def add_error(self, error: str) -> None:
        """Adds an error to the list of errors."""
        self._errors.append(f"{type(self).__name__}: {error}")

    def is_valid(self) -> bool:
        """Checks if there are any errors."""
        return len(self._errors) == 0

    def errors(self) -> List[str]:
        """Get the list of errors."""
        return self._errors

    @property
    def cfg(self) -> ProbeConfig:
        """Gets the probe configuration."""
        return self._cfg


class FirstOrderIdentityCheck(InvariantCheck):
    """Brier gaps are squared distances and CE gaps are KL divergences."""

    pairs_per_size = 200

    def check(self) -> None:
        rng = np.random.default_rng(self.cfg.seed)
        for k in (2, 3, 5):
            for _ in range(self.pairs_per_size):
                p_hat = Categorical(tuple(rng.dirichlet(np.ones(k))))
                p = Categorical(tuple(rng.dirichlet(np.ones(k))))
                brier = s1("brier", p_hat, p).value - s1("brier", p, p).value
                distance = float(np.sum((p_hat.as_array() - p.as_array()) ** 2))
                ce = s1("ce", p_hat, p).value - s1("ce", p, p).value
                kl = float(special.rel_entr(p.as_array(), p_hat.as_array()).sum())
                if abs(brier - distance) > IDENTITY_TOL or abs(ce - kl) > IDENTITY_TOL:
                    self.add_error(f"identity fails at {p_hat} vs {p}")
                    return


class MarginalCollapseCheck(InvariantCheck):
    """Equal-marginal targets score identically and strictness fails for every loss."""

    pairs = 10

    def check(self) -> None:
        for loss in zoo():
            pairs = equal_marginal_pairs(loss.task or "classification", self.pairs, self.cfg.seed)
            for q_a, q_b in pairs:
                q_hat = q_a if loss.supports(q_a) else q_b
                if not loss.supports(q_hat):
                    continue
                lhs = s2(loss, q_hat, q_a, nodes=self.cfg.nodes).value
                rhs = s2(loss, q_hat, q_b, nodes=self.cfg.nodes).value
                if abs(lhs - rhs) > COLLAPSE_TOL:
                    self.add_error(f"{loss.name}: scores differ by {abs(lhs - rhs):.3g}")

            verdict = strictness_impossibility(loss, loss.task or "classification", self.cfg)
            if not verdict.violated or FLAG_STRICTNESS not in verdict.flags:
                self.add_error(f"{loss.name}: no strictness witness")


class BayesCertificateCheck(InvariantCheck):
    """``S2(Dir(2,2), Dir(1,1)) = 5/6`` and ``S2(Dir(1,1), Dir(1,1)) = 1`` for Bayes CE."""

    def check(self) -> None:
        loss = BayesLoss(0.0)
        flat, peaked = Dirichlet((1.0, 1.0)), Dirichlet((2.0, 2.0))
        if abs(s2(loss, peaked, flat).value - 5.0 / 6.0) > COLLAPSE_TOL:
            self.add_error("S2(Dir(2,2), Dir(1,1)) != 5/6")
        if abs(s2(loss, flat, flat).value - 1.0) > COLLAPSE_TOL:
            self.add_error("S2(Dir(1,1), Dir(1,1)) != 1")

        values = bayes_peakedness_sweep((1.0, 1.0), PEAKEDNESS_GRID, 0.0).column("value")
        if any(b >= a for a, b in zip(values, values[1:])):
            self.add_error("peakedness sweep is not strictly decreasing")
        if abs(values[-1] - math.log(2.0)) > 0.05:
            self.add_error(f"peakedness sweep ends at {values[-1]:.6g}, far from log 2")


class OrderSensitivityCheck(InvariantCheck):
    """The Bayes CE witness shows up as an increase along its mixing path."""

    def check(self) -> None:
        verdict = order_sensitivity_probe(
            BayesLoss(0.0), Dirichlet((1.0, 1.0)), Dirichlet((2.0, 2.0)), self.cfg
        )
        if not verdict.violated:
            self.add_error("no certified increase along Dir(2,2) -> Dir(1,1)")


class AffineIdentityCheck(InvariantCheck):
    """Affine wrapping scales every gap by ``c``."""

    def check(self) -> None:
        for loss in zoo():
            verdict = affine_invariance_check(loss, AFFINE_SCALE, AFFINE_SHIFT, self.cfg)
            if verdict.violated:
                self.add_error(f"{loss.name}: {'; '.join(verdict.notes)}")


class ThresholdEquivalenceCheck(InvariantCheck):
    """``m < B / (A + B)`` holds exactly when ``m * A - (1 - m) * B < 0``."""

    quadruples = 1000

    def check(self) -> None:
        rng = np.random.default_rng(self.cfg.seed)
        for tilde_0, tilde_1, at_0, at_1 in rng.uniform(0.0, 5.0, size=(self.quadruples, 4)):
            a, b = tilde_1 - at_1, at_0 - tilde_0
            if a + b <= 0:
                continue
            m = float(rng.uniform())
            limit, gap = threshold(a, b), threshold_gap(m, a, b)
            if abs(m - limit) * abs(a + b) <= IDENTITY_TOL:
                continue
            if (m < limit) != (gap < 0):
                self.add_error(f"equivalence fails at m={m!r}, A={a!r}, B={b!r}")
                return

        verdict = classif_counterexample_i(get_loss("mean-brier"), self.cfg)
        if verdict.violated:
            self.add_error("mean-brier construction reported a violation")
        table = verdict.tables.get("threshold")
        if table is None or any(
            abs(limit - m / 2.0) > IDENTITY_TOL for m, limit in zip(table.column("m"), table.column("threshold"))
        ):
            self.add_error("mean-brier threshold curve differs from m/2")


class DERPropositionCheck(InvariantCheck):
    """Anchor value of the DER loss and the point-prediction counterexample."""

    def check(self) -> None:
        anchor = der_loss((0.0, 1.0, 1.0, 1.0), 0.0)
        if abs(anchor - 2.0 * math.log(2.0)) > IDENTITY_TOL:
            self.add_error(f"L_DER((0,1,1,1), 0) = {anchor!r}, expected 2 log 2")
        if not der_proposition_demo(0.0, 0.1, self.cfg).violated:
            self.add_error("DER demonstration did not certify a violation")


INVARIANT_CHECKS: List[Type[InvariantCheck]] = [
    FirstOrderIdentityCheck,
    MarginalCollapseCheck,
    BayesCertificateCheck,
    OrderSensitivityCheck,
    AffineIdentityCheck,
    ThresholdEquivalenceCheck,
    DERPropositionCheck,
]


def run_checks(
    cfg: ProbeConfig,
    check_classes: List[Type[InvariantCheck]] = INVARIANT_CHECKS,
    fail_fast: bool = False,
) -> Tuple[bool, List[str]]:
    """Runs the provided invariant checks.

    Args:
        cfg (ProbeConfig): Probe settings shared by the checks.
        check_classes (List[Type[InvariantCheck]]): Checks to run.
        fail_fast (bool, optional): Return early if one check fails. Defaults to
            False.

    Returns:
        Tuple[bool, List[str]]: Returns success as the first element and a list of
            errors as the second element. If success is True, errors will be empty.
    """
    success = True
    errors: List[str] = []

    for check_class in check_classes:
        console.verbose(f"running check {check_class.__name__}")
        check = check_class(cfg)
        if not check.is_valid():
            console.verbose(f"{check_class.__name__}: check failed")
            if fail_fast:
                return False, check.errors()

            success = False
            errors.extend(check.errors())

    return success, errors


__all__ = [
    "INVARIANT_CHECKS",
    "InvariantCheck",
    "run_checks",
    "zoo",
]
