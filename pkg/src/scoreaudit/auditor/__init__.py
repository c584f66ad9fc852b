"""Propriety auditor: probes, counterexample constructors and verdicts."""

from .counterexamples import (
    classif_counterexample_i,
    classif_counterexample_ii,
    der_lambda_sweep,
    der_proposition_demo,
    near_dirac_nig,
    regress_counterexample_i,
    regress_counterexample_ii,
    threshold,
    threshold_gap,
)
from .probes import (
    FamilyBox,
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
from .verdict import AuditVerdict, Outcome, ProbeConfig, Table, Witness

__all__ = [
    "AuditVerdict",
    "FamilyBox",
    "Outcome",
    "ProbeConfig",
    "Table",
    "Witness",
    "affine_invariance_check",
    "bayes_peakedness_sweep",
    "classif_counterexample_i",
    "classif_counterexample_ii",
    "concavity_probe",
    "der_lambda_sweep",
    "der_proposition_demo",
    "equal_marginal_pairs",
    "generalized_entropy",
    "near_dirac_nig",
    "order_sensitivity_probe",
    "propriety_search",
    "regress_counterexample_i",
    "regress_counterexample_ii",
    "revalidate",
    "strictness_impossibility",
    "threshold",
    "threshold_gap",
]
