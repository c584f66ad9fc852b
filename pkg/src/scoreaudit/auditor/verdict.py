"""
Probe configuration, verdicts, witnesses and trace tables of the auditor.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .. import codec
from ..constants import (
    DEFAULT_ABS_TOL,
    DEFAULT_LAMBDA_GRID,
    DEFAULT_MARGIN_FACTOR,
    DEFAULT_RANDOM_PAIRS,
    MIN_LAMBDA_GRID,
    MIN_MARGIN_FACTOR,
    MIN_NODES,
    get_default_mc_samples,
)
from ..exceptions import InvalidArgumentException
from ..losses import SecondOrderLoss
from ..messages import PROBE_CONFIG_ERROR, TABLE_ROW_ERROR, WITNESS_REQUIRED_ERROR
from ..scoring import METHODS
from ..second_order import SecondOrderDist
from ..values import ScoreGap, format_number

FLAG_STRICTNESS = "strictness"
FLAG_IMPLEMENTATION_DEFECT = "implementation defect"

WITNESS_PROPRIETY = "propriety"
WITNESS_PATH = "path"
WITNESS_CONCAVITY = "concavity"
WITNESS_STRICTNESS = "strictness"
WITNESS_AFFINE = "affine"


class Outcome(str, Enum):
    """Outcome of a probe."""

    NO_VIOLATION_FOUND = "NoViolationFound"
    VIOLATION_FOUND = "ViolationFound"
    CONDITIONS_NOT_MET = "ConditionsNotMet"


@dataclass(frozen=True)
class ProbeConfig:
    """Settings shared by all probes; validated on construction."""

    seed: int = 0
    n_random_pairs: int = DEFAULT_RANDOM_PAIRS
    mc_samples: int = field(default_factory=get_default_mc_samples)
    lambda_grid: int = DEFAULT_LAMBDA_GRID
    abs_tol: float = DEFAULT_ABS_TOL
    margin_factor: float = DEFAULT_MARGIN_FACTOR
    method: str = "auto"
    nodes: Optional[int] = None

    def __post_init__(self) -> None:
        problems = []
        if not (math.isfinite(self.abs_tol) and self.abs_tol > 0):
            problems.append(f"abs_tol must be > 0, got {self.abs_tol}")
        if not self.margin_factor >= MIN_MARGIN_FACTOR:
            problems.append(
                f"margin_factor must be >= {MIN_MARGIN_FACTOR:g}, got {self.margin_factor}"
            )
        if self.lambda_grid < MIN_LAMBDA_GRID:
            problems.append(
                f"lambda_grid must be >= {MIN_LAMBDA_GRID}, got {self.lambda_grid}"
            )
        if self.n_random_pairs < 0:
            problems.append(f"n_random_pairs must be >= 0, got {self.n_random_pairs}")
        if self.mc_samples < 2:
            problems.append(f"mc_samples must be >= 2, got {self.mc_samples}")
        if self.method not in METHODS:
            problems.append(f"method must be one of {', '.join(METHODS)}, got {self.method}")
        if self.nodes is not None and self.nodes < MIN_NODES:
            problems.append(f"nodes must be >= {MIN_NODES}, got {self.nodes}")
        if problems:
            raise InvalidArgumentException(PROBE_CONFIG_ERROR % "; ".join(problems))

    def margin(self, stderr: float) -> float:
        """Certification margin ``max(abs_tol, margin_factor * stderr)``."""
        return max(self.abs_tol, self.margin_factor * stderr)

    def certifies(self, gap: ScoreGap, extra_margin: float = 0.0) -> bool:
        """
        Whether a gap is a certified violation.

        Args:
            gap (ScoreGap): The gap.
            extra_margin (float): A deterministic error bound to respect as
                well, e.g. a quadrature residual scaled by ``margin_factor``.

        Returns:
            bool: ``gap < -max(abs_tol, margin_factor * stderr, extra_margin)``.
        """
        margin = max(self.margin(gap.stderr), extra_margin)
        return gap.is_finite and gap.gap < -margin

    def lambdas(self) -> List[float]:
        """Uniform mixing-weight grid with ``lambda_grid`` points on ``[0, 1]``."""
        return np.linspace(0.0, 1.0, self.lambda_grid).tolist()

    def to_dict(self) -> Dict[str, Any]:
        """Return the configuration as a JSON-ready dictionary."""
        return {
            "seed": self.seed,
            "n_random_pairs": self.n_random_pairs,
            "mc_samples": self.mc_samples,
            "lambda_grid": self.lambda_grid,
            "abs_tol": self.abs_tol,
            "margin_factor": self.margin_factor,
            "method": self.method,
            "nodes": self.nodes,
        }


@dataclass(frozen=True)
class Witness:
    """
    A pair of predictions exhibiting a violation.

    ``gap`` is ``S2(q_hat, q) - S2(reference, q)``, where the reference
    defaults to ``q`` itself.
    """

    kind: str
    q_hat: SecondOrderDist
    q: SecondOrderDist
    gap: ScoreGap
    reference: Optional[SecondOrderDist] = None
    lambdas: Tuple[float, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        """Return the witness as a JSON-ready dictionary."""
        data: Dict[str, Any] = {
            "kind": self.kind,
            "q_hat": codec.dump(self.q_hat),
            "q": codec.dump(self.q),
            "gap": self.gap.to_dict(),
        }
        if self.reference is not None:
            data["reference"] = codec.dump(self.reference)
        if self.lambdas:
            data["lambdas"] = [format_number(lam) for lam in self.lambdas]
        return data


@dataclass(frozen=True)
class Table:
    """A named trace table; every value shares one method tag."""

    columns: Tuple[str, ...]
    rows: Tuple[Tuple[float, ...], ...]
    method: str

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise InvalidArgumentException(
                    TABLE_ROW_ERROR % (len(row), len(self.columns))
                )

    def column(self, name: str) -> List[float]:
        """Values of one column."""
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def to_dict(self) -> Dict[str, Any]:
        """Return the table as a JSON-ready dictionary."""
        return {
            "columns": list(self.columns),
            "method": self.method,
            "rows": [[format_number(v) for v in row] for row in self.rows],
        }


@dataclass
class AuditVerdict:
    """
    Result of a probe.

    A ViolationFound witness normally has a gap below ``-margin``. Verdicts
    flagged ``strictness`` are the exception: their witness is a pair of
    distinct predictions whose gap is 0 within the margin, which is what
    rules out strict propriety. Use ``certified_gap`` to tell them apart.

    Attributes:
        probe (str): Name of the probe that produced the verdict.
        loss (Optional[SecondOrderLoss]): The audited loss.
        outcome (Outcome): The outcome.
        witness (Optional[Witness]): Present whenever a violation was found.
        probes_run (int): Number of evaluated probe points.
        notes (List[str]): Human-readable remarks.
        flags (List[str]): Machine-readable markers, e.g. ``strictness``.
        tables (Dict[str, Table]): Trace tables keyed by curve id.
    """

    probe: str
    loss: Optional[SecondOrderLoss]
    outcome: Outcome
    witness: Optional[Witness] = None
    probes_run: int = 0
    notes: List[str] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    tables: Dict[str, Table] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.outcome is Outcome.VIOLATION_FOUND and self.witness is None:
            raise InvalidArgumentException(WITNESS_REQUIRED_ERROR)

    @property
    def violated(self) -> bool:
        """Whether a violation was found."""
        return self.outcome is Outcome.VIOLATION_FOUND

    @property
    def certified_gap(self) -> bool:
        """Whether the violation rests on a negative gap rather than a tie."""
        return self.violated and FLAG_STRICTNESS not in self.flags

    def summary(self) -> str:
        """One-line summary for console output."""
        line = f"{self.probe}: {self.outcome.value} ({self.probes_run} probes)"
        if self.witness is not None:
            line += f", gap {self.witness.gap.gap:.6g} +/- {self.witness.gap.stderr:.2g}"
        return line

    def to_dict(self) -> Dict[str, Any]:
        """Return the verdict as a JSON-ready dictionary."""
        return {
            "probe": self.probe,
            "loss": None if self.loss is None else codec.dump(self.loss),
            "outcome": self.outcome.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "probes_run": self.probes_run,
            "notes": list(self.notes),
            "flags": list(self.flags),
            "tables": {name: table.to_dict() for name, table in self.tables.items()},
        }


__all__ = [
    "AuditVerdict",
    "Outcome",
    "ProbeConfig",
    "Table",
    "Witness",
]
