"""
Run reports: one JSON document per run plus one CSV file per curve table.
"""

import csv
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from . import console
from .__version__ import __version__
from .auditor import AuditVerdict, Table
from .constants import CSV_FLOAT_FORMAT
from .exceptions import ReportExistsException
from .messages import CURVE_WRITTEN, REPORT_EXISTS_ERROR, REPORT_WRITTEN
from .values import ScoreGap, ScoreValue


@dataclass
class Report:
    """
    Everything a run produced.

    Attributes:
        command (str): The CLI command.
        seed (Optional[int]): The run seed.
        config (Dict[str, Any]): The resolved run configuration.
        scores (List[Dict[str, Any]]): Labelled score values.
        gaps (List[Dict[str, Any]]): Labelled score gaps.
        verdicts (List[AuditVerdict]): Audit verdicts in run order.
        curves (Dict[str, Table]): Curve tables keyed by curve id.
    """

    command: str
    seed: Optional[int] = None
    config: Dict[str, Any] = field(default_factory=dict)
    scores: List[Dict[str, Any]] = field(default_factory=list)
    gaps: List[Dict[str, Any]] = field(default_factory=list)
    verdicts: List[AuditVerdict] = field(default_factory=list)
    curves: Dict[str, Table] = field(default_factory=dict)

    def add_score(self, label: str, value: ScoreValue) -> None:
        """Record a score value."""
        self.scores.append(value.to_dict(label))

    def add_gap(self, label: str, gap: ScoreGap) -> None:
        """Record a score gap."""
        data = gap.to_dict()
        data["label"] = label
        self.gaps.append(data)

    def add_curve(self, curve_id: str, table: Table) -> str:
        """
        Record a curve table under a unique id.

        Args:
            curve_id (str): Preferred id; a numeric suffix is appended when it
                is taken.
            table (Table): The table.

        Returns:
            str: The id the table was stored under.
        """
        unique = curve_id
        suffix = 2
        while unique in self.curves:
            unique = f"{curve_id}-{suffix}"
            suffix += 1
        self.curves[unique] = table
        return unique

    def add_verdict(self, verdict: AuditVerdict) -> None:
        """Record a verdict and its trace tables as curves."""
        self.verdicts.append(verdict)
        for name, table in verdict.tables.items():
            self.add_curve(f"{verdict.probe}-{name}", table)

    def to_dict(self, timestamp: Optional[str] = None) -> Dict[str, Any]:
        """
        Return the report as a JSON-ready dictionary.

        Args:
            timestamp (Optional[str]): ISO timestamp; defaults to now (UTC).
                It is the only field that differs between identical runs.
        """
        return {
            "tool": "scoreaudit",
            "version": __version__,
            "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "scores": self.scores,
            "gaps": self.gaps,
            "verdicts": [verdict.to_dict() for verdict in self.verdicts],
            "curves": {curve_id: table.to_dict() for curve_id, table in self.curves.items()},
        }


def _check_writable(path: str, force: bool) -> None:
    if os.path.exists(path) and not force:
        raise ReportExistsException(REPORT_EXISTS_ERROR % path)


def curve_path(prefix: str, curve_id: str) -> str:
    """File name of a curve: ``{prefix}-{curve_id}.csv``."""
    return f"{prefix}-{curve_id}.csv"


def write_report(
    report: Report, prefix: str, force: bool = False, timestamp: Optional[str] = None
) -> str:
    """
    Write the JSON report to ``{prefix}.json``.

    Keys are sorted so identical runs produce identical documents apart from
    the timestamp.

    Args:
        report (Report): The report.
        prefix (str): Output path prefix.
        force (bool): Whether an existing report may be overwritten.
        timestamp (Optional[str]): Fixed timestamp, mainly for tests.

    Returns:
        str: The written path.

    Raises:
        ReportExistsException: If the file exists and ``force`` is False.
    """
    path = f"{prefix}.json"
    _check_writable(path, force)
    with open(path, "w", encoding="utf-8") as report_file:
        json.dump(report.to_dict(timestamp), report_file, indent=2, sort_keys=True)
        report_file.write("\n")
    console.verbose(f"wrote {len(report.verdicts)} verdict(s) to {path}")
    console.info(REPORT_WRITTEN % path)
    return path


def _cell(value: float) -> str:
    return format(value, CSV_FLOAT_FORMAT)


def render_curves(report: Report, prefix: str, force: bool = False) -> List[str]:
    """
    Write every curve table of a report as a CSV file.

    Each file has a header row with the column names followed by one row per
    grid point; values carry 17 significant digits. A report without curves
    writes nothing.

    Args:
        report (Report): The report.
        prefix (str): Output path prefix.
        force (bool): Whether existing files may be overwritten.

    Returns:
        List[str]: The written paths, in curve order.

    Raises:
        ReportExistsException: If a file exists and ``force`` is False.
    """
    paths = [curve_path(prefix, curve_id) for curve_id in report.curves]
    for path in paths:
        _check_writable(path, force)

    for path, table in zip(paths, report.curves.values()):
        with open(path, "w", encoding="utf-8", newline="") as curve_file:
            writer = csv.writer(curve_file)
            writer.writerow([*table.columns, "method"])
            for row in table.rows:
                writer.writerow([*(_cell(v) for v in row), table.method])
        console.info(CURVE_WRITTEN % path)
    return paths


__all__ = [
    "Report",
    "curve_path",
    "render_curves",
    "write_report",
]
