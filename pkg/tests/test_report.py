# type: ignore
# pylint: disable=all

import csv
import json
from unittest.mock import MagicMock, patch

import pytest

from scoreaudit.auditor import ProbeConfig, Table, order_sensitivity_probe
from scoreaudit.exceptions import ReportExistsException
from scoreaudit.losses import BayesLoss
from scoreaudit.report import Report, curve_path, render_curves, write_report
from scoreaudit.scoring import s2, score_gap
from scoreaudit.second_order import Dirichlet

TIMESTAMP = "2024-01-01T00:00:00+00:00"


@pytest.fixture
def report():
    loss, q_hat, q = BayesLoss(0.0), Dirichlet((2.0, 2.0)), Dirichlet((1.0, 1.0))
    report = Report("score", seed=7, config={"loss": "bayes-ce"})
    report.add_score("S2(q_hat, q)", s2(loss, q_hat, q))
    report.add_gap("gap", score_gap(loss, q_hat, q))
    report.add_verdict(order_sensitivity_probe(loss, q, q_hat, ProbeConfig(lambda_grid=11)))
    return report


class TestReport:
    def test__to_dict(self, report):
        data = report.to_dict(TIMESTAMP)
        assert data["tool"] == "scoreaudit"
        assert data["timestamp"] == TIMESTAMP
        assert data["seed"] == 7
        assert data["scores"][0]["value"] == pytest.approx(5.0 / 6.0)
        assert data["gaps"][0]["gap"] == pytest.approx(-1.0 / 6.0)
        assert data["verdicts"][0]["outcome"] == "ViolationFound"
        assert list(data["curves"]) == ["order_sensitivity_probe-order-sensitivity"]

    def test__add_curve_makes_ids_unique(self):
        report = Report("sweep")
        table = Table(("c", "value"), ((1.0, 1.0),), "exact")
        assert report.add_curve("peakedness", table) == "peakedness"
        assert report.add_curve("peakedness", table) == "peakedness-2"
        assert report.add_curve("peakedness", table) == "peakedness-3"

    def test__curve_path(self):
        assert curve_path("out/run", "peakedness") == "out/run-peakedness.csv"


class TestWriteReport:
    @patch("scoreaudit.report.console.info")
    def test__writes_json(self, mock_info: MagicMock, report, tmp_path):
        prefix = str(tmp_path / "run")
        path = write_report(report, prefix, timestamp=TIMESTAMP)
        assert path == f"{prefix}.json"
        with open(path, encoding="utf-8") as report_file:
            data = json.load(report_file)
        assert data == json.loads(json.dumps(report.to_dict(TIMESTAMP)))
        mock_info.assert_called_once_with(f"Report written: {path}")

    @patch("scoreaudit.report.console.info")
    def test__identical_runs_give_identical_documents(self, _mock_info, report, tmp_path):
        first = write_report(report, str(tmp_path / "a"), timestamp=TIMESTAMP)
        second = write_report(report, str(tmp_path / "b"), timestamp=TIMESTAMP)
        with open(first, encoding="utf-8") as a, open(second, encoding="utf-8") as b:
            assert a.read() == b.read()

    @patch("scoreaudit.report.console.info")
    def test__existing_report(self, _mock_info, report, tmp_path):
        prefix = str(tmp_path / "run")
        write_report(report, prefix, timestamp=TIMESTAMP)
        with pytest.raises(ReportExistsException):
            write_report(report, prefix, timestamp=TIMESTAMP)
        write_report(report, prefix, force=True, timestamp=TIMESTAMP)


class TestRenderCurves:
    @patch("scoreaudit.report.console.info")
    def test__writes_csv(self, _mock_info, report, tmp_path):
        prefix = str(tmp_path / "run")
        (path,) = render_curves(report, prefix)
        with open(path, encoding="utf-8", newline="") as curve_file:
            rows = list(csv.reader(curve_file))
        assert rows[0] == ["lambda", "value", "stderr", "method"]
        assert len(rows) == 12
        assert float(rows[1][1]) == pytest.approx(5.0 / 6.0, abs=1e-15)
        assert rows[1][3] == "exact"

    def test__no_curves(self, tmp_path):
        assert render_curves(Report("score"), str(tmp_path / "run")) == []
        assert list(tmp_path.iterdir()) == []

    @patch("scoreaudit.report.console.info")
    def test__existing_curve(self, _mock_info, report, tmp_path):
        prefix = str(tmp_path / "run")
        render_curves(report, prefix)
        with pytest.raises(ReportExistsException):
            render_curves(report, prefix)
