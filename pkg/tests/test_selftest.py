# type: ignore
# pylint: disable=all

from unittest.mock import MagicMock, patch

import pytest

from scoreaudit.auditor import ProbeConfig
from scoreaudit.losses import LOSS_NAMES
from scoreaudit.selftest import (
    INVARIANT_CHECKS,
    AffineIdentityCheck,
    BayesCertificateCheck,
    DERPropositionCheck,
    FirstOrderIdentityCheck,
    InvariantCheck,
    MarginalCollapseCheck,
    OrderSensitivityCheck,
    ThresholdEquivalenceCheck,
    run_checks,
    zoo,
)


class AlwaysFailingCheck(InvariantCheck):
    def check(self) -> None:
        self.add_error("always fails")


class AnotherFailingCheck(InvariantCheck):
    def check(self) -> None:
        self.add_error("fails too")


@pytest.fixture(scope="module")
def cfg():
    return ProbeConfig(seed=0, n_random_pairs=0)


def test__zoo():
    assert [loss.name for loss in zoo()] == list(LOSS_NAMES)


@pytest.mark.parametrize(
    "check_class",
    [
        FirstOrderIdentityCheck,
        MarginalCollapseCheck,
        BayesCertificateCheck,
        OrderSensitivityCheck,
        AffineIdentityCheck,
        ThresholdEquivalenceCheck,
        DERPropositionCheck,
    ],
)
def test__invariant_holds(check_class, cfg):
    check = check_class(cfg)
    assert check.is_valid(), check.errors()


def test__add_error_prefixes_check_name(cfg):
    check = AlwaysFailingCheck(cfg)
    assert not check.is_valid()
    assert check.errors() == ["AlwaysFailingCheck: always fails"]


def test__run_checks__collects_all_errors(cfg):
    success, errors = run_checks(cfg, [AlwaysFailingCheck, AnotherFailingCheck])
    assert not success
    assert errors == ["AlwaysFailingCheck: always fails", "AnotherFailingCheck: fails too"]


def test__run_checks__fail_fast(cfg):
    success, errors = run_checks(cfg, [AlwaysFailingCheck, AnotherFailingCheck], fail_fast=True)
    assert not success
    assert errors == ["AlwaysFailingCheck: always fails"]


@patch("scoreaudit.selftest.console.verbose")
def test__run_checks__success(mock_verbose: MagicMock, cfg):
    success, errors = run_checks(cfg, [FirstOrderIdentityCheck])
    assert success
    assert errors == []
    mock_verbose.assert_called_once_with("running check FirstOrderIdentityCheck")


def test__suite_lists_every_check():
    assert len(INVARIANT_CHECKS) == 7
