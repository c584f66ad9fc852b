# type: ignore
# pylint: disable=all

from typing import Generator

import pytest

from scoreaudit.config import _ScoreauditConfig as ScoreauditConfig


@pytest.fixture
def config_instance() -> Generator[ScoreauditConfig, None, None]:
    config = ScoreauditConfig()
    yield config
    config.reset()


class TestScoreauditConfig:
    def test_singleton_instance(self, config_instance: ScoreauditConfig) -> None:
        assert config_instance is ScoreauditConfig()

    def test_verbose_property(self, config_instance: ScoreauditConfig) -> None:
        config = config_instance
        config.quiet = True
        config.verbose = True
        assert config.verbose
        assert not config.quiet

    def test_quiet_property(self, config_instance: ScoreauditConfig) -> None:
        config = config_instance
        config.verbose = True
        config.quiet = True
        assert config.quiet
        assert not config.verbose

    def test_configure(self, config_instance: ScoreauditConfig) -> None:
        config = config_instance
        config.configure(verbose=True)
        assert config.verbose
        assert not config.quiet

    def test_reset(self, config_instance: ScoreauditConfig) -> None:
        config = config_instance
        config.configure(quiet=True)
        config.reset()
        assert not config.quiet
        assert not config.verbose
