"""
Process-wide console settings of scoreaudit.

The CLI sets them once per run from ``--quiet`` and ``--verbose``; the
``console`` module reads them before printing verdict summaries, progress
lines and errors. Report and curve files are written regardless.
"""

from typing import Optional


class _ScoreauditConfig:
    """
    Singleton holding the console verbosity of an audit run.

    ``quiet`` and ``verbose`` are mutually exclusive: switching one on
    switches the other off.
    """

    _instance: Optional["_ScoreauditConfig"] = None

    _verbose: bool = False
    _quiet: bool = False

    def __new__(cls) -> "_ScoreauditConfig":
        if cls._instance is None:
            cls._instance = super().__new__(cls)

        return cls._instance

    @property
    def verbose(self) -> bool:
        """Whether progress lines such as per-probe evaluation counts are shown."""
        return self._verbose

    @verbose.setter
    def verbose(self, value: bool) -> None:
        if value:
            self._quiet = False

        self._verbose = value

    @property
    def quiet(self) -> bool:
        """Whether all console output, errors included, is suppressed."""
        return self._quiet

    @quiet.setter
    def quiet(self, value: bool) -> None:
        if value:
            self._verbose = False

        self._quiet = value

    def configure(self, quiet: bool = False, verbose: bool = False) -> None:
        """
        Apply the verbosity flags of one CLI invocation.

        Args:
            quiet (bool): Suppress console output.
            verbose (bool): Print progress lines as well.
        """
        self.quiet = quiet
        self.verbose = verbose

    def reset(self) -> None:
        """Restore the default verbosity: summaries and errors, no progress lines."""
        self.configure()


config = _ScoreauditConfig()

__all__ = [
    "config",
]
