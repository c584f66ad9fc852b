"""
This module contains the version information of the current scoreaudit.
NOTE: The version is auto-updated by release-please action.
"""

__version__ = "0.1.0"  # x-release-please-version
