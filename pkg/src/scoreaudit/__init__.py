"""Main module for scoreaudit."""

from .scoring import s2, score_gap

__all__ = ["s2", "score_gap"]
