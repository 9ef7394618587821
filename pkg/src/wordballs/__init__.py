"""Exact quasi-metrics on finite and infinite words and their formal balls."""

from .formal_balls import FormalBall
from .metrics import BAIRE, D0, DW, QB, Metric, dist
from .words import Alphabet, Word, format_word, parse_word

__all__ = [
    "Alphabet", "Word", "parse_word", "format_word",
    "Metric", "BAIRE", "DW", "D0", "QB", "dist",
    "FormalBall",
]
__version__ = "0.1.0"
