"""Translate LaTeX documents containing mathematics, formula by formula intact."""

__version__ = "0.1.0"
