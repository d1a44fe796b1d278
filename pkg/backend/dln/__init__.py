"""Defeasible description-logic reasoner for ALC extended with normality concepts."""

__version__ = "0.3.0"
