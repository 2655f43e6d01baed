"""Weak generalized convolutions, weakly stable laws and their numerical checks."""

__version__ = "0.1.0"
