"""Bounds on Takacs-equation roots and large-buffer loss probabilities."""

__version__ = "0.1.0"
