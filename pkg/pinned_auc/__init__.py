"""Pinned AUC decomposition and threshold-agnostic subgroup bias metrics."""

__version__ = "0.1.0"
