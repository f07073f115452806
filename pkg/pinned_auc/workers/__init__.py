"""Execution pools for independent units of work."""

from .trial_pool import TrialOutcome, TrialPool

__all__ = ["TrialOutcome", "TrialPool"]
