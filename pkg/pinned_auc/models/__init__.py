"""Domain containers."""

from .dataset import Dataset
from .pinned import PinnedEntry, PinnedSet

__all__ = [
    "Dataset",
    "PinnedEntry",
    "PinnedSet",
]
