"""Pinned set: a subgroup sample merged with an equally sized background sample."""

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt

from ..schemas.common import CellCounts, Label, Origin
from ..schemas.dataset import LabeledExample
from ..schemas.metrics import SamplePolicy
from .dataset import Dataset, FloatArray, IndexArray


@dataclass(frozen=True)
class PinnedEntry:
    """One pinned-set entry and the sample it came from."""

    example: LabeledExample
    origin: Origin


@dataclass(frozen=True, eq=False)
class PinnedSet:
    """
    Entries are positions into ``dataset``; the same example may appear more than once
    (in both samples, or repeatedly when sampling with replacement).
    """

    dataset: Dataset
    indices: IndexArray
    from_subgroup: npt.NDArray[np.bool_]
    subgroup: str
    seed: int
    policy: SamplePolicy = field(default_factory=SamplePolicy)

    def __post_init__(self) -> None:
        if self.indices.shape != self.from_subgroup.shape:
            raise ValueError("indices and origins must have the same length")
        self.indices.flags.writeable = False
        self.from_subgroup.flags.writeable = False

    @classmethod
    def from_entries(
        cls,
        entries: Iterable[tuple[LabeledExample, Origin]],
        subgroup: str,
        seed: int = 0,
        policy: SamplePolicy | None = None,
    ) -> "PinnedSet":
        """Build a pinned set from explicit (example, origin) pairs."""
        positions: dict[str, int] = {}
        unique: list[LabeledExample] = []
        indices: list[int] = []
        origins: list[bool] = []
        for example, origin in entries:
            position = positions.get(example.id)
            if position is None:
                position = positions[example.id] = len(unique)
                unique.append(example)
            elif unique[position] != example:
                raise ValueError(f"conflicting examples share id '{example.id}'")
            indices.append(position)
            origins.append(Origin(origin) is Origin.SUBGROUP)
        return cls(
            dataset=Dataset(unique),
            indices=np.asarray(indices, dtype=np.intp),
            from_subgroup=np.asarray(origins, dtype=bool),
            subgroup=subgroup,
            seed=seed,
            policy=policy or SamplePolicy(seed=seed),
        )

    def __len__(self) -> int:
        return len(self.indices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PinnedSet):
            return NotImplemented
        return self.entries == other.entries and self.subgroup == other.subgroup and self.seed == other.seed

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def entries(self) -> tuple[PinnedEntry, ...]:
        examples = self.dataset.examples
        return tuple(
            PinnedEntry(examples[i], Origin.SUBGROUP if sub else Origin.BACKGROUND)
            for i, sub in zip(self.indices.tolist(), self.from_subgroup.tolist(), strict=True)
        )

    @property
    def scores(self) -> FloatArray:
        return self.dataset.scores[self.indices]

    @property
    def labels(self) -> npt.NDArray[np.int8]:
        return self.dataset.labels[self.indices]

    def count(self, origin: Origin) -> int:
        subgroup_entries = int(self.from_subgroup.sum())
        return subgroup_entries if origin is Origin.SUBGROUP else len(self) - subgroup_entries

    def cell_counts(self) -> CellCounts:
        """Class counts per origin: background part B and subgroup part G."""
        positive = self.labels == int(Label.POSITIVE)
        sub = self.from_subgroup
        return CellCounts(
            background_negative=int((~sub & ~positive).sum()),
            background_positive=int((~sub & positive).sum()),
            subgroup_negative=int((sub & ~positive).sum()),
            subgroup_positive=int((sub & positive).sum()),
        )
