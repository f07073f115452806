"""Immutable, column-backed dataset of labeled examples."""

from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt

from ..core.exceptions import DuplicateIdError, UnknownSubgroupError, UnscoredDatasetError
from ..core.seeding import id_keys
from ..schemas.common import CellCounts, Label
from ..schemas.dataset import LabeledExample

FloatArray = npt.NDArray[np.float64]
IndexArray = npt.NDArray[np.intp]


def _frozen(array: npt.NDArray[Any]) -> npt.NDArray[Any]:
    array.flags.writeable = False
    return array


class Dataset:
    """
    Ordered collection of examples with unique ids.

    Columns are the source of truth: ``scores`` (NaN where unscored), ``labels``
    (0/1), ``tags`` and ``texts``. ``examples`` and ``by_subgroup`` are derived on first
    use and never change afterwards.
    """

    ids: tuple[str, ...]
    scores: FloatArray
    labels: npt.NDArray[np.int8]
    tags: tuple[frozenset[str], ...]
    texts: tuple[str | None, ...]

    def __init__(self, examples: Iterable[LabeledExample] = ()):
        examples = tuple(examples)
        seen: set[str] = set()
        for example in examples:
            if example.id in seen:
                raise DuplicateIdError(example.id)
            seen.add(example.id)

        self.ids = tuple(e.id for e in examples)
        self.scores = _frozen(np.array([np.nan if e.score is None else e.score for e in examples], dtype=np.float64))
        self.labels = _frozen(np.array([int(e.label) for e in examples], dtype=np.int8))
        self.tags = tuple(e.subgroups for e in examples)
        self.texts = tuple(e.text for e in examples)
        self.__dict__["examples"] = examples

    @classmethod
    def from_columns(
        cls,
        ids: Sequence[str],
        labels: Sequence[int] | npt.NDArray[Any],
        tags: Sequence[frozenset[str]],
        texts: Sequence[str | None] | None = None,
        scores: Sequence[float | None] | FloatArray | None = None,
    ) -> "Dataset":
        """Build a dataset from parallel columns, validating ids, labels and scores."""
        n = len(ids)
        if len(labels) != n or len(tags) != n or (texts is not None and len(texts) != n):
            raise ValueError("columns must have equal length")
        if len(set(ids)) != n:
            seen: set[str] = set()
            for example_id in ids:
                if example_id in seen:
                    raise DuplicateIdError(example_id)
                seen.add(example_id)

        label_array = np.asarray(labels, dtype=np.int8)
        if label_array.size and not np.isin(label_array, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")

        if scores is None:
            score_array = np.full(n, np.nan, dtype=np.float64)
        else:
            score_array = np.array([np.nan if s is None else s for s in scores], dtype=np.float64)
        _check_scores(score_array, allow_nan=True)

        return cls._from_parts(
            tuple(ids),
            score_array,
            label_array.copy(),
            tuple(frozenset(t) for t in tags),
            tuple(texts) if texts is not None else (None,) * n,
        )

    @classmethod
    def _from_parts(
        cls,
        ids: tuple[str, ...],
        scores: FloatArray,
        labels: npt.NDArray[np.int8],
        tags: tuple[frozenset[str], ...],
        texts: tuple[str | None, ...],
        keys: npt.NDArray[np.uint64] | None = None,
    ) -> "Dataset":
        dataset = cls.__new__(cls)
        dataset.ids = ids
        dataset.scores = _frozen(scores)
        dataset.labels = _frozen(labels)
        dataset.tags = tags
        dataset.texts = texts
        if keys is not None:
            dataset.__dict__["id_keys"] = keys
        return dataset

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[LabeledExample]:
        return iter(self.examples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.ids == other.ids
            and self.tags == other.tags
            and self.texts == other.texts
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.scores, other.scores, equal_nan=True)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Dataset(examples={len(self)}, subgroups={len(self.by_subgroup)}, scored={self.is_scored})"

    @cached_property
    def examples(self) -> tuple[LabeledExample, ...]:
        return tuple(
            LabeledExample.model_construct(
                id=self.ids[i],
                score=None if np.isnan(self.scores[i]) else float(self.scores[i]),
                label=Label(int(self.labels[i])),
                subgroups=self.tags[i],
                text=self.texts[i],
            )
            for i in range(len(self))
        )

    @cached_property
    def by_subgroup(self) -> dict[str, IndexArray]:
        """Tag -> indices of the examples carrying it, tags in sorted order."""
        index: dict[str, list[int]] = {}
        for i, tags in enumerate(self.tags):
            for tag in tags:
                index.setdefault(tag, []).append(i)
        return {tag: _frozen(np.asarray(index[tag], dtype=np.intp)) for tag in sorted(index)}

    @cached_property
    def id_keys(self) -> npt.NDArray[np.uint64]:
        return _frozen(id_keys(self.ids))

    @property
    def subgroups(self) -> list[str]:
        return list(self.by_subgroup)

    @property
    def is_scored(self) -> bool:
        return not bool(np.isnan(self.scores).any())

    def require_scored(self) -> None:
        unscored = int(np.isnan(self.scores).sum())
        if unscored:
            raise UnscoredDatasetError(unscored)

    def has_subgroup(self, tag: str) -> bool:
        return tag in self.by_subgroup

    def subgroup_indices(self, tag: str) -> IndexArray:
        """
        Indices of the examples tagged with ``tag``.

        Raises:
            UnknownSubgroupError: If no example carries the tag
        """
        try:
            return self.by_subgroup[tag]
        except KeyError:
            raise UnknownSubgroupError(tag) from None

    def subgroup_mask(self, tag: str) -> npt.NDArray[np.bool_]:
        mask = np.zeros(len(self), dtype=bool)
        mask[self.subgroup_indices(tag)] = True
        return mask

    def counts_for(self, tag: str) -> CellCounts:
        """Class counts for the subgroup and for the examples outside it."""
        in_group = self.subgroup_mask(tag)
        positive = self.labels == int(Label.POSITIVE)
        return CellCounts(
            background_negative=int((~in_group & ~positive).sum()),
            background_positive=int((~in_group & positive).sum()),
            subgroup_negative=int((in_group & ~positive).sum()),
            subgroup_positive=int((in_group & positive).sum()),
        )

    def select(self, indices: Sequence[int] | IndexArray) -> "Dataset":
        """New dataset holding the given examples in the given order."""
        idx = np.asarray(indices, dtype=np.intp)
        if len(np.unique(idx)) != len(idx):
            raise ValueError("select() indices must be unique")
        keys = self.__dict__.get("id_keys")
        return self._from_parts(
            tuple(self.ids[i] for i in idx),
            self.scores[idx].copy(),
            self.labels[idx].copy(),
            tuple(self.tags[i] for i in idx),
            tuple(self.texts[i] for i in idx),
            keys[idx].copy() if keys is not None else None,
        )

    def drop(self, indices: Sequence[int] | IndexArray) -> "Dataset":
        """New dataset without the given examples; remaining order is kept."""
        keep = np.ones(len(self), dtype=bool)
        keep[np.asarray(indices, dtype=np.intp)] = False
        return self.select(np.flatnonzero(keep))

    def with_scores(self, scores: Sequence[float] | FloatArray) -> "Dataset":
        """New dataset with every score replaced, other columns shared."""
        score_array = np.array(scores, dtype=np.float64)
        if score_array.shape != (len(self),):
            raise ValueError(f"expected {len(self)} scores, got shape {score_array.shape}")
        _check_scores(score_array, allow_nan=False)
        return self._from_parts(
            self.ids, score_array, self.labels, self.tags, self.texts, self.__dict__.get("id_keys")
        )


def _check_scores(scores: FloatArray, allow_nan: bool) -> None:
    present = scores[~np.isnan(scores)] if allow_nan else scores
    if not allow_nan and np.isnan(scores).any():
        raise ValueError("scores must not be NaN")
    if present.size and (not np.isfinite(present).all() or present.min() < 0.0 or present.max() > 1.0):
        raise ValueError("scores must lie in [0, 1]")
