"""Template-based synthetic test sets and class-balance skewing."""

import itertools
import math
import string
import tomllib
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from ..core.config import load_config_file
from ..core.exceptions import ConfigError, InvalidTemplateError, UnknownTermError
from ..core.observability import get_logger
from ..core.seeding import make_rng
from ..models.dataset import Dataset, IndexArray
from ..schemas.common import Label
from ..schemas.datagen import (
    ALL_COMBINATIONS,
    IDENTITY_SLOT,
    DatasetStats,
    SkewSpec,
    TemplatePattern,
    TemplateSpec,
    TermStats,
)

logger = get_logger(__name__)

DEFAULT_TEMPLATES = "default_templates.toml"

_formatter = string.Formatter()


@dataclass(frozen=True)
class _Filling:
    """One template with every non-identity slot bound."""

    pattern: str
    values: tuple[tuple[str, str], ...]

    def render(self, term: str) -> str:
        return self.pattern.format_map({IDENTITY_SLOT: term, **dict(self.values)})


def _slots(template: TemplatePattern) -> list[str]:
    try:
        fields = [name for _, name, _, _ in _formatter.parse(template.pattern) if name is not None]
    except ValueError as e:
        raise InvalidTemplateError(f"Cannot parse template: {e}", pattern=template.pattern) from e
    if any(not name.isidentifier() for name in fields):
        raise InvalidTemplateError("Template slots must be named, e.g. {identity}", pattern=template.pattern)
    identity_slots = fields.count(IDENTITY_SLOT)
    if identity_slots != 1:
        raise InvalidTemplateError(
            f"Template must contain exactly one {{{IDENTITY_SLOT}}} slot, found {identity_slots}",
            pattern=template.pattern,
        )
    return list(dict.fromkeys(name for name in fields if name != IDENTITY_SLOT))


def _expand(spec: TemplateSpec) -> dict[Label, list[_Filling]]:
    fillings: dict[Label, list[_Filling]] = {Label.NEGATIVE: [], Label.POSITIVE: []}
    for template in spec.templates:
        slots = _slots(template)
        missing = [slot for slot in slots if not spec.fillers.get(slot)]
        if missing:
            raise InvalidTemplateError(f"No filler values for slots {missing}", pattern=template.pattern)
        for combo in itertools.product(*(spec.fillers[slot] for slot in slots)):
            fillings[template.label].append(_Filling(template.pattern, tuple(zip(slots, combo, strict=True))))

    for label, items in fillings.items():
        if not items:
            raise InvalidTemplateError(f"Templates need at least one {label.name.lower()} pattern")
    return fillings


def _pick(count: int, wanted: int, spec: TemplateSpec, term: str, label: Label) -> list[int]:
    """Positions of ``wanted`` fillings out of ``count``; every filling is used before any repeats."""
    rng = make_rng(spec.seed, "fill", term, int(label))
    rounds, remainder = divmod(wanted, count)
    extra = np.sort(rng.choice(count, size=remainder, replace=False)).tolist() if remainder else []
    return list(range(count)) * rounds + extra


def generate_synthetic(spec: TemplateSpec) -> Dataset:
    """
    Instantiate every template with every identity term.

    Each example carries exactly one tag, its term. Per term the two labels are
    balanced: with ``"all combinations"`` both get as many examples as the smaller
    label has fillings; with a numeric target each label gets half of it.

    Raises:
        InvalidTemplateError: On a pattern without exactly one identity slot, a slot
            with no filler values, or a label with no pattern
    """
    fillings = _expand(spec)
    ids: list[str] = []
    labels: list[int] = []
    tags: list[frozenset[str]] = []
    texts: list[str] = []

    for term_index, term in enumerate(spec.identity_terms):
        if spec.per_term_target == ALL_COMBINATIONS:
            per_label = min(len(items) for items in fillings.values())
        else:
            per_label = int(spec.per_term_target) // 2
        for label in (Label.NEGATIVE, Label.POSITIVE):
            items = fillings[label]
            if per_label == len(items):
                chosen = list(range(per_label))
            else:
                chosen = _pick(len(items), per_label, spec, term, label)
            prefix = f"t{term_index:03d}-{'pos' if label is Label.POSITIVE else 'neg'}"
            for n, position in enumerate(chosen):
                ids.append(f"{prefix}-{n:05d}")
                labels.append(int(label))
                tags.append(frozenset((term,)))
                texts.append(items[position].render(term))

    dataset = Dataset.from_columns(ids, labels, tags, texts)
    logger.info(
        "Synthetic dataset generated",
        terms=len(spec.identity_terms),
        templates=len(spec.templates),
        examples=len(dataset),
    )
    return dataset


def default_template_spec() -> TemplateSpec:
    """The shipped template corpus."""
    source = resources.files("pinned_auc.resources").joinpath(DEFAULT_TEMPLATES)
    return TemplateSpec.model_validate(tomllib.loads(source.read_text(encoding="utf-8")))


def load_template_spec(path: Path | None = None) -> TemplateSpec:
    """
    Load a template spec file, or the shipped corpus when ``path`` is None.

    Raises:
        ConfigError: If the file cannot be read or fails validation
    """
    if path is None:
        return default_template_spec()
    if not path.exists():
        raise ConfigError(path=str(path), detail=f"Template spec {path} does not exist")
    return load_config_file(path, TemplateSpec)


def skew_indices(dataset: Dataset, skew: SkewSpec) -> IndexArray:
    """
    Positions removed by ``skew``: floor(fraction * k) of the k examples tagged
    ``skew.term`` with ``skew.target_label``, uniformly without replacement.

    Raises:
        UnknownTermError: If no example carries the term
    """
    if not dataset.has_subgroup(skew.term):
        raise UnknownTermError(skew.term)
    group = dataset.subgroup_indices(skew.term)
    candidates = group[dataset.labels[group] == int(skew.target_label)]
    # Decimal fraction, so 0.5 of 757 is exactly 378.5 before the floor
    removals = math.floor(Fraction(str(skew.removal_fraction)) * len(candidates))
    if removals == 0:
        return np.empty(0, dtype=np.intp)
    rng = np.random.default_rng(skew.seed)
    return np.sort(rng.choice(candidates, size=removals, replace=False)).astype(np.intp)


def skew_dataset(dataset: Dataset, skew: SkewSpec) -> Dataset:
    """
    Remove part of one class within one term; every other example is untouched.

    Raises:
        UnknownTermError: If no example carries the term
    """
    removed = skew_indices(dataset, skew)
    skewed = dataset.drop(removed) if len(removed) else dataset
    logger.debug(
        "Skew applied",
        term=skew.term,
        target_label=skew.target_label.name.lower(),
        removed=len(removed),
        remaining=len(skewed),
    )
    return skewed


def dataset_stats(dataset: Dataset) -> DatasetStats:
    """Per-tag negative and positive counts, tags in sorted order, plus global totals."""
    positive = dataset.labels == int(Label.POSITIVE)
    rows = []
    for tag, indices in dataset.by_subgroup.items():
        pos = int(positive[indices].sum())
        total = len(indices)
        rows.append(TermStats(term=tag, negative=total - pos, positive=pos, total=total, positive_share=pos / total))

    total_positive = int(positive.sum())
    return DatasetStats(
        rows=rows,
        total_negative=len(dataset) - total_positive,
        total_positive=total_positive,
        total=len(dataset),
        positive_share=total_positive / len(dataset) if len(dataset) else None,
    )
