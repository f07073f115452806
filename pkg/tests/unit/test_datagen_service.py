"""Unit tests for template generation, skewing and dataset stats."""

import numpy as np
import pytest
from pydantic import ValidationError

from pinned_auc.core.exceptions import ConfigError, InvalidTemplateError, UnknownTermError
from pinned_auc.models.dataset import Dataset
from pinned_auc.schemas.common import Label
from pinned_auc.schemas.datagen import SkewSpec, TemplatePattern, TemplateSpec
from pinned_auc.services.datagen_service import (
    dataset_stats,
    default_template_spec,
    generate_synthetic,
    load_template_spec,
    skew_dataset,
    skew_indices,
)

from ..helpers import CONFIGS


def _term_dataset(negatives, positives, term="gay", others=0):
    """``negatives``/``positives`` examples for ``term`` plus ``others`` per label for 'other'."""
    ids, labels, tags = [], [], []
    for tag, n_neg, n_pos in ((term, negatives, positives), ("other", others, others)):
        for label, count in ((0, n_neg), (1, n_pos)):
            for n in range(count):
                ids.append(f"{tag}-{label}-{n}")
                labels.append(label)
                tags.append(frozenset((tag,)))
    return Dataset.from_columns(ids, labels, tags)


def test_two_templates_three_terms():
    """Test one pattern per label and three terms give six balanced examples."""
    spec = TemplateSpec(
        templates=[
            TemplatePattern(pattern="I am {identity}", label="non-toxic"),
            TemplatePattern(pattern="I hate {identity}", label="toxic"),
        ],
        identity_terms=["a", "b", "c"],
    )
    dataset = generate_synthetic(spec)

    assert len(dataset) == 6
    assert dataset.subgroups == ["a", "b", "c"]
    for row in dataset_stats(dataset).rows:
        assert row.negative == row.positive == 1
    assert "I hate b" in dataset.texts
    assert all(len(tags) == 1 for tags in dataset.tags)


def test_all_combinations_balances_to_smaller_label(small_template_spec):
    """Test each label gets as many examples as the label with fewer fillings."""
    dataset = generate_synthetic(small_template_spec)
    stats = dataset_stats(dataset)

    assert len(dataset) == 30
    for row in stats.rows:
        assert row.negative == row.positive == 5
        assert row.positive_share == 0.5


def test_numeric_target_uses_every_filling_before_repeats(small_template_spec):
    """Test a target above the filling count cycles through every filling."""
    spec = small_template_spec.model_copy(update={"per_term_target": 24})
    dataset = generate_synthetic(spec)
    gay_negatives = [
        text for text, tags, label in zip(dataset.texts, dataset.tags, dataset.labels, strict=True)
        if "gay" in tags and label == 0
    ]

    assert len(gay_negatives) == 12
    # 5 non-toxic fillings: two full rounds then two more
    assert len(set(gay_negatives)) == 5
    assert dataset_stats(dataset).row("gay").total == 24


def test_generation_is_deterministic(small_template_spec):
    """Test the same spec gives the same dataset."""
    spec = small_template_spec.model_copy(update={"per_term_target": 8})
    assert generate_synthetic(spec) == generate_synthetic(spec)


def test_every_text_names_its_term(small_template_spec):
    """Test each text contains the term it is tagged with."""
    dataset = generate_synthetic(small_template_spec)
    for text, tags in zip(dataset.texts, dataset.tags, strict=True):
        (term,) = tags
        assert term in text


def test_identity_slot_required():
    """Test a pattern without {identity} is rejected."""
    spec = TemplateSpec(
        templates=[
            TemplatePattern(pattern="hello there", label="negative"),
            TemplatePattern(pattern="I hate {identity}", label="positive"),
        ],
        identity_terms=["a"],
    )
    with pytest.raises(InvalidTemplateError) as exc_info:
        generate_synthetic(spec)
    assert exc_info.value.extensions["pattern"] == "hello there"


def test_missing_fillers_rejected():
    """Test a slot without filler values is rejected."""
    spec = TemplateSpec(
        templates=[
            TemplatePattern(pattern="{name} is {identity}", label="negative"),
            TemplatePattern(pattern="I hate {identity}", label="positive"),
        ],
        identity_terms=["a"],
    )
    with pytest.raises(InvalidTemplateError):
        generate_synthetic(spec)


def test_label_without_pattern_rejected():
    """Test both labels need at least one pattern."""
    spec = TemplateSpec(
        templates=[
            TemplatePattern(pattern="I am {identity}", label="negative"),
            TemplatePattern(pattern="We are {identity}", label="negative"),
        ],
        identity_terms=["a"],
    )
    with pytest.raises(InvalidTemplateError):
        generate_synthetic(spec)


def test_odd_target_rejected(small_template_spec):
    """Test an odd per-term target cannot balance labels."""
    with pytest.raises(ValidationError):
        TemplateSpec.model_validate({**small_template_spec.model_dump(), "per_term_target": 7})


def test_default_corpus_scale():
    """Test the shipped corpus has 50 balanced terms and 77,000 examples."""
    spec = default_template_spec()
    dataset = generate_synthetic(spec)
    stats = dataset_stats(dataset)

    assert len(spec.identity_terms) == 50
    assert 70_000 <= stats.total <= 85_000
    assert stats.total == 77_000
    assert all(row.negative == row.positive for row in stats.rows)
    assert stats.positive_share == 0.5


def test_load_template_spec_paths():
    """Test loading the example spec and the errors for missing files."""
    spec = load_template_spec(CONFIGS / "templates_small.toml")
    assert len(spec.identity_terms) == 20
    assert spec.per_term_target == 200
    assert load_template_spec(None) == default_template_spec()

    with pytest.raises(ConfigError):
        load_template_spec(CONFIGS / "does-not-exist.toml")


def test_small_config_reaches_target():
    """Test the example spec yields 100 examples per label per term."""
    stats = dataset_stats(generate_synthetic(load_template_spec(CONFIGS / "templates_small.toml")))
    assert stats.total == 4000
    assert all(row.negative == row.positive == 100 for row in stats.rows)


def test_skew_arithmetic_757():
    """Test removing half of 757 negatives removes 378 and leaves 1,136."""
    dataset = _term_dataset(757, 757)
    skewed = skew_dataset(dataset, SkewSpec(term="gay", removal_fraction=0.5, seed=1))
    row = dataset_stats(skewed).row("gay")

    assert len(dataset) - len(skewed) == 378
    assert row.total == 1136
    assert row.negative == 379
    assert row.positive == 757
    assert row.positive_share == 757 / 1136
    assert round(row.positive_share, 2) == 0.67


def test_skew_only_touches_target_cell():
    """Test the removed examples are exactly the term's target-label examples."""
    dataset = _term_dataset(40, 40, others=30)
    removed = skew_indices(dataset, SkewSpec(term="gay", target_label="positive", removal_fraction=0.25, seed=3))

    assert len(removed) == 10
    assert len(np.unique(removed)) == 10
    for i in removed:
        assert dataset.tags[i] == frozenset(("gay",))
        assert dataset.labels[i] == int(Label.POSITIVE)

    skewed = dataset.drop(removed)
    assert set(dataset.ids) - set(skewed.ids) == {dataset.ids[i] for i in removed}
    assert dataset_stats(skewed).row("other") == dataset_stats(dataset).row("other")


def test_skew_fraction_bounds():
    """Test fraction 0 removes nothing and fraction 1 removes the whole cell."""
    dataset = _term_dataset(9, 9)
    assert skew_dataset(dataset, SkewSpec(term="gay", removal_fraction=0.0)) == dataset
    emptied = skew_dataset(dataset, SkewSpec(term="gay", removal_fraction=1.0))
    assert dataset_stats(emptied).row("gay").negative == 0


def test_skew_is_deterministic_per_seed():
    """Test the removal set depends only on the seed."""
    dataset = _term_dataset(100, 100)
    spec = SkewSpec(term="gay", removal_fraction=0.5, seed=42)
    assert np.array_equal(skew_indices(dataset, spec), skew_indices(dataset, spec))
    assert not np.array_equal(skew_indices(dataset, spec), skew_indices(dataset, spec.with_seed(43)))


def test_skew_unknown_term():
    """Test skewing a term the dataset lacks."""
    with pytest.raises(UnknownTermError):
        skew_dataset(_term_dataset(3, 3), SkewSpec(term="nope", removal_fraction=0.5))


def test_stats_empty_dataset():
    """Test stats of an empty dataset have no positive share."""
    stats = dataset_stats(Dataset())
    assert stats.total == 0
    assert stats.positive_share is None
    assert stats.rows == []
