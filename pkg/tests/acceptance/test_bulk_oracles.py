"""Bulk checks of the rank statistics and decomposition against pair enumeration."""

import numpy as np
import pytest

from pinned_auc.models.pinned import PinnedSet
from pinned_auc.services.pinning_service import decompose, pinned_auc
from pinned_auc.services.rank_statistics import mann_whitney_u_half_units

from ..helpers import make_dataset

pytestmark = pytest.mark.slow

DATASETS = 1000


def _pairwise_half_units(negatives, positives):
    """2·U by broadcasting every (negative, positive) pair."""
    diff = positives[None, :] - negatives[:, None]
    return int(2 * np.count_nonzero(diff > 0) + np.count_nonzero(diff == 0))


def _random_scores(rng, size):
    # A grid of 50 levels forces plenty of ties
    return rng.integers(0, 51, size=size) / 50


def test_u_matches_enumeration_on_random_datasets():
    """Test 1,000 datasets of 2 to 500 examples with heavy ties."""
    rng = np.random.default_rng(20240)
    for _ in range(DATASETS):
        total = int(rng.integers(2, 501))
        n_neg = int(rng.integers(1, total))
        negatives = _random_scores(rng, n_neg)
        positives = _random_scores(rng, total - n_neg)
        assert mann_whitney_u_half_units(negatives, positives) == _pairwise_half_units(negatives, positives)


def test_decomposition_identity_on_random_pinned_sets():
    """Test the four terms add up exactly on 1,000 random pinned sets."""
    rng = np.random.default_rng(7)
    checked = 0
    while checked < DATASETS:
        size = int(rng.integers(2, 201))
        labels = rng.integers(0, 2, size=size)
        if labels.min() == labels.max():
            continue
        scores = _random_scores(rng, size)
        from_subgroup = rng.random(size) < 0.5
        dataset = make_dataset([(f"e{i}", float(s), int(label), ()) for i, (s, label) in enumerate(zip(scores, labels, strict=True))])
        pinned = PinnedSet(
            dataset=dataset,
            indices=np.arange(size, dtype=np.intp),
            from_subgroup=from_subgroup,
            subgroup="g",
            seed=0,
        )
        report = decompose(pinned)

        union = _pairwise_half_units(scores[labels == 0], scores[labels == 1])
        assert sum(t.mwu_half_units for t in report.terms) == union
        assert abs(report.reconstructed_pinned_auc - report.direct_pinned_auc) <= 1e-12
        assert report.direct_pinned_auc == pinned_auc(pinned)
        assert report.counts.subgroup_negative == int(np.count_nonzero(from_subgroup & (labels == 0)))
        checked += 1
