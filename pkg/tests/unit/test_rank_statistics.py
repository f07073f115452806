"""Unit tests for the Mann-Whitney U and AUC primitives."""

import numpy as np
import pytest

from pinned_auc.core.exceptions import EmptySideError
from pinned_auc.services.rank_statistics import auc, labeled_auc, mann_whitney_u, mann_whitney_u_half_units


def test_single_dominating_pair():
    """Test a positive above the only negative counts one full pair."""
    assert mann_whitney_u([0.1], [0.9]) == 1.0


def test_exact_tie_counts_half():
    """Test an exact tie counts half a pair."""
    assert mann_whitney_u([0.5], [0.5]) == 0.5
    assert mann_whitney_u_half_units([0.5], [0.5]) == 1


def test_two_by_two_case():
    """Test the hand-counted 2x2 case."""
    assert mann_whitney_u([0.2, 0.4], [0.3, 0.6]) == 3.0
    assert auc([0.2, 0.4], [0.3, 0.6]) == 0.75


def test_all_scores_identical():
    """Test identical scores give an AUC of exactly 0.5 whatever the split."""
    assert auc([0.3] * 5, [0.3] * 2) == 0.5
    assert auc([0.7], [0.7] * 9) == 0.5


def test_perfect_separation_and_inversion():
    """Test fully separated classes give 1 and fully inverted ones give 0."""
    assert auc([0.1, 0.2, 0.3], [0.4, 0.5]) == 1.0
    assert auc([0.4, 0.5], [0.1, 0.2, 0.3]) == 0.0


def test_ties_across_classes_and_within_blocks():
    """Test tie blocks spanning both classes."""
    # pairs: (0.2,0.2)=.5 (0.2,0.5)=1 (0.2,0.5)=1 (0.5,0.2)=0 (0.5,0.5)=.5 (0.5,0.5)=.5
    assert mann_whitney_u_half_units([0.2, 0.5], [0.2, 0.5, 0.5]) == 7


def test_empty_side_raises():
    """Test an empty side is reported with its side name."""
    with pytest.raises(EmptySideError) as exc_info:
        auc([], [0.4])
    assert exc_info.value.code == "empty-negative-side"

    with pytest.raises(EmptySideError) as exc_info:
        mann_whitney_u([0.4], np.array([]))
    assert exc_info.value.code == "empty-positive-side"


def test_non_finite_scores_rejected():
    """Test NaN scores are refused rather than ranked."""
    with pytest.raises(ValueError):
        auc([float("nan")], [0.4])


def test_labeled_auc_splits_by_label():
    """Test labeled_auc matches auc over the label split."""
    scores = [0.2, 0.3, 0.4, 0.6]
    labels = [0, 1, 0, 1]
    assert labeled_auc(scores, labels) == auc([0.2, 0.4], [0.3, 0.6])


def test_large_input_matches_pair_count():
    """Test the rank formula on a few thousand tied scores."""
    rng = np.random.default_rng(1)
    neg = rng.integers(0, 20, size=3000) / 20
    pos = rng.integers(5, 25, size=2000) / 25
    expected = int(2 * (pos[None, :] > neg[:, None]).sum() + (pos[None, :] == neg[:, None]).sum())
    assert mann_whitney_u_half_units(neg, pos) == expected
