"""
Mann-Whitney U and ROC-AUC.

U counts positive-over-negative pairs with ties weighted 0.5. It is computed from
joint midranks in O(m log m) and kept in half-units as an exact integer: the midrank
of a tie block spanning 1-based positions a..b is (a + b) / 2, so twice every midrank
is an integer and 2U = 2·R_pos - n_pos·(n_pos + 1).
"""

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ..core.exceptions import EmptySideError
from ..schemas.common import Label

ScoreInput = Sequence[float] | npt.NDArray[np.floating]


def _as_scores(values: ScoreInput, side: str) -> npt.NDArray[np.float64]:
    scores = np.asarray(values, dtype=np.float64).ravel()
    if scores.size == 0:
        raise EmptySideError(side)
    if not np.isfinite(scores).all():
        raise ValueError(f"{side} scores must be finite")
    return scores


def mann_whitney_u_half_units(negatives: ScoreInput, positives: ScoreInput) -> int:
    """
    Exact 2·U for the given negative and positive scores.

    Raises:
        EmptySideError: If either collection is empty
    """
    neg = _as_scores(negatives, "negative")
    pos = _as_scores(positives, "positive")

    pooled = np.concatenate((neg, pos))
    _, inverse, counts = np.unique(pooled, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts, dtype=np.int64)
    twice_midranks = 2 * ends - counts + 1
    twice_rank_sum = int(twice_midranks[inverse.ravel()[neg.size:]].sum(dtype=np.int64))

    n_pos = int(pos.size)
    return twice_rank_sum - n_pos * (n_pos + 1)


def mann_whitney_u(negatives: ScoreInput, positives: ScoreInput) -> float:
    """Mann-Whitney U: pairs where the positive outscores the negative, ties count 0.5."""
    return mann_whitney_u_half_units(negatives, positives) / 2


def auc(negatives: ScoreInput, positives: ScoreInput) -> float:
    """
    ROC-AUC as U / (|negatives|·|positives|).

    Raises:
        EmptySideError: If either side is empty, since the AUC is then undefined
    """
    half_units = mann_whitney_u_half_units(negatives, positives)
    pairs = len(np.ravel(negatives)) * len(np.ravel(positives))
    return half_units / (2 * pairs)


def labeled_auc(scores: ScoreInput, labels: Sequence[int] | npt.NDArray[np.integer]) -> float:
    """AUC over scores split by 0/1 labels."""
    score_array = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(labels) == int(Label.POSITIVE)
    return auc(score_array[~positive], score_array[positive])
