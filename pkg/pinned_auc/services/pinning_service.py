"""Pinned-set construction, Pinned AUC and its four-term decomposition."""

import math

import numpy as np
import numpy.typing as npt

from ..core.exceptions import EmptySideError, UnsatisfiablePolicyError, UnscoredDatasetError
from ..core.observability import get_logger
from ..core.seeding import derive_seed, make_rng, priorities
from ..models.dataset import Dataset, IndexArray
from ..models.pinned import PinnedSet
from ..schemas.common import Label
from ..schemas.metrics import DecompositionReport, DecompositionTerm, PairLabel, SamplePolicy
from .rank_statistics import auc, mann_whitney_u_half_units

logger = get_logger(__name__)

BoolArray = npt.NDArray[np.bool_]


def _sample(
    dataset: Dataset,
    pool: IndexArray,
    size: int,
    policy: SamplePolicy,
    stream: str,
) -> IndexArray:
    if policy.replacement:
        if size and not len(pool):
            raise UnsatisfiablePolicyError(stream, size, 0)
        rng = make_rng(policy.seed, stream)
        return pool[rng.integers(0, len(pool), size=size)]

    if size > len(pool):
        raise UnsatisfiablePolicyError(stream, size, len(pool))
    # Bottom-k over per-example priorities: uniform without replacement, and stable
    # when examples outside the sample are removed from the pool.
    prio = priorities(dataset.id_keys[pool], derive_seed(policy.seed, stream))
    chosen = pool[np.argsort(prio, kind="stable")[:size]]
    return np.sort(chosen)


def build_pinned_set(dataset: Dataset, subgroup: str, policy: SamplePolicy) -> PinnedSet:
    """
    Merge a subgroup sample with an equally sized background sample.

    The subgroup sample is every subgroup example (``"all"``) or ``subgroup_sample_size``
    of them; the background sample has the same size and is drawn from the whole
    dataset, or from examples outside the subgroup when ``background_excludes_subgroup`` is set.

    Raises:
        UnknownSubgroupError: If no example carries ``subgroup``
        UnsatisfiablePolicyError: If a sample is larger than its pool without replacement
    """
    group = dataset.subgroup_indices(subgroup)

    if policy.background_excludes_subgroup:
        pool = np.flatnonzero(~dataset.subgroup_mask(subgroup))
    else:
        pool = np.arange(len(dataset), dtype=np.intp)

    if policy.subgroup_sample_size == "all":
        subgroup_sample = group
    else:
        subgroup_sample = _sample(dataset, group, policy.subgroup_sample_size, policy, "subgroup")
    size = len(subgroup_sample)
    background_sample = _sample(dataset, pool, size, policy, "background")

    pinned = PinnedSet(
        dataset=dataset,
        indices=np.concatenate((subgroup_sample, background_sample)).astype(np.intp),
        from_subgroup=np.concatenate((np.ones(size, dtype=bool), np.zeros(size, dtype=bool))),
        subgroup=subgroup,
        seed=policy.seed,
        policy=policy,
    )
    logger.debug("Pinned set built", subgroup=subgroup, per_origin=size, seed=policy.seed)
    return pinned


def _checked_scores(pinned: PinnedSet) -> npt.NDArray[np.float64]:
    scores = pinned.scores
    unscored = int(np.isnan(scores).sum())
    if unscored:
        raise UnscoredDatasetError(unscored)
    return scores


def pinned_auc(pinned: PinnedSet) -> float:
    """
    AUC over every pinned-set entry; origins are ignored.

    Raises:
        EmptySideError: If the pinned set lacks negatives or positives
    """
    scores = _checked_scores(pinned)
    positive = pinned.labels == int(Label.POSITIVE)
    context = f"pinned set for '{pinned.subgroup}'"
    if positive.all():
        raise EmptySideError("negative", context)
    if not positive.any():
        raise EmptySideError("positive", context)
    return auc(scores[~positive], scores[positive])


def _pair_families(sub: BoolArray, pos: BoolArray) -> list[tuple[PairLabel, BoolArray, BoolArray]]:
    bg = ~sub
    neg = ~pos
    return [
        (PairLabel.BG_BG, bg & neg, bg & pos),
        (PairLabel.SUB_SUB, sub & neg, sub & pos),
        (PairLabel.BG_NEG_SUB_POS, bg & neg, sub & pos),
        (PairLabel.SUB_NEG_BG_POS, sub & neg, bg & pos),
    ]


def decompose(pinned: PinnedSet) -> DecompositionReport:
    """
    Split the pinned AUC into four pair-weighted AUCs by entry origin.

    With B the background part and G the subgroup part, the terms are (B-, B+),
    (G-, G+), (B-, G+) and (G-, B+). Their U statistics add up exactly to U over the
    whole set, so the pair-weighted average of the term AUCs is the pinned AUC.

    Raises:
        EmptySideError: If the pinned set lacks negatives or positives
    """
    scores = _checked_scores(pinned)
    positive = pinned.labels == int(Label.POSITIVE)
    n_neg = int((~positive).sum())
    n_pos = int(positive.sum())
    context = f"pinned set for '{pinned.subgroup}'"
    if n_neg == 0:
        raise EmptySideError("negative", context)
    if n_pos == 0:
        raise EmptySideError("positive", context)

    total_pairs = n_neg * n_pos
    total_half_units = mann_whitney_u_half_units(scores[~positive], scores[positive])

    terms: list[DecompositionTerm] = []
    for label, neg_mask, pos_mask in _pair_families(pinned.from_subgroup, positive):
        pair_count = int(neg_mask.sum()) * int(pos_mask.sum())
        if pair_count == 0:
            terms.append(DecompositionTerm(pair_label=label, mwu=0.0, mwu_half_units=0, pair_count=0, weight=0.0))
            continue
        half_units = mann_whitney_u_half_units(scores[neg_mask], scores[pos_mask])
        terms.append(
            DecompositionTerm(
                pair_label=label,
                mwu=half_units / 2,
                mwu_half_units=half_units,
                pair_count=pair_count,
                weight=pair_count / total_pairs,
                auc=half_units / (2 * pair_count),
            )
        )

    if sum(t.mwu_half_units for t in terms) != total_half_units:
        raise ArithmeticError("decomposition terms do not add up to the pinned-set U statistic")

    reconstructed = math.fsum(t.weight * t.auc for t in terms if t.auc is not None)
    report = DecompositionReport(
        subgroup=pinned.subgroup,
        terms=terms,
        total_pair_count=total_pairs,
        reconstructed_pinned_auc=min(1.0, max(0.0, reconstructed)),
        direct_pinned_auc=total_half_units / (2 * total_pairs),
        counts=pinned.cell_counts(),
        seed=pinned.seed,
    )
    logger.debug(
        "Pinned AUC decomposed",
        subgroup=pinned.subgroup,
        pairs=total_pairs,
        pinned_auc=report.direct_pinned_auc,
    )
    return report
