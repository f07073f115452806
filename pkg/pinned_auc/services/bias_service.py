"""Threshold-agnostic subgroup metrics: Subgroup AUC, BPSN AUC, BNSP AUC."""

from collections.abc import Iterable

import numpy as np
import numpy.typing as npt

from ..core.exceptions import EmptySideError, PinnedAucError, UnknownSubgroupError
from ..core.observability import get_logger
from ..core.seeding import derive_seed
from ..models.dataset import Dataset
from ..schemas.common import CellCounts, Label, Metric, MetricValue
from ..schemas.metrics import BiasMetrics, BiasReport, SamplePolicy
from .pinning_service import build_pinned_set, pinned_auc
from .rank_statistics import auc

logger = get_logger(__name__)

BoolArray = npt.NDArray[np.bool_]


def _partition(dataset: Dataset, subgroup: str) -> tuple[BoolArray, BoolArray]:
    dataset.require_scored()
    in_group = dataset.subgroup_mask(subgroup)
    positive = dataset.labels == int(Label.POSITIVE)
    return in_group, positive


def _masked_auc(dataset: Dataset, negatives: BoolArray, positives: BoolArray) -> MetricValue:
    try:
        return MetricValue.of(auc(dataset.scores[negatives], dataset.scores[positives]))
    except EmptySideError as e:
        return MetricValue.from_error(e)


def subgroup_auc(dataset: Dataset, subgroup: str) -> MetricValue:
    """
    AUC restricted to examples tagged with ``subgroup``.

    Absent when the subgroup lacks one of the classes.

    Raises:
        UnknownSubgroupError: If no example carries the tag
    """
    in_group, positive = _partition(dataset, subgroup)
    return _masked_auc(dataset, in_group & ~positive, in_group & positive)


def bpsn_auc(dataset: Dataset, subgroup: str) -> MetricValue:
    """
    Background Positive, Subgroup Negative AUC.

    Negatives are the subgroup's negatives, positives are positives outside the
    subgroup. Low values mean the subgroup's non-toxic examples score like toxic ones.
    """
    in_group, positive = _partition(dataset, subgroup)
    return _masked_auc(dataset, in_group & ~positive, ~in_group & positive)


def bnsp_auc(dataset: Dataset, subgroup: str) -> MetricValue:
    """
    Background Negative, Subgroup Positive AUC.

    Negatives are negatives outside the subgroup, positives are the subgroup's
    positives. Low values mean the subgroup's toxic examples score like non-toxic ones.
    """
    in_group, positive = _partition(dataset, subgroup)
    return _masked_auc(dataset, ~in_group & ~positive, in_group & positive)


def pinned_auc_for(dataset: Dataset, subgroup: str, policy: SamplePolicy) -> MetricValue:
    """Pinned AUC on a pinned set drawn with ``policy`` as given; absent on degenerate sets."""
    try:
        return MetricValue.of(pinned_auc(build_pinned_set(dataset, subgroup, policy)))
    except UnknownSubgroupError:
        raise
    except PinnedAucError as e:
        return MetricValue.from_error(e)


def bias_metrics(dataset: Dataset, subgroup: str, policy: SamplePolicy) -> BiasMetrics:
    """
    All four metrics for one subgroup, the pinned set drawn with ``policy.seed``.

    Raises:
        UnknownSubgroupError: If no example carries the tag
    """
    counts = dataset.counts_for(subgroup)
    return BiasMetrics(
        subgroup=subgroup,
        subgroup_auc=subgroup_auc(dataset, subgroup),
        bpsn_auc=bpsn_auc(dataset, subgroup),
        bnsp_auc=bnsp_auc(dataset, subgroup),
        pinned_auc=pinned_auc_for(dataset, subgroup, policy),
        counts=counts,
    )


def bias_report(dataset: Dataset, subgroups: Iterable[str], policy: SamplePolicy) -> BiasReport:
    """
    One BiasMetrics row per tag, in the order given.

    Each tag's pinned set uses a seed derived from ``policy.seed`` and the tag. An
    unknown tag yields a row whose metrics are all absent with reason
    ``unknown-subgroup``; the remaining tags are still computed.
    """
    dataset.require_scored()
    rows: list[BiasMetrics] = []
    for tag in subgroups:
        tag_policy = policy.with_seed(derive_seed(policy.seed, "pin", tag))
        try:
            row = bias_metrics(dataset, tag, tag_policy)
        except UnknownSubgroupError as e:
            logger.warning("Unknown subgroup in bias report", subgroup=tag)
            missing = MetricValue.from_error(e)
            row = BiasMetrics(
                subgroup=tag,
                subgroup_auc=missing,
                bpsn_auc=missing,
                bnsp_auc=missing,
                pinned_auc=missing,
                counts=CellCounts(),
            )
        else:
            absent = [metric.value for metric in Metric if not row.metric(metric).present]
            if absent:
                logger.warning("Degenerate metrics", subgroup=tag, absent=absent)
        rows.append(row)

    logger.info("Bias report computed", subgroups=len(rows), examples=len(dataset))
    return BiasReport(policy=policy, rows=rows)
