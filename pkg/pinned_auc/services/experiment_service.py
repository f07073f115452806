"""
Repeated skew-and-measure trials and two-model comparison tables.

Seeds: trial ``i`` removes examples with ``derive_seed(master, "skew", i)`` and pins
subgroup ``g`` with ``derive_seed(master, "pin", i, g)``. Every model and the unskewed
baseline reuse the same removal set and pinning seeds within a trial, so differences
between them are paired rather than independent draws.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import httpx
import numpy as np

from ..core.exceptions import UnknownSubgroupError, UnknownTermError, UsageError
from ..core.observability import get_logger
from ..core.seeding import derive_seed
from ..models.dataset import Dataset
from ..schemas.common import Metric, MetricValue
from ..schemas.experiment import (
    ComparisonRow,
    ComparisonTable,
    DatasetSource,
    ExperimentConfig,
    MetricSummary,
    ModelRef,
    TrialSummary,
)
from ..schemas.simscore import ScoreModelSpec
from ..workers.trial_pool import TrialPool
from .bias_service import bnsp_auc, bpsn_auc, pinned_auc_for, subgroup_auc
from .datagen_service import generate_synthetic, load_template_spec, skew_indices
from .io_service import load_dataset
from .remote_scorer import score_dataset_remote
from .simscore_service import score_dataset

logger = get_logger(__name__)

ROBUST_METRICS = (Metric.SUBGROUP_AUC, Metric.BPSN_AUC, Metric.BNSP_AUC)
SKEWED_PREFIX = "skewed_"

_ROBUST = {
    Metric.SUBGROUP_AUC: subgroup_auc,
    Metric.BPSN_AUC: bpsn_auc,
    Metric.BNSP_AUC: bnsp_auc,
}

CellKey = tuple[str, str, Metric]


@dataclass
class _TrialResult:
    """Per-trial values keyed by (subgroup, model, metric)."""

    skewed: dict[CellKey, MetricValue] = field(default_factory=dict)
    baseline_pinned: dict[tuple[str, str], MetricValue] = field(default_factory=dict)


def load_experiment_dataset(source: DatasetSource) -> Dataset:
    """The generated template set, or a dataset file."""
    if source.kind == "file":
        assert source.path is not None
        return load_dataset(source.path, source.format)
    return generate_synthetic(load_template_spec(source.templates))


def score_with(
    dataset: Dataset,
    model: ModelRef,
    api_key: str | None = None,
    transport: httpx.AsyncBaseTransport | None = None,
) -> Dataset:
    """Score ``dataset`` with a simulated or remote model."""
    if isinstance(model, ScoreModelSpec):
        return score_dataset(dataset, model)
    return score_dataset_remote(dataset, model.scorer, api_key, transport)


def _robust(dataset: Dataset, subgroup: str, metric: Metric) -> MetricValue:
    try:
        return _ROBUST[metric](dataset, subgroup)
    except UnknownSubgroupError as e:
        return MetricValue.from_error(e)


def _pinned(dataset: Dataset, subgroup: str, config: ExperimentConfig, seed: int) -> MetricValue:
    try:
        return pinned_auc_for(dataset, subgroup, config.policy.with_seed(seed))
    except UnknownSubgroupError as e:
        return MetricValue.from_error(e)


def _summarize(values: Sequence[MetricValue]) -> tuple[float | None, float | None, float | None, int, str | None]:
    present = [v.value for v in values if v.value is not None]
    if not present:
        reasons = [v.reason for v in values if v.reason is not None]
        return None, None, None, 0, reasons[0] if reasons else None
    # fsum is exactly rounded, so the mean does not depend on summation order
    mean = min(1.0, max(0.0, math.fsum(present) / len(present)))
    if len(present) < 2:
        return mean, None, None, len(present), None
    stddev = float(np.std(np.asarray(present), ddof=1))
    return mean, stddev, stddev / math.sqrt(len(present)), len(present), None


def run_skew_experiment(
    config: ExperimentConfig,
    dataset: Dataset | None = None,
    max_workers: int = 1,
    api_key: str | None = None,
    transport: httpx.AsyncBaseTransport | None = None,
) -> TrialSummary:
    """
    Run ``config.trials`` skew-and-measure trials and aggregate them per cell.

    Each model scores the full dataset once; a trial then removes the skew's examples
    from every scored copy and measures all four metrics for every subgroup. Subgroup,
    BPSN and BNSP baselines come from the unskewed data once. The pinned AUC baseline
    is the mean over the trials' pinning seeds applied to the unskewed data, so it
    carries the same sampling noise as the skewed means.

    Degenerate or unknown subgroups become absent cells with a reason; they never stop
    the remaining trials.

    Raises:
        UnknownTermError: If the skew term does not occur in the dataset
    """
    dataset = dataset if dataset is not None else load_experiment_dataset(config.dataset)
    subgroups = list(config.subgroups) or dataset.subgroups
    skew = config.skew
    if skew is not None and not dataset.has_subgroup(skew.term):
        raise UnknownTermError(skew.term)

    for tag in subgroups:
        if not dataset.has_subgroup(tag):
            logger.warning("Subgroup not in dataset", subgroup=tag)
    scored = {model.name: score_with(dataset, model, api_key, transport) for model in config.models}

    baseline_robust = {
        (tag, name, metric): _robust(data, tag, metric)
        for name, data in scored.items()
        for tag in subgroups
        for metric in ROBUST_METRICS
    }

    def trial(index: int) -> _TrialResult:
        removed = np.empty(0, dtype=np.intp)
        if skew is not None:
            removed = skew_indices(dataset, skew.with_seed(derive_seed(config.master_seed, "skew", index)))
        result = _TrialResult()
        for name, data in scored.items():
            skewed = data.drop(removed) if len(removed) else data
            for tag in subgroups:
                seed = derive_seed(config.master_seed, "pin", index, tag)
                for metric in ROBUST_METRICS:
                    result.skewed[(tag, name, metric)] = _robust(skewed, tag, metric)
                result.skewed[(tag, name, Metric.PINNED_AUC)] = _pinned(skewed, tag, config, seed)
                result.baseline_pinned[(tag, name)] = _pinned(data, tag, config, seed)
        logger.debug("Trial finished", trial=index, removed=len(removed))
        return result

    outcome = TrialPool(name="skew-trials", max_workers=max_workers).run(trial, range(config.trials))
    ordered = [result for _, result in outcome.ordered()]

    cells: list[MetricSummary] = []
    for tag in subgroups:
        for name in config.model_names:
            for metric in Metric:
                mean, stddev, stderr, count, reason = _summarize([r.skewed[(tag, name, metric)] for r in ordered])
                if metric is Metric.PINNED_AUC:
                    base, _, base_stderr, _, base_reason = _summarize([r.baseline_pinned[(tag, name)] for r in ordered])
                else:
                    value = baseline_robust[(tag, name, metric)]
                    base, base_stderr, base_reason = value.value, None, value.reason
                cells.append(
                    MetricSummary(
                        subgroup=tag,
                        model=name,
                        metric=metric,
                        mean=mean,
                        stddev=stddev,
                        stderr=stderr,
                        count=count,
                        reason=reason,
                        baseline=base,
                        baseline_stderr=base_stderr,
                        baseline_reason=base_reason,
                    )
                )

    summary = TrialSummary(
        trials=config.trials,
        master_seed=config.master_seed,
        skew=skew,
        models=config.model_names,
        subgroups=subgroups,
        cells=cells,
        failed_trials=sorted(outcome.failures),
    )
    logger.info(
        "Skew experiment finished",
        trials=config.trials,
        failed=len(outcome.failures),
        models=len(config.models),
        subgroups=len(subgroups),
        skew_term=skew.term if skew else None,
    )
    return summary


def _improved(a: float | None, b: float | None, threshold: float) -> bool:
    if a is None or b is None:
        return False
    return abs(1.0 - b) < abs(1.0 - a) - threshold


def _select_subgroups(summary: TrialSummary, config: ExperimentConfig) -> list[str]:
    options = config.compare
    if options.min_pinned_delta is None and options.top_k is None:
        return list(summary.subgroups)

    model_a, model_b = summary.models
    deltas: list[tuple[float, str]] = []
    for tag in summary.subgroups:
        a = summary.cell(tag, model_a, Metric.PINNED_AUC).baseline
        b = summary.cell(tag, model_b, Metric.PINNED_AUC).baseline
        if a is None or b is None:
            continue
        delta = abs(a - b)
        if options.min_pinned_delta is None or delta > options.min_pinned_delta:
            deltas.append((delta, tag))
    deltas.sort(key=lambda item: (-item[0], item[1]))
    if options.top_k is not None:
        deltas = deltas[: options.top_k]
    return [tag for _, tag in deltas]


def comparison_table(summary: TrialSummary, config: ExperimentConfig) -> ComparisonTable:
    """
    Lay out a two-model summary side by side, one block of rows per subgroup.

    Rows named after a metric hold unskewed baselines; with a skew, ``skewed_<metric>``
    rows hold the trial means. ``improved`` marks rows where model B is closer to 1
    than model A by more than ``config.compare.improvement_threshold``.
    """
    if len(summary.models) != 2:
        raise UsageError(f"Comparison needs exactly two models, got {len(summary.models)}")
    model_a, model_b = summary.models
    threshold = config.compare.improvement_threshold

    rows: list[ComparisonRow] = []
    for tag in _select_subgroups(summary, config):
        for metric in Metric:
            a = summary.cell(tag, model_a, metric)
            b = summary.cell(tag, model_b, metric)
            rows.append(
                ComparisonRow(
                    subgroup=tag,
                    metric=metric.value,
                    model_a=a.baseline,
                    model_b=b.baseline,
                    improved=_improved(a.baseline, b.baseline, threshold),
                    model_a_reason=a.baseline_reason,
                    model_b_reason=b.baseline_reason,
                )
            )
        if summary.skew is None:
            continue
        for metric in Metric:
            a = summary.cell(tag, model_a, metric)
            b = summary.cell(tag, model_b, metric)
            rows.append(
                ComparisonRow(
                    subgroup=tag,
                    metric=SKEWED_PREFIX + metric.value,
                    model_a=a.mean,
                    model_b=b.mean,
                    improved=_improved(a.mean, b.mean, threshold),
                    model_a_reason=a.reason,
                    model_b_reason=b.reason,
                )
            )

    return ComparisonTable(
        model_a=model_a,
        model_b=model_b,
        skewed_term=summary.skew.term if summary.skew else None,
        trials=summary.trials,
        rows=rows,
    )


def compare_models(
    config: ExperimentConfig,
    dataset: Dataset | None = None,
    max_workers: int = 1,
    api_key: str | None = None,
    transport: httpx.AsyncBaseTransport | None = None,
) -> ComparisonTable:
    """
    Run the experiment for exactly two models and tabulate them side by side.

    Raises:
        UsageError: If the config does not name exactly two models
    """
    if len(config.models) != 2:
        raise UsageError(f"Comparison needs exactly two models, got {len(config.models)}")
    summary = run_skew_experiment(config, dataset, max_workers, api_key, transport)
    table = comparison_table(summary, config)
    logger.info(
        "Comparison table built",
        model_a=table.model_a,
        model_b=table.model_b,
        subgroups=len(table.subgroups),
        improved=sum(1 for r in table.rows if r.improved),
    )
    return table
