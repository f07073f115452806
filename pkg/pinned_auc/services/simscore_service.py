"""
Simulated scorers and closed-form AUC oracles.

A simulated scorer draws each example's score from the distribution of its
(class, subgroup membership) cell. The oracles give the population values those
draws converge to, so Monte Carlo results can be checked against them.
"""

import math

import numpy as np
from scipy import integrate, special, stats

from ..core.exceptions import UnsupportedFamilyError, ZeroPairsError
from ..core.observability import get_logger
from ..core.seeding import make_rng
from ..models.dataset import Dataset, FloatArray
from ..models.pinned import PinnedSet
from ..schemas.common import CellCounts, Label
from ..schemas.metrics import PairLabel
from ..schemas.simscore import (
    AnalyticScenario,
    AnalyticTerm,
    DistributionFamily,
    ScoreDistribution,
    ScoreModelSpec,
)
from .pinning_service import pinned_auc

logger = get_logger(__name__)

QUAD_EPSABS = 1e-6

# Latent scale of the default biased model; see DESIGN.md for the choice of stddev.
COLUMN_A_STDDEV = 1.5
COLUMN_A_MEANS = {"background_neg": -2.0, "background_pos": 2.0, "subgroup_neg": 0.0, "subgroup_pos": 4.0}


def column_a_model(subgroup: str, seed: int = 0, name: str = "column-a") -> ScoreModelSpec:
    """Biased scorer: the subgroup's scores sit two latent units above the background's."""
    return ScoreModelSpec(
        name=name,
        subgroup=subgroup,
        seed=seed,
        **{cell: ScoreDistribution.gaussian(mean, COLUMN_A_STDDEV) for cell, mean in COLUMN_A_MEANS.items()},
    )


def mitigated_model(subgroup: str, seed: int = 0, name: str = "mitigated") -> ScoreModelSpec:
    """Same background as ``column_a_model`` but the subgroup scored exactly like the background."""
    background_neg = ScoreDistribution.gaussian(COLUMN_A_MEANS["background_neg"], COLUMN_A_STDDEV)
    background_pos = ScoreDistribution.gaussian(COLUMN_A_MEANS["background_pos"], COLUMN_A_STDDEV)
    return ScoreModelSpec(
        name=name,
        subgroup=subgroup,
        seed=seed,
        background_neg=background_neg,
        background_pos=background_pos,
        subgroup_neg=background_neg,
        subgroup_pos=background_pos,
    )


def _cell_codes(dataset: Dataset, subgroup: str) -> np.ndarray:
    """0..3 in ScoreModelSpec.cells() order."""
    in_group = dataset.subgroup_mask(subgroup) if dataset.has_subgroup(subgroup) else np.zeros(len(dataset), bool)
    positive = dataset.labels == int(Label.POSITIVE)
    return 2 * in_group.astype(np.intp) + positive.astype(np.intp)


def sample_scores(dataset: Dataset, model: ScoreModelSpec) -> FloatArray:
    """
    One score per example, in example order.

    A single standard-normal stream and a single uniform stream are drawn for the
    whole dataset from seeds derived from ``model.seed``; example i always consumes
    element i of each, so a score depends only on the seed, the example's position
    and its cell.
    """
    n = len(dataset)
    normal = make_rng(model.seed, "gaussian").standard_normal(n)
    uniform = make_rng(model.seed, "beta").random(n)
    codes = _cell_codes(dataset, model.subgroup)

    scores = np.empty(n, dtype=np.float64)
    for code, dist in enumerate(model.cells()):
        mask = codes == code
        if not mask.any():
            continue
        if dist.family is DistributionFamily.GAUSSIAN:
            latent = dist.mean + dist.stddev * normal[mask]
            scores[mask] = special.expit(latent)
        else:
            scores[mask] = stats.beta.ppf(uniform[mask], dist.alpha, dist.beta)
    return scores


def score_dataset(dataset: Dataset, model: ScoreModelSpec) -> Dataset:
    """Copy of ``dataset`` with every score drawn from ``model``; other fields preserved."""
    scored = dataset.with_scores(sample_scores(dataset, model))
    logger.info("Dataset scored", model=model.name, subgroup=model.subgroup, examples=len(dataset))
    return scored


def _cdf(dist: ScoreDistribution, score: float) -> float:
    if dist.family is DistributionFamily.GAUSSIAN:
        return float(stats.norm.cdf(special.logit(score), loc=dist.mean, scale=dist.stddev))
    return float(stats.beta.cdf(score, dist.alpha, dist.beta))


def _ppf(dist: ScoreDistribution, u: float) -> float:
    if dist.family is DistributionFamily.GAUSSIAN:
        return float(special.expit(stats.norm.ppf(u, loc=dist.mean, scale=dist.stddev)))
    return float(stats.beta.ppf(u, dist.alpha, dist.beta))


def analytic_pairwise_auc(
    neg: ScoreDistribution,
    pos: ScoreDistribution,
    allow_numeric: bool = True,
) -> float:
    """
    P(positive score > negative score) for independent draws.

    Two gaussian-on-latent cells have the closed form
    Phi((mu_pos - mu_neg) / sqrt(sigma_neg^2 + sigma_pos^2)); the logistic squash is
    strictly increasing, so it does not change the probability. Any other pair is
    integrated over the negative cell's quantiles.

    Raises:
        UnsupportedFamilyError: If there is no closed form and ``allow_numeric`` is False
    """
    if neg.family is DistributionFamily.GAUSSIAN and pos.family is DistributionFamily.GAUSSIAN:
        assert neg.mean is not None and neg.stddev is not None
        assert pos.mean is not None and pos.stddev is not None
        z = (pos.mean - neg.mean) / math.hypot(neg.stddev, pos.stddev)
        return float(stats.norm.cdf(z))

    if not allow_numeric:
        raise UnsupportedFamilyError(neg.family.value, pos.family.value)

    value, _ = integrate.quad(lambda u: 1.0 - _cdf(pos, _ppf(neg, u)), 0.0, 1.0, epsabs=QUAD_EPSABS, limit=200)
    return min(1.0, max(0.0, float(value)))


def analytic_decomposition(model: ScoreModelSpec, counts: CellCounts) -> list[AnalyticTerm]:
    """
    The four pair-family terms behind ``analytic_pinned_auc``.

    Raises:
        ZeroPairsError: If the counts form no negative/positive pair
    """
    total_pairs = counts.total_pairs
    if total_pairs == 0:
        raise ZeroPairsError()

    families = [
        (PairLabel.BG_BG, model.background_neg, model.background_pos,
         counts.background_negative * counts.background_positive),
        (PairLabel.SUB_SUB, model.subgroup_neg, model.subgroup_pos,
         counts.subgroup_negative * counts.subgroup_positive),
        (PairLabel.BG_NEG_SUB_POS, model.background_neg, model.subgroup_pos,
         counts.background_negative * counts.subgroup_positive),
        (PairLabel.SUB_NEG_BG_POS, model.subgroup_neg, model.background_pos,
         counts.subgroup_negative * counts.background_positive),
    ]
    return [
        AnalyticTerm(
            pair_label=label,
            pair_count=pair_count,
            weight=pair_count / total_pairs,
            auc=analytic_pairwise_auc(neg, pos) if pair_count else None,
        )
        for label, neg, pos, pair_count in families
    ]


def analytic_pinned_auc(model: ScoreModelSpec, counts: CellCounts) -> float:
    """
    Population pinned AUC: pair-weighted average of the four pairwise AUCs.

    Raises:
        ZeroPairsError: If the counts form no negative/positive pair
    """
    terms = analytic_decomposition(model, counts)
    return math.fsum(t.weight * t.auc for t in terms if t.auc is not None)


def simulate_pinned_set(model: ScoreModelSpec, counts: CellCounts, seed: int = 0) -> PinnedSet:
    """
    A scored pinned set with exactly ``counts`` entries per (origin, class) cell.

    Subgroup-part entries are tagged ``model.subgroup``; scores come from ``model``
    reseeded with ``seed``.
    """
    cells = [
        ("bn", counts.background_negative, Label.NEGATIVE, False),
        ("bp", counts.background_positive, Label.POSITIVE, False),
        ("sn", counts.subgroup_negative, Label.NEGATIVE, True),
        ("sp", counts.subgroup_positive, Label.POSITIVE, True),
    ]
    ids: list[str] = []
    labels: list[int] = []
    tags: list[frozenset[str]] = []
    for prefix, count, label, in_group in cells:
        ids.extend(f"{prefix}-{n}" for n in range(count))
        labels.extend([int(label)] * count)
        tags.extend([frozenset((model.subgroup,)) if in_group else frozenset()] * count)

    dataset = Dataset.from_columns(ids, labels, tags)
    scored = dataset.with_scores(sample_scores(dataset, model.model_copy(update={"seed": seed})))
    from_subgroup = np.array([bool(t) for t in tags], dtype=bool)
    return PinnedSet(
        dataset=scored,
        indices=np.arange(len(scored), dtype=np.intp),
        from_subgroup=from_subgroup,
        subgroup=model.subgroup,
        seed=seed,
    )


def table1_scenarios(
    model: ScoreModelSpec,
    base_count: int = 1000,
    empirical_seed: int | None = None,
) -> list[AnalyticScenario]:
    """
    Three class-balance scenarios under one fixed scorer.

    A has ``base_count`` examples in every cell; B halves the subgroup's negatives
    (a more toxic subgroup), C halves its positives. Only the counts change between
    scenarios, so any movement in pinned AUC comes from the pair weights alone. With
    ``empirical_seed`` each scenario also carries the pinned AUC of one simulated draw.
    """
    if base_count < 2:
        raise ValueError("base_count must be at least 2")
    half = base_count // 2
    balanced = CellCounts(
        background_negative=base_count,
        background_positive=base_count,
        subgroup_negative=base_count,
        subgroup_positive=base_count,
    )
    scenarios = [
        ("A", "balanced subgroup", balanced),
        ("B", "subgroup negatives halved", balanced.model_copy(update={"subgroup_negative": half})),
        ("C", "subgroup positives halved", balanced.model_copy(update={"subgroup_positive": half})),
    ]

    results = []
    for name, description, counts in scenarios:
        terms = analytic_decomposition(model, counts)
        empirical = None
        if empirical_seed is not None:
            empirical = pinned_auc(simulate_pinned_set(model, counts, empirical_seed))
        results.append(
            AnalyticScenario(
                name=name,
                description=description,
                counts=counts,
                pinned_auc=math.fsum(t.weight * t.auc for t in terms if t.auc is not None),
                terms=terms,
                empirical_pinned_auc=empirical,
            )
        )
    return results
