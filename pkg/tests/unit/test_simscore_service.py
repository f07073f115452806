"""Unit tests for simulated scorers and analytic oracles."""

import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from pinned_auc.core.exceptions import UnsupportedFamilyError, ZeroPairsError
from pinned_auc.core.seeding import make_rng
from pinned_auc.schemas.common import CellCounts
from pinned_auc.schemas.metrics import PairLabel
from pinned_auc.schemas.simscore import ScoreDistribution, ScoreModelSpec
from pinned_auc.services.bias_service import bnsp_auc, bpsn_auc, subgroup_auc
from pinned_auc.services.pinning_service import decompose, pinned_auc
from pinned_auc.services.rank_statistics import auc, labeled_auc
from pinned_auc.services.simscore_service import (
    analytic_decomposition,
    analytic_pairwise_auc,
    analytic_pinned_auc,
    column_a_model,
    mitigated_model,
    sample_scores,
    score_dataset,
    simulate_pinned_set,
    table1_scenarios,
)

from ..helpers import make_dataset

BALANCED = CellCounts(background_negative=1000, background_positive=1000, subgroup_negative=1000, subgroup_positive=1000)


def _normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def _uniform_model(subgroup="g", seed=0):
    cell = ScoreDistribution.gaussian(0.0, 1.0)
    return ScoreModelSpec(
        subgroup=subgroup, seed=seed, background_neg=cell, background_pos=cell, subgroup_neg=cell, subgroup_pos=cell
    )


def _population(n_per_cell, subgroup="g"):
    rows = []
    for tag, prefix in ((subgroup, "s"), ((), "b")):
        for label in (0, 1):
            rows += [(f"{prefix}{label}-{i}", None, label, tag) for i in range(n_per_cell)]
    return make_dataset(rows, texts=True)


def test_pairwise_identical_gaussians():
    """Test identical distributions give 0.5."""
    assert analytic_pairwise_auc(ScoreDistribution.gaussian(1.0, 2.0), ScoreDistribution.gaussian(1.0, 2.0)) == 0.5


def test_pairwise_closed_form_values():
    """Test N(0,1) vs N(2,1) against an independent normal CDF."""
    neg = ScoreDistribution.gaussian(0.0, 1.0)
    assert analytic_pairwise_auc(neg, ScoreDistribution.gaussian(2.0, 1.0)) == pytest.approx(_normal_cdf(math.sqrt(2)), abs=1e-12)
    assert analytic_pairwise_auc(neg, ScoreDistribution.gaussian(2.0, 1.0)) == pytest.approx(0.9214, abs=1e-4)
    assert analytic_pairwise_auc(neg, ScoreDistribution.gaussian(-2.0, 1.0)) == pytest.approx(0.0786, abs=1e-4)


def test_pairwise_beta_matches_integral():
    """Test the numeric fallback for beta cells against a direct integral."""
    neg = ScoreDistribution.beta_dist(2.0, 5.0)
    pos = ScoreDistribution.beta_dist(5.0, 2.0)
    grid = np.linspace(0.0, 1.0, 200_001)
    # P(pos > neg) = integral of f_neg(x) * (1 - F_pos(x)) dx
    integrand = stats.beta.pdf(grid, 2.0, 5.0) * stats.beta.sf(grid, 5.0, 2.0)
    expected = float(integrate.trapezoid(integrand, grid))

    assert analytic_pairwise_auc(neg, pos) == pytest.approx(expected, abs=1e-5)
    assert analytic_pairwise_auc(neg, neg) == pytest.approx(0.5, abs=1e-6)


def test_pairwise_numeric_can_be_disabled():
    """Test mixed families need the numeric fallback."""
    with pytest.raises(UnsupportedFamilyError):
        analytic_pairwise_auc(ScoreDistribution.beta_dist(2.0, 2.0), ScoreDistribution.gaussian(0.0, 1.0), allow_numeric=False)


def test_pinned_identical_cells_is_half():
    """Test identical cells give 0.5 for any counts."""
    counts = CellCounts(background_negative=3, background_positive=10, subgroup_negative=1, subgroup_positive=0)
    assert analytic_pinned_auc(_uniform_model(), counts) == pytest.approx(0.5, abs=1e-15)


def test_pinned_single_family():
    """Test counts with only background pairs reduce to the background AUC."""
    model = column_a_model("g")
    counts = CellCounts(background_negative=5, background_positive=7)
    assert analytic_pinned_auc(model, counts) == analytic_pairwise_auc(model.background_neg, model.background_pos)


def test_pinned_zero_pairs():
    """Test counts without a negative/positive pair are refused."""
    with pytest.raises(ZeroPairsError):
        analytic_pinned_auc(column_a_model("g"), CellCounts(background_negative=4, subgroup_negative=2))


def test_decomposition_order_and_weights():
    """Test the four terms come in a fixed order with weights summing to 1."""
    terms = analytic_decomposition(column_a_model("g"), BALANCED)
    assert [t.pair_label for t in terms] == list(PairLabel)
    assert [t.weight for t in terms] == [0.25] * 4


def test_balance_shifts_pinned_but_not_components():
    """Test halving subgroup cells moves the pinned AUC while every pairwise AUC stays put."""
    scenarios = table1_scenarios(column_a_model("g"))
    a, b, c = (s.pinned_auc for s in scenarios)

    assert b > a > c
    assert b - a >= 0.01
    assert a - c >= 0.01
    for scenario in scenarios[1:]:
        assert [t.auc for t in scenario.terms] == [t.auc for t in scenarios[0].terms]
    assert [s.name for s in scenarios] == ["A", "B", "C"]
    assert scenarios[1].counts.subgroup_negative == 500


def test_table1_empirical_column():
    """Test the empirical draw sits near the analytic value."""
    scenarios = table1_scenarios(column_a_model("g"), base_count=4000, empirical_seed=1)
    for scenario in scenarios:
        assert scenario.empirical_pinned_auc == pytest.approx(scenario.pinned_auc, abs=0.01)


def test_table1_rejects_tiny_base():
    """Test a base count below 2 cannot be halved."""
    with pytest.raises(ValueError):
        table1_scenarios(column_a_model("g"), base_count=1)


def test_sampling_is_deterministic():
    """Test the same model and seed give identical scores."""
    dataset = _population(50)
    model = column_a_model("g", seed=8)
    assert np.array_equal(sample_scores(dataset, model), sample_scores(dataset, model))
    assert not np.array_equal(sample_scores(dataset, model), sample_scores(dataset, model.model_copy(update={"seed": 9})))


def test_squashing_keeps_every_cell_pair_auc():
    """Test AUCs on the latent draws equal the AUCs on the logistic-squashed scores."""
    dataset = _population(300)
    model = column_a_model("g", seed=13)
    squashed = sample_scores(dataset, model)

    in_group = dataset.subgroup_mask("g")
    positive = dataset.labels == 1
    masks = {
        "background_neg": ~in_group & ~positive,
        "background_pos": ~in_group & positive,
        "subgroup_neg": in_group & ~positive,
        "subgroup_pos": in_group & positive,
    }
    normal = make_rng(model.seed, "gaussian").standard_normal(len(dataset))
    latent = np.empty(len(dataset))
    for cell, mask in masks.items():
        dist = getattr(model, cell)
        latent[mask] = dist.mean + dist.stddev * normal[mask]
    assert np.array_equal(special.expit(latent), squashed)

    families = [
        ("background_neg", "background_pos"),
        ("subgroup_neg", "subgroup_pos"),
        ("background_neg", "subgroup_pos"),
        ("subgroup_neg", "background_pos"),
    ]
    for neg, pos in families:
        expected = auc(latent[masks[neg]], latent[masks[pos]])
        assert auc(squashed[masks[neg]], squashed[masks[pos]]) == pytest.approx(expected, abs=1e-12)


def test_score_dataset_preserves_fields():
    """Test scoring only replaces scores."""
    dataset = _population(20)
    scored = score_dataset(dataset, column_a_model("g", seed=2))

    assert scored.ids == dataset.ids
    assert scored.tags == dataset.tags
    assert scored.texts == dataset.texts
    assert np.array_equal(scored.labels, dataset.labels)
    assert scored.is_scored
    assert ((scored.scores >= 0) & (scored.scores <= 1)).all()


def test_score_dataset_without_subgroup_uses_background():
    """Test a model whose subgroup is absent scores everything from the background cells."""
    dataset = _population(20, subgroup="h")
    model = column_a_model("g", seed=2)
    background_only = model.model_copy(update={"subgroup_neg": model.background_neg, "subgroup_pos": model.background_pos})
    assert np.array_equal(sample_scores(dataset, model), sample_scores(dataset, background_only))


def test_identical_cells_show_no_bias():
    """Test exchangeable cells give robust metrics that agree with each other."""
    scored = score_dataset(_population(3000), _uniform_model(seed=4))
    values = [subgroup_auc(scored, "g").value, bpsn_auc(scored, "g").value, bnsp_auc(scored, "g").value]
    for value in values:
        assert value == pytest.approx(0.5, abs=0.03)


def test_biased_model_pulls_bpsn_below_background():
    """Test the biased model's BPSN AUC is far below the background AUC."""
    dataset = _population(3000)
    scored = score_dataset(dataset, column_a_model("g", seed=6))
    background = np.array(["g" not in tags for tags in scored.tags])
    background_auc = labeled_auc(scored.scores[background], scored.labels[background])

    assert bpsn_auc(scored, "g").value < background_auc - 0.1


def test_mitigated_model_matches_background():
    """Test the mitigated model scores the subgroup like the background."""
    model = mitigated_model("g")
    assert model.subgroup_neg == model.background_neg
    assert model.subgroup_pos == model.background_pos
    assert analytic_pinned_auc(model, BALANCED) == pytest.approx(
        analytic_pairwise_auc(model.background_neg, model.background_pos), abs=1e-15
    )


def test_beta_model_scores_in_unit_interval():
    """Test beta cells produce scores on [0, 1] without squashing."""
    dataset = _population(200)
    model = ScoreModelSpec(
        subgroup="g",
        clamp=False,
        background_neg=ScoreDistribution.beta_dist(2, 5),
        background_pos=ScoreDistribution.beta_dist(5, 2),
        subgroup_neg=ScoreDistribution.beta_dist(3, 3),
        subgroup_pos=ScoreDistribution.beta_dist(6, 1.5),
    )
    scores = sample_scores(dataset, model)
    assert ((scores >= 0) & (scores <= 1)).all()


def test_gaussian_needs_clamp():
    """Test unclamped gaussian cells are refused."""
    cell = ScoreDistribution.gaussian(0.0, 1.0)
    with pytest.raises(ValueError):
        ScoreModelSpec(subgroup="g", clamp=False, background_neg=cell, background_pos=cell, subgroup_neg=cell, subgroup_pos=cell)


def test_simulated_pinned_set_counts():
    """Test a simulated pinned set has exactly the requested cell counts."""
    counts = CellCounts(background_negative=30, background_positive=20, subgroup_negative=10, subgroup_positive=40)
    pinned = simulate_pinned_set(column_a_model("g"), counts, seed=5)

    assert pinned.cell_counts() == counts
    assert decompose(pinned).direct_pinned_auc == pinned_auc(pinned)
