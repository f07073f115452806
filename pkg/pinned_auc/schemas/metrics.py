"""Schemas for pinning, decomposition and bias metrics."""

from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..core.seeding import MAX_SEED
from .common import CellCounts, Metric, MetricValue


class SamplePolicy(BaseModel):
    """How the subgroup and background samples of a pinned set are drawn."""

    model_config = ConfigDict(frozen=True)

    subgroup_sample_size: int | Literal["all"] = Field(
        "all", description="Examples drawn from the subgroup; 'all' takes every one"
    )
    replacement: bool = Field(False, description="Sample with replacement")
    background_excludes_subgroup: bool = Field(
        False, description="Draw the background sample from examples outside the subgroup only"
    )
    seed: int = Field(0, ge=0, le=MAX_SEED, description="Sampling seed")

    @field_validator("subgroup_sample_size")
    @classmethod
    def positive_size(cls, v: int | str) -> int | str:
        if isinstance(v, int) and v < 1:
            raise ValueError("subgroup_sample_size must be positive or 'all'")
        return v

    def with_seed(self, seed: int) -> "SamplePolicy":
        return self.model_copy(update={"seed": seed})


class PairLabel(str, Enum):
    """The four negative/positive pair families of a pinned set."""
    BG_BG = "bg-bg"
    SUB_SUB = "sub-sub"
    BG_NEG_SUB_POS = "bgNeg-subPos"
    SUB_NEG_BG_POS = "subNeg-bgPos"


class DecompositionTerm(BaseModel):
    """One weighted pairwise term of the pinned AUC."""

    model_config = ConfigDict(frozen=True)

    pair_label: PairLabel
    mwu: float = Field(..., ge=0.0, description="Mann-Whitney U over the pair family")
    mwu_half_units: int = Field(..., ge=0, description="2·U, exact")
    pair_count: int = Field(..., ge=0, description="|negatives|·|positives|")
    weight: float = Field(..., ge=0.0, le=1.0, description="pair_count / N")
    auc: float | None = Field(None, ge=0.0, le=1.0, description="Absent when pair_count = 0")


class DecompositionReport(BaseModel):
    """Pinned AUC expressed as a pair-weighted average of four AUCs."""

    model_config = ConfigDict(frozen=True)

    subgroup: str
    terms: list[DecompositionTerm] = Field(..., min_length=4, max_length=4)
    total_pair_count: int = Field(..., ge=0, description="N")
    reconstructed_pinned_auc: float = Field(..., ge=0.0, le=1.0)
    direct_pinned_auc: float = Field(..., ge=0.0, le=1.0, description="AUC over the pinned set, origins ignored")
    counts: CellCounts = Field(..., description="Per-origin class counts of the pinned set")
    seed: int

    def term(self, label: PairLabel) -> DecompositionTerm:
        return next(t for t in self.terms if t.pair_label == label)

    @property
    def identity_gap(self) -> float:
        return abs(self.reconstructed_pinned_auc - self.direct_pinned_auc)


class BiasMetrics(BaseModel):
    """Threshold-agnostic metrics for one subgroup."""

    model_config = ConfigDict(frozen=True)

    subgroup: str
    subgroup_auc: MetricValue
    bpsn_auc: MetricValue
    bnsp_auc: MetricValue
    pinned_auc: MetricValue
    counts: CellCounts = Field(..., description="Subgroup and disjoint-background class counts")

    def metric(self, metric: Metric) -> MetricValue:
        value: MetricValue = getattr(self, metric.value)
        return value


class BiasReport(BaseModel):
    """One BiasMetrics row per requested subgroup."""

    model_config = ConfigDict(frozen=True)

    policy: SamplePolicy
    rows: list[BiasMetrics] = Field(default_factory=list)

    def row(self, subgroup: str) -> BiasMetrics:
        return next(r for r in self.rows if r.subgroup == subgroup)
