"""Schemas for simulated scorers."""

from enum import Enum
from typing import Any, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .common import CellCounts
from .metrics import MAX_SEED, PairLabel


class DistributionFamily(str, Enum):
    """Score distribution families."""
    GAUSSIAN = "gaussian-on-latent"
    BETA = "beta"


class ScoreDistribution(BaseModel):
    """
    Score distribution of one (class, membership) cell.

    Gaussian cells live on a latent scale and are squashed into [0, 1] with the logistic
    function when the model clamps; beta cells are already on [0, 1].
    """

    model_config = ConfigDict(frozen=True)

    family: DistributionFamily = DistributionFamily.GAUSSIAN
    mean: float | None = Field(None, description="Latent mean (gaussian)")
    stddev: float | None = Field(None, gt=0.0, description="Latent standard deviation (gaussian)")
    alpha: float | None = Field(None, gt=0.0, description="Shape alpha (beta)")
    beta: float | None = Field(None, gt=0.0, description="Shape beta (beta)")

    @field_validator("family", mode="before")
    @classmethod
    def short_family(cls, v: Any) -> Any:
        return DistributionFamily.GAUSSIAN if v == "gaussian" else v

    @model_validator(mode="after")
    def check_params(self) -> Self:
        if self.family is DistributionFamily.GAUSSIAN:
            if self.mean is None or self.stddev is None:
                raise ValueError("gaussian-on-latent cells need mean and stddev")
        elif self.alpha is None or self.beta is None:
            raise ValueError("beta cells need alpha and beta")
        return self

    @classmethod
    def gaussian(cls, mean: float, stddev: float = 1.0) -> "ScoreDistribution":
        return cls(family=DistributionFamily.GAUSSIAN, mean=mean, stddev=stddev)

    @classmethod
    def beta_dist(cls, alpha: float, beta: float) -> "ScoreDistribution":
        return cls(family=DistributionFamily.BETA, alpha=alpha, beta=beta)


class ScoreModelSpec(BaseModel):
    """A simulated scorer: one distribution per (class, subgroup membership) cell."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["simulated"] = "simulated"
    name: str = Field("simulated", min_length=1, description="Column name in reports")
    subgroup: str = Field(..., min_length=1, description="Tag whose examples use the subgroup cells")
    background_neg: ScoreDistribution
    background_pos: ScoreDistribution
    subgroup_neg: ScoreDistribution
    subgroup_pos: ScoreDistribution
    seed: int = Field(0, ge=0, le=MAX_SEED)
    clamp: bool = Field(True, description="Squash gaussian latents into [0, 1]")

    @model_validator(mode="after")
    def check_clamp(self) -> Self:
        if not self.clamp and any(c.family is DistributionFamily.GAUSSIAN for c in self.cells()):
            raise ValueError("gaussian-on-latent cells require clamp=true to produce scores in [0, 1]")
        return self

    def cells(self) -> tuple[ScoreDistribution, ScoreDistribution, ScoreDistribution, ScoreDistribution]:
        """Cells in (background_neg, background_pos, subgroup_neg, subgroup_pos) order."""
        return (self.background_neg, self.background_pos, self.subgroup_neg, self.subgroup_pos)


class AnalyticTerm(BaseModel):
    """One analytic decomposition term."""

    pair_label: PairLabel
    pair_count: int = Field(..., ge=0)
    weight: float = Field(..., ge=0.0, le=1.0)
    auc: float | None = Field(None, description="Absent when pair_count = 0")


class AnalyticScenario(BaseModel):
    """Analytic pinned AUC for one set of cell counts."""

    name: str
    description: str
    counts: CellCounts
    pinned_auc: float
    terms: list[AnalyticTerm]
    empirical_pinned_auc: float | None = Field(None, description="Pinned AUC of one simulated draw at these counts")
