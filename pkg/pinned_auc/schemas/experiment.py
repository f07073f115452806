"""Experiment configuration and result schemas."""

from pathlib import Path
from typing import Annotated, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .common import Metric
from .datagen import SkewSpec
from .metrics import MAX_SEED, SamplePolicy
from .remote import RemoteModelRef
from .simscore import ScoreModelSpec

ModelRef = Annotated[ScoreModelSpec | RemoteModelRef, Field(discriminator="kind")]


class DatasetSource(BaseModel):
    """Where the experiment dataset comes from."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["generated", "file"] = "generated"
    templates: Path | None = Field(None, description="Template spec file; the shipped corpus when omitted")
    path: Path | None = Field(None, description="Dataset file for kind='file'")
    format: Literal["csv", "jsonl"] | None = Field(None, description="Inferred from the suffix when omitted")

    @model_validator(mode="after")
    def check_path(self) -> Self:
        if self.kind == "file" and self.path is None:
            raise ValueError("a file dataset source needs a path")
        return self


class ComparisonOptions(BaseModel):
    """Row selection and flagging for two-model comparison tables."""

    model_config = ConfigDict(frozen=True)

    min_pinned_delta: float | None = Field(
        None, ge=0.0, description="Keep subgroups whose baseline pinned AUC differs by more than this"
    )
    top_k: int | None = Field(None, ge=1, description="Keep at most this many subgroups")
    improvement_threshold: float = Field(
        0.0, ge=0.0, description="Model B must beat model A by more than this to be flagged improved"
    )


class ExperimentConfig(BaseModel):
    """A repeated skew-and-measure experiment."""

    model_config = ConfigDict(frozen=True)

    dataset: DatasetSource = Field(default_factory=DatasetSource)
    models: list[ModelRef] = Field(..., min_length=1)
    skew: SkewSpec | None = None
    trials: int = Field(100, ge=1)
    subgroups: list[str] = Field(default_factory=list, description="Tags to report; every tag when empty")
    master_seed: int = Field(0, ge=0, le=MAX_SEED)
    policy: SamplePolicy = Field(default_factory=SamplePolicy)
    compare: ComparisonOptions = Field(default_factory=ComparisonOptions)

    @model_validator(mode="after")
    def unique_model_names(self) -> Self:
        names = [m.name for m in self.models]
        if len(set(names)) != len(names):
            raise ValueError("model names must be unique")
        return self

    @property
    def model_names(self) -> list[str]:
        return [m.name for m in self.models]


class MetricSummary(BaseModel):
    """Aggregate of one (subgroup, model, metric) cell over all trials."""

    model_config = ConfigDict(frozen=True)

    subgroup: str
    model: str
    metric: Metric
    mean: float | None = None
    stddev: float | None = Field(None, description="Sample standard deviation (n - 1)")
    stderr: float | None = Field(None, description="stddev / sqrt(count)")
    count: int = Field(0, ge=0, description="Trials with a defined value")
    reason: str | None = Field(None, description="Why the cell is absent in every trial")
    baseline: float | None = Field(
        None,
        description=(
            "Value on the unskewed dataset; for pinned AUC, the mean over the trials' pinning seeds "
            "applied to the unskewed dataset"
        ),
    )
    baseline_stderr: float | None = Field(None, description="Standard error of the pinned AUC baseline")
    baseline_reason: str | None = None

    @property
    def delta(self) -> float | None:
        if self.mean is None or self.baseline is None:
            return None
        return self.mean - self.baseline


class TrialSummary(BaseModel):
    """Per-subgroup metric aggregates over repeated skew trials."""

    model_config = ConfigDict(frozen=True)

    trials: int
    master_seed: int
    skew: SkewSpec | None
    models: list[str]
    subgroups: list[str]
    cells: list[MetricSummary]
    failed_trials: list[int] = Field(default_factory=list)

    def cell(self, subgroup: str, model: str, metric: Metric) -> MetricSummary:
        return next(
            c for c in self.cells if c.subgroup == subgroup and c.model == model and c.metric == metric
        )


class ComparisonRow(BaseModel):
    """One metric for one subgroup, model A beside model B."""

    model_config = ConfigDict(frozen=True)

    subgroup: str
    metric: str = Field(..., description="Metric name; the 'skewed_' prefix marks skewed-set means")
    model_a: float | None
    model_b: float | None
    improved: bool = Field(..., description="Model B is closer to 1 by more than the threshold")
    model_a_reason: str | None = None
    model_b_reason: str | None = None


class ComparisonTable(BaseModel):
    """Side-by-side metrics for two models, one block of rows per subgroup."""

    model_config = ConfigDict(frozen=True)

    model_a: str
    model_b: str
    skewed_term: str | None
    trials: int
    rows: list[ComparisonRow]

    def row(self, subgroup: str, metric: str) -> ComparisonRow:
        return next(r for r in self.rows if r.subgroup == subgroup and r.metric == metric)

    @property
    def subgroups(self) -> list[str]:
        return list(dict.fromkeys(r.subgroup for r in self.rows))
