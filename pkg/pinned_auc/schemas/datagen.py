"""Schemas for synthetic data generation and class skewing."""

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .common import Label
from .metrics import MAX_SEED

IDENTITY_SLOT = "identity"
ALL_COMBINATIONS = "all combinations"

_LABEL_NAMES = {
    "negative": Label.NEGATIVE,
    "non-toxic": Label.NEGATIVE,
    "positive": Label.POSITIVE,
    "toxic": Label.POSITIVE,
}


def coerce_label(v: Any) -> Any:
    """Accept 'negative'/'positive' (or 'non-toxic'/'toxic') as label names."""
    if isinstance(v, str) and v.strip().lower() in _LABEL_NAMES:
        return _LABEL_NAMES[v.strip().lower()]
    return v


class TemplatePattern(BaseModel):
    """A sentence pattern with one ``{identity}`` slot and optional filler slots."""

    model_config = ConfigDict(frozen=True)

    pattern: str = Field(..., min_length=1)
    label: Label

    @field_validator("label", mode="before")
    @classmethod
    def named_label(cls, v: Any) -> Any:
        return coerce_label(v)


class TemplateSpec(BaseModel):
    """Template corpus for synthetic test-set generation."""

    model_config = ConfigDict(frozen=True)

    templates: list[TemplatePattern] = Field(..., min_length=2)
    identity_terms: list[str] = Field(..., min_length=1)
    fillers: dict[str, list[str]] = Field(
        default_factory=dict,
        description="Values for non-identity slots; a pattern expands over the product of its slots",
    )
    per_term_target: int | Literal["all combinations"] = Field(
        ALL_COMBINATIONS,
        description="Examples per term (split evenly between labels) or every combination",
    )
    seed: int = Field(0, ge=0, le=MAX_SEED, description="Drives subsampling when per_term_target is a number")

    @field_validator("identity_terms")
    @classmethod
    def unique_terms(cls, v: list[str]) -> list[str]:
        if any(not t or "|" in t for t in v):
            raise ValueError("identity terms must be non-empty and must not contain '|'")
        if len(set(v)) != len(v):
            raise ValueError("identity terms must be unique")
        return v

    @field_validator("per_term_target")
    @classmethod
    def even_target(cls, v: int | str) -> int | str:
        if isinstance(v, int) and (v < 2 or v % 2):
            raise ValueError("per_term_target must be a positive even number so labels balance")
        return v


class SkewSpec(BaseModel):
    """Remove a fraction of one class within one term."""

    model_config = ConfigDict(frozen=True)

    term: str = Field(..., min_length=1)
    target_label: Label = Field(Label.NEGATIVE)
    removal_fraction: float = Field(..., ge=0.0, le=1.0)
    seed: int = Field(0, ge=0, le=MAX_SEED)

    @field_validator("target_label", mode="before")
    @classmethod
    def named_label(cls, v: Any) -> Any:
        return coerce_label(v)

    def with_seed(self, seed: int) -> "SkewSpec":
        return self.model_copy(update={"seed": seed})


class TermStats(BaseModel):
    """Class counts for one tag."""

    term: str
    negative: int
    positive: int
    total: int
    positive_share: float | None


class DatasetStats(BaseModel):
    """Per-term class counts plus global totals."""

    rows: list[TermStats] = Field(default_factory=list)
    total_negative: int = 0
    total_positive: int = 0
    total: int = 0
    positive_share: float | None = None

    def row(self, term: str) -> TermStats:
        return next(r for r in self.rows if r.term == term)
