"""Example and record schemas."""

import math
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .common import Label

TAG_SEPARATOR = "|"


class LabeledExample(BaseModel):
    """One scored (or not yet scored) item."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., min_length=1, description="Opaque identifier, unique within a dataset")
    score: float | None = Field(None, ge=0.0, le=1.0, description="Model output; null until scored")
    label: Label = Field(..., description="Negative (non-toxic) or positive (toxic)")
    subgroups: frozenset[str] = Field(default_factory=frozenset, description="Identity-term tags")
    text: str | None = Field(None, description="Optional text")

    @field_validator("score")
    @classmethod
    def finite_score(cls, v: float | None) -> float | None:
        if v is not None and not math.isfinite(v):
            raise ValueError("score must be finite")
        return v

    @field_validator("subgroups")
    @classmethod
    def non_empty_tags(cls, v: frozenset[str]) -> frozenset[str]:
        if any(not tag for tag in v):
            raise ValueError("subgroup tags must be non-empty strings")
        if any(TAG_SEPARATOR in tag for tag in v):
            raise ValueError(f"subgroup tags must not contain '{TAG_SEPARATOR}'")
        return v


class ScoredRecordRow(BaseModel):
    """
    One row of a dataset file (csv or jsonl).

    ``subgroups`` is a pipe-separated tag list in csv; jsonl accepts either that string
    or a list of tags.
    """

    id: str = Field(..., min_length=1)
    score: float | None = Field(None, ge=0.0, le=1.0)
    label: int = Field(..., ge=0, le=1)
    subgroups: list[str] = Field(default_factory=list)
    text: str | None = None

    @field_validator("score", mode="before")
    @classmethod
    def blank_score(cls, v: Any) -> Any:
        if isinstance(v, str) and not v.strip():
            return None
        return v

    @field_validator("score")
    @classmethod
    def finite_score(cls, v: float | None) -> float | None:
        if v is not None and not math.isfinite(v):
            raise ValueError("score must be finite")
        return v

    @field_validator("label", mode="before")
    @classmethod
    def strict_label(cls, v: Any) -> Any:
        if isinstance(v, str):
            v = v.strip()
            if v not in ("0", "1"):
                raise ValueError("label must be 0 or 1")
            return int(v)
        if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()):
            raise ValueError("label must be 0 or 1")
        return v

    @field_validator("subgroups", mode="before")
    @classmethod
    def split_tags(cls, v: Any) -> Any:
        if v is None:
            return []
        if isinstance(v, str):
            return v.split(TAG_SEPARATOR) if v else []
        return v

    @field_validator("subgroups")
    @classmethod
    def valid_tags(cls, v: list[str]) -> list[str]:
        for tag in v:
            if not tag:
                raise ValueError("subgroup tags must be non-empty")
            if TAG_SEPARATOR in tag:
                raise ValueError(f"subgroup tags must not contain '{TAG_SEPARATOR}'")
        return v

    @field_validator("text", mode="before")
    @classmethod
    def blank_text(cls, v: Any) -> Any:
        if v == "":
            return None
        return v

    @classmethod
    def from_example(cls, example: LabeledExample) -> "ScoredRecordRow":
        return cls(
            id=example.id,
            score=example.score,
            label=int(example.label),
            subgroups=sorted(example.subgroups),
            text=example.text,
        )
