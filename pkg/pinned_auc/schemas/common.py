"""Common schemas shared across modules."""

from enum import Enum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.exceptions import PinnedAucError


class Label(int, Enum):
    """Binary class label (non-toxic / toxic)."""
    NEGATIVE = 0
    POSITIVE = 1


class Origin(str, Enum):
    """Which sample a pinned-set entry was drawn from."""
    SUBGROUP = "subgroup-sample"
    BACKGROUND = "background-sample"


class Metric(str, Enum):
    """Threshold-agnostic metrics reported per subgroup."""
    SUBGROUP_AUC = "subgroup_auc"
    BPSN_AUC = "bpsn_auc"
    BNSP_AUC = "bnsp_auc"
    PINNED_AUC = "pinned_auc"


class MetricValue(BaseModel):
    """A metric that is either present or absent with a machine-readable reason."""

    model_config = ConfigDict(frozen=True)

    value: float | None = Field(None, description="Metric value, null when absent")
    reason: str | None = Field(None, description="Reason code when absent")

    @model_validator(mode="after")
    def check_presence(self) -> Self:
        if (self.value is None) == (self.reason is None):
            raise ValueError("exactly one of value and reason must be set")
        return self

    @classmethod
    def of(cls, value: float) -> "MetricValue":
        return cls(value=value)

    @classmethod
    def absent(cls, reason: str) -> "MetricValue":
        return cls(reason=reason)

    @classmethod
    def from_error(cls, error: PinnedAucError) -> "MetricValue":
        return cls(reason=error.code)

    @property
    def present(self) -> bool:
        return self.value is not None


class CellCounts(BaseModel):
    """Example counts per (membership, class) cell."""

    model_config = ConfigDict(frozen=True)

    background_negative: int = Field(0, ge=0)
    background_positive: int = Field(0, ge=0)
    subgroup_negative: int = Field(0, ge=0)
    subgroup_positive: int = Field(0, ge=0)

    @property
    def total_pairs(self) -> int:
        """N: negative/positive pairs over the union of both parts."""
        return (self.background_negative + self.subgroup_negative) * (
            self.background_positive + self.subgroup_positive
        )
