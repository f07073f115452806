"""Remote scorer schemas."""

from typing import Literal

from pydantic import AnyHttpUrl, BaseModel, ConfigDict, Field


class RemoteScorerConfig(BaseModel):
    """
    Connection settings for a JSON-over-HTTP scoring endpoint.

    The credential is not part of this model; it is read from the
    ``PINNED_AUC_SCORER_API_KEY`` environment variable.
    """

    model_config = ConfigDict(frozen=True)

    endpoint: AnyHttpUrl
    batch_size: int = Field(100, ge=1, description="Texts per request")
    timeout_seconds: float = Field(30.0, gt=0.0)
    max_attempts: int = Field(3, ge=1, description="Attempts per batch, first try included")
    backoff_seconds: float = Field(1.0, ge=0.0, description="Delay before the first retry")
    backoff_multiplier: float = Field(2.0, ge=1.0)
    max_backoff_seconds: float = Field(30.0, ge=0.0)
    max_concurrency: int = Field(4, ge=1, description="Batches in flight at once")


class RemoteModelRef(BaseModel):
    """An experiment model scored by a remote endpoint."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["remote"] = "remote"
    name: str = Field(..., min_length=1)
    scorer: RemoteScorerConfig


class ItemScore(BaseModel):
    """Result for one input text, in input order."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0)
    score: float | None = None
    error: str | None = Field(None, description="Error code when the item could not be scored")
    detail: str | None = None

    @property
    def ok(self) -> bool:
        return self.score is not None
