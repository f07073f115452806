"""
Client for a JSON-over-HTTP scoring endpoint.

Wire contract (see docs/remote-scorer.md): ``POST <endpoint>`` with body
``{"texts": [...]}`` and ``Authorization: Bearer <key>``; the answer is
``{"scores": [...]}`` with one score in [0, 1] per text, in request order.
"""

import asyncio
import math
from collections.abc import Awaitable, Callable, Sequence
from typing import Any

import httpx

from ..core.config import get_settings
from ..core.exceptions import (
    MalformedResponseError,
    PinnedAucError,
    RateLimitError,
    RemoteAuthError,
    RemoteScorerError,
)
from ..core.observability import get_logger
from ..models.dataset import Dataset
from ..schemas.remote import ItemScore, RemoteScorerConfig

logger = get_logger(__name__)

Sleep = Callable[[float], Awaitable[None]]


class _RetryableBatchError(RemoteScorerError):
    """A batch attempt failed in a way that may succeed on retry."""

    def __init__(self, code: str, detail: str, retry_after: float | None = None):
        super().__init__(title="Batch Failed", code=code, detail=detail, retryable=True)
        self.retry_after = retry_after


def _retry_after(response: httpx.Response) -> float | None:
    value = response.headers.get("Retry-After")
    if value is None:
        return None
    try:
        seconds = float(value)
    except ValueError:
        return None
    return seconds if math.isfinite(seconds) and seconds >= 0 else None


def _parse_item(index: int, value: Any) -> ItemScore:
    if isinstance(value, bool) or not isinstance(value, int | float):
        return ItemScore(index=index, error="malformed-response", detail=f"score is not a number: {value!r}")
    score = float(value)
    if not math.isfinite(score) or not 0.0 <= score <= 1.0:
        return ItemScore(index=index, error="malformed-response", detail=f"score outside [0, 1]: {value!r}")
    return ItemScore(index=index, score=score)


class RemoteScorerClient:
    """
    Scores texts in batches with bounded concurrency.

    Each batch is retried on transport failures, 5xx answers and 429 (honouring
    ``Retry-After``) with exponential backoff. A batch that still fails is reported as
    per-item errors; authentication failures abort the whole call.
    """

    def __init__(
        self,
        config: RemoteScorerConfig,
        api_key: str | None = None,
        transport: httpx.AsyncBaseTransport | None = None,
        sleep: Sleep = asyncio.sleep,
    ):
        self.config = config
        self.api_key = api_key
        self.transport = transport
        self.sleep = sleep
        self.requests_sent = 0

    def _delay(self, attempt: int, retry_after: float | None) -> float:
        if retry_after is not None:
            return min(retry_after, self.config.max_backoff_seconds)
        delay = self.config.backoff_seconds * self.config.backoff_multiplier ** (attempt - 1)
        return float(min(delay, self.config.max_backoff_seconds))

    async def _post(self, client: httpx.AsyncClient, start: int, batch: Sequence[str]) -> list[ItemScore]:
        self.requests_sent += 1
        try:
            response = await client.post(str(self.config.endpoint), json={"texts": list(batch)})
        except httpx.TimeoutException as e:
            raise _RetryableBatchError("timeout", f"request timed out: {e}") from e
        except httpx.TransportError as e:
            raise _RetryableBatchError("transport-error", f"request failed: {e}") from e

        if response.status_code in (401, 403):
            raise RemoteAuthError(status=response.status_code)
        if response.status_code == 429:
            raise RateLimitError(_retry_after(response))
        if response.status_code >= 500:
            raise _RetryableBatchError("server-error", f"endpoint answered {response.status_code}")
        if response.status_code != 200:
            raise RemoteScorerError(
                title="Request Rejected",
                code="http-error",
                detail=f"endpoint answered {response.status_code}",
            )

        try:
            payload = response.json()
        except ValueError as e:
            raise MalformedResponseError("response body is not JSON") from e
        scores = payload.get("scores") if isinstance(payload, dict) else None
        if not isinstance(scores, list):
            raise MalformedResponseError("response has no 'scores' list")
        if len(scores) != len(batch):
            raise MalformedResponseError(f"expected {len(batch)} scores, got {len(scores)}")
        return [_parse_item(start + offset, value) for offset, value in enumerate(scores)]

    async def _score_batch(
        self,
        client: httpx.AsyncClient,
        semaphore: asyncio.Semaphore,
        start: int,
        batch: Sequence[str],
    ) -> list[ItemScore]:
        log = logger.with_context(endpoint=str(self.config.endpoint), start=start, size=len(batch))
        async with semaphore:
            last: PinnedAucError | None = None
            for attempt in range(1, self.config.max_attempts + 1):
                try:
                    return await self._post(client, start, batch)
                except RemoteAuthError:
                    raise
                except RemoteScorerError as e:
                    last = e
                    if not e.retryable or attempt == self.config.max_attempts:
                        break
                    delay = self._delay(attempt, getattr(e, "retry_after", None))
                    log.warning("Retrying batch", attempt=attempt, reason=e.code, delay_seconds=delay)
                    await self.sleep(delay)

        assert last is not None
        log.error("Batch failed", reason=last.code)
        return [
            ItemScore(index=start + offset, error=last.code, detail=last.detail)
            for offset in range(len(batch))
        ]

    async def score(self, texts: Sequence[str]) -> list[ItemScore]:
        """
        One ItemScore per text, in input order.

        Raises:
            RemoteAuthError: If no credential is configured or the endpoint rejects it
        """
        if not texts:
            return []
        if not self.api_key:
            raise RemoteAuthError("No scorer credential configured; set PINNED_AUC_SCORER_API_KEY")

        size = self.config.batch_size
        semaphore = asyncio.Semaphore(self.config.max_concurrency)
        async with httpx.AsyncClient(
            headers={"Authorization": f"Bearer {self.api_key}"},
            timeout=self.config.timeout_seconds,
            transport=self.transport,
        ) as client:
            tasks = [
                self._score_batch(client, semaphore, start, texts[start:start + size])
                for start in range(0, len(texts), size)
            ]
            results = await asyncio.gather(*tasks, return_exceptions=True)

        items: list[ItemScore] = []
        for result in results:
            if isinstance(result, BaseException):
                raise result
            items.extend(result)

        failed = sum(1 for item in items if not item.ok)
        logger.info("Remote scoring finished", texts=len(texts), batches=len(tasks), failed=failed)
        return items


def _configured_key() -> str | None:
    secret = get_settings().scorer_api_key
    return secret.get_secret_value() if secret is not None else None


def score_remote(
    texts: Sequence[str],
    config: RemoteScorerConfig,
    api_key: str | None = None,
    transport: httpx.AsyncBaseTransport | None = None,
) -> list[ItemScore]:
    """Blocking wrapper around ``RemoteScorerClient.score``; the key defaults to the environment."""
    client = RemoteScorerClient(config, api_key or _configured_key(), transport=transport)
    return asyncio.run(client.score(texts))


def score_dataset_remote(
    dataset: Dataset,
    config: RemoteScorerConfig,
    api_key: str | None = None,
    transport: httpx.AsyncBaseTransport | None = None,
) -> Dataset:
    """
    Score every example's text remotely.

    Raises:
        RemoteScorerError: If an example has no text or any item could not be scored
    """
    missing = sum(1 for text in dataset.texts if text is None)
    if missing:
        raise RemoteScorerError(
            title="Missing Text",
            code="missing-text",
            detail=f"{missing} examples have no text to send to the scorer",
        )
    items = score_remote([t for t in dataset.texts if t is not None], config, api_key, transport)
    failures = [item for item in items if not item.ok]
    if failures:
        first = failures[0]
        raise RemoteScorerError(
            title="Incomplete Scores",
            code="incomplete-scores",
            detail=f"{len(failures)} of {len(items)} texts could not be scored; first: {first.error} ({first.detail})",
            extensions={"failed": len(failures)},
        )
    return dataset.with_scores([item.score for item in items])  # type: ignore[misc]
