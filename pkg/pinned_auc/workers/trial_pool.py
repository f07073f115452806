"""Bounded thread pool for independent experiment trials."""

import time
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from functools import partial
from typing import Generic, TypeVar

from ..core.exceptions import PinnedAucError
from ..core.observability import get_logger

logger = get_logger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class TrialOutcome(Generic[T]):
    """Results keyed by trial index, plus the trials that failed with a domain error."""

    results: dict[int, T]
    failures: dict[int, PinnedAucError]

    def ordered(self) -> list[tuple[int, T]]:
        """Successful results in trial-index order, whatever order they finished in."""
        return sorted(self.results.items())


class TrialPool:
    """
    Runs ``fn(index)`` for every trial index on a thread pool.

    Trials share read-only inputs; numpy releases the GIL for the heavy array work.
    A trial raising ``PinnedAucError`` is recorded as failed and the remaining trials
    still run; any other exception aborts the pool.
    """

    def __init__(self, name: str = "trials", max_workers: int = 4):
        """
        Initialize the pool.

        Args:
            name: Pool name for logging
            max_workers: Threads; 1 runs trials inline on the calling thread
        """
        if max_workers < 1:
            raise ValueError("max_workers must be at least 1")
        self.name = name
        self.max_workers = max_workers

    def run(self, fn: Callable[[int], T], indices: Iterable[int]) -> TrialOutcome[T]:
        indices = list(indices)
        results: dict[int, T] = {}
        failures: dict[int, PinnedAucError] = {}
        started = time.perf_counter()

        def record(index: int, call: Callable[[], T]) -> None:
            try:
                results[index] = call()
            except PinnedAucError as e:
                logger.error("Trial failed", pool=self.name, trial=index, reason=e.code, detail=e.detail)
                failures[index] = e

        if self.max_workers == 1:
            for index in indices:
                record(index, partial(fn, index))
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers, thread_name_prefix=self.name) as executor:
                futures = {executor.submit(fn, index): index for index in indices}
                for future in as_completed(futures):
                    record(futures[future], future.result)

        logger.debug(
            "Trial pool finished",
            pool=self.name,
            trials=len(indices),
            failed=len(failures),
            duration_seconds=round(time.perf_counter() - started, 3),
        )
        return TrialOutcome(results=results, failures=failures)
