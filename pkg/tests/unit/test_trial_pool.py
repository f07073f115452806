"""Unit tests for the trial pool."""

import pytest

from pinned_auc.core.exceptions import UnknownTermError
from pinned_auc.workers.trial_pool import TrialPool


@pytest.mark.parametrize("workers", [1, 4])
def test_results_keyed_by_index(workers):
    """Test every trial's result is kept under its index."""
    outcome = TrialPool(max_workers=workers).run(lambda i: i * i, range(10))
    assert outcome.ordered() == [(i, i * i) for i in range(10)]
    assert outcome.failures == {}


@pytest.mark.parametrize("workers", [1, 3])
def test_domain_failure_does_not_stop_others(workers):
    """Test a trial raising a domain error is recorded and the rest still run."""
    def trial(i):
        if i == 2:
            raise UnknownTermError("nobody")
        return i

    outcome = TrialPool(max_workers=workers).run(trial, range(5))
    assert [i for i, _ in outcome.ordered()] == [0, 1, 3, 4]
    assert list(outcome.failures) == [2]
    assert outcome.failures[2].code == "unknown-term"


def test_other_exceptions_propagate():
    """Test a programming error aborts the pool."""
    def trial(i):
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        TrialPool(max_workers=2).run(trial, range(3))


def test_needs_a_worker():
    with pytest.raises(ValueError):
        TrialPool(max_workers=0)


def test_no_trials():
    assert TrialPool().run(lambda i: i, []).ordered() == []
