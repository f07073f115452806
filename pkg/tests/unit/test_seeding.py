"""Tests for seed derivation."""

import numpy as np
import pytest

from pinned_auc.core.seeding import MAX_SEED, SEED_MASK, derive_seed, id_keys, make_rng, priorities


def test_derive_seed_is_a_function_of_the_path():
    """Test one path always gives one seed and different paths differ."""
    assert derive_seed(2024, "skew", 3) == derive_seed(2024, "skew", 3)
    assert derive_seed(2024, "skew", 3) != derive_seed(2024, "skew", 4)
    assert derive_seed(2024, "pin", 3, "gay") != derive_seed(2024, "pin", 3, "muslim")
    assert derive_seed(2024, "pin", "gay") != derive_seed(2024, "pin", 0, "gay")


def test_derive_seed_ignores_request_order():
    forward = [derive_seed(7, "skew", i) for i in range(5)]
    backward = [derive_seed(7, "skew", i) for i in reversed(range(5))]
    assert forward == backward[::-1]


@pytest.mark.parametrize("master", [0, 1, 2**62, SEED_MASK, MAX_SEED])
def test_derived_seeds_fit_63_bits(master):
    assert 0 <= derive_seed(master, "score") <= SEED_MASK


@pytest.mark.parametrize("master", [0, 5, 2024])
def test_high_bit_masters_give_different_streams(master):
    """Test masters that differ only in bit 63 do not collide."""
    assert derive_seed(master, "pin", "gay") != derive_seed(master + 2**63, "pin", "gay")
    low = make_rng(master, "score").random(8)
    high = make_rng(master + 2**63, "score").random(8)
    assert not np.array_equal(low, high)


def test_string_and_integer_keys_differ():
    assert derive_seed(1, "3") != derive_seed(1, 3)


def test_priorities_depend_on_seed_not_position():
    """Test an item's priority follows its id, wherever it sits in the pool."""
    keys = id_keys(["a", "b", "c", "d"])
    full = priorities(keys, seed=11)
    assert np.array_equal(priorities(keys[[2, 0]], seed=11), full[[2, 0]])
    assert not np.array_equal(priorities(keys, seed=12), full)
