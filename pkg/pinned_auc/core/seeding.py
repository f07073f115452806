"""
Splittable seed derivation.

Every random decision in the package is driven by a seed derived from a master seed
and a path of keys, for example ``derive_seed(master, "skew", 7)`` or
``derive_seed(master, "pin", 7, "gay")``. Derivation goes through
``numpy.random.SeedSequence(master, spawn_key=...)``; string keys are first hashed
with BLAKE2b to a 64-bit word. Derived seeds depend only on the path, never on the
order in which they are requested, so units of work can run concurrently and still
reproduce bit-for-bit.
"""

import hashlib
from collections.abc import Iterable

import numpy as np
import numpy.typing as npt

MAX_SEED = (1 << 64) - 1
SEED_MASK = (1 << 63) - 1

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _hash_word(text: str) -> int:
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "little")


def _key_word(key: int | str) -> int:
    if isinstance(key, int) and not isinstance(key, bool) and key >= 0:
        return key
    return _hash_word(f"{type(key).__name__}:{key}")


def derive_seed(master: int, *keys: int | str) -> int:
    """
    Derive a non-negative 63-bit seed from ``master`` and a key path.

    The full master seed feeds the entropy pool, so masters that differ only above bit 62
    still give different streams.
    """
    sequence = np.random.SeedSequence(master, spawn_key=tuple(_key_word(k) for k in keys))
    return int(sequence.generate_state(1, np.uint64)[0]) & SEED_MASK


def make_rng(master: int, *keys: int | str) -> np.random.Generator:
    """Return a PCG64 generator seeded from ``derive_seed(master, *keys)``."""
    return np.random.default_rng(derive_seed(master, *keys))


def id_keys(ids: Iterable[str]) -> npt.NDArray[np.uint64]:
    """Stable 64-bit key per example id."""
    return np.fromiter((_hash_word(i) for i in ids), dtype=np.uint64)


def priorities(keys: npt.NDArray[np.uint64], seed: int) -> npt.NDArray[np.uint64]:
    """
    Per-item sampling priorities for bottom-k sampling.

    splitmix64 finaliser over ``key ^ seed``. Taking the k smallest priorities gives a
    uniform sample without replacement; removing an item from the pool only changes the
    sample if that item was in it.
    """
    z = keys ^ np.uint64(derive_seed(seed, "priority"))
    z = z + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))
