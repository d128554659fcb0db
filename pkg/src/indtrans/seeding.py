"""Seed derivation.

Every random choice in the package draws from a generator built here, keyed
by the caller's seed plus a tuple of stream labels (iteration, retry, cell,
...).  ``SeedSequence`` mixes the keys with a fixed hash, so streams are
reproducible across platforms and numpy versions that keep that algorithm.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError

SEED_DOMAIN = 0x1D7A_5EED


def _entropy(keys):
    out = [SEED_DOMAIN]
    for k in keys:
        k = int(k)
        if k < 0:
            raise InputError(f"seeds must be non-negative integers, got {k}")
        out.append(k)
    return out


def rng_for(*keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_entropy(keys)))


def derive_seed(*keys: int) -> int:
    """A 63-bit child seed determined by ``keys``."""
    state = np.random.SeedSequence(_entropy(keys)).generate_state(2, np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1])) & ((1 << 63) - 1)
