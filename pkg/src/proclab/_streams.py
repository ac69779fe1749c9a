"""Per-index substream seeding.

Every sampled object (fBM path, limit-field draw, experiment replicate)
gets its own generator seeded by a 64-bit mix of (master_seed, index).
Generation order therefore never matters: row i of an ensemble is the
same whether it is produced serially, in a process pool, or alone.
"""

from __future__ import annotations

import secrets

import numpy as np

__all__ = ["substream_seed", "substream_rng", "resolve_seed"]

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    # One SplitMix64 finalization round; full 64-bit avalanche.
    x = (x + _GOLDEN) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def substream_seed(master_seed: int, index: int) -> int:
    """64-bit seed for substream `index` under `master_seed`."""
    index = int(index)  # numpy ints overflow in C arithmetic
    if index < 0:
        raise ValueError("substream index must be nonnegative")
    return _splitmix64((_splitmix64(int(master_seed) & _MASK) ^ ((index * _GOLDEN) & _MASK)) & _MASK)


def substream_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(substream_seed(master_seed, index))


def resolve_seed(seed: int | None) -> tuple[int, bool]:
    """Map a user seed to (master_seed, reproducible).

    seed == 0 (or None) is the sentinel for "draw from OS entropy"; the
    run is then flagged non-reproducible.
    """
    if seed is None or seed == 0:
        return secrets.randbits(63) | 1, False
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    return int(seed), True
