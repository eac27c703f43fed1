"""Counter-based pseudo-random bits (SplitMix64).

output(seed, i) = mix64(seed + (i + 1) * GAMMA), with the standard SplitMix64
finalizer. Purely arithmetic on 64-bit words, so identical on every platform
and trivially vectorizable: stream position i can be computed directly,
which lets Monte-Carlo batches draw whole index ranges at once.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


def splitmix64(seed: int, indices) -> np.ndarray:
    """64-bit outputs of the SplitMix64 stream seeded by `seed` at `indices`."""
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (idx + np.uint64(1)) * _GAMMA) & _MASK
        z = ((z ^ (z >> np.uint64(30))) * _M1) & _MASK
        z = ((z ^ (z >> np.uint64(27))) * _M2) & _MASK
        z = z ^ (z >> np.uint64(31))
    return z


def rand_bits(seed: int, index: int, width: int) -> int:
    """One `width`-bit draw (width <= 64) at stream position `index`."""
    return int(splitmix64(seed, [index])[0]) & ((1 << width) - 1)


def mix_seed(*parts: int) -> int:
    """Deterministically fold several integers into one 64-bit seed."""
    s = 0
    for p in parts:
        s = int(splitmix64(s ^ (p & 0xFFFFFFFFFFFFFFFF), [0])[0])
    return s
