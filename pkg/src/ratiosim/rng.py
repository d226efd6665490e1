"""Deterministic stream derivation for reproducible parallel simulation.

Every source of randomness in the package is a counter-based Philox
generator (period 2^256) keyed by an avalanche mix of integer indices,
so any unit of work can be executed in any order, on any number of
workers, and still consume exactly the same uniforms.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def mix64(*parts: int) -> int:
    """Avalanche-mix integers into a single 64-bit key (SplitMix64 finalizer).

    Chaining the finalizer over the parts gives well-separated keys for
    nearby index tuples such as (seed, replication, researcher).
    """
    h = 0
    for part in parts:
        h = (h + (int(part) & _MASK64) + 0x9E3779B97F4A7C15) & _MASK64
        h ^= h >> 30
        h = (h * 0xBF58476D1CE4E5B9) & _MASK64
        h ^= h >> 27
        h = (h * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    return h


def substream(*key_parts: int) -> np.random.Generator:
    """Independent Philox stream keyed by the avalanche mix of ``key_parts``."""
    return np.random.Generator(np.random.Philox(key=mix64(*key_parts)))
