"""Deterministic seed fan-out.

A single master seed must yield an independent, reproducible stream per
Monte Carlo trial regardless of thread scheduling.  splitmix64 is the
standard finaliser for that: it is a bijection on 64-bit words with good
avalanche, so (master, index) -> seed collisions cannot happen for fixed
master.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(master: int, index: int) -> int:
    """Derive the `index`-th child seed of `master` (both taken mod 2^64)."""
    z = ((master & _MASK) + 0x9E3779B97F4A7C15 * ((index & _MASK) + 1)) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def rng_for_trial(master: int, index: int) -> np.random.Generator:
    """Generator seeded from the fan-out; stable across platforms."""
    return np.random.default_rng(splitmix64(master, index))
