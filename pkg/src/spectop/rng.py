"""Deterministic seeded-stream helpers.

All randomness in the package flows through numpy's SeedSequence machinery so
that a run is reproducible bit-for-bit from a single master seed.  Per-vertex
and per-trial streams are derived by keying a SeedSequence on the pair
(seed, index) rather than by splitting one sequential stream; this keeps a
vertex's draw independent of how many other vertices were processed first.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "keyed_uniform",
    "keyed_uniforms",
    "trial_seed",
    "rng_for",
]

_U53 = np.uint64(11)  # drop to 53 mantissa bits
_INV = 2.0 ** -53


def keyed_uniform(seed: int, key: int) -> float:
    """Uniform double in [0, 1) from the stream keyed by (seed, key)."""
    state = np.random.SeedSequence([int(seed), int(key)]).generate_state(1, dtype=np.uint64)[0]
    return float((state >> _U53) * _INV)


def keyed_uniforms(seed: int, n: int) -> np.ndarray:
    """Uniform doubles for keys 0..n-1, one independent stream per key."""
    out = np.empty(n, dtype=np.float64)
    for v in range(n):
        state = np.random.SeedSequence([int(seed), v]).generate_state(1, dtype=np.uint64)[0]
        out[v] = float((state >> _U53) * _INV)
    return out


def trial_seed(master_seed: int, trial: int) -> int:
    """Integer seed for one trial of a sweep, derived from (master seed, trial index)."""
    return int(np.random.SeedSequence([int(master_seed), int(trial)]).generate_state(1)[0])


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))
