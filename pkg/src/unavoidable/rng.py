"""Seeded randomness.

Every randomized routine takes an explicit integer seed and builds its own
PCG64 stream, so results do not depend on call order elsewhere.
"""
import numpy as np


def make_rng(seed, *keys):
    """PCG64 generator for ``seed``, optionally split by integer ``keys``."""
    if seed is None:
        raise ValueError("an explicit seed is required")
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def derive_seed(seed, *keys):
    """A child 63-bit integer seed, stable across platforms and numpy versions."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0]) >> 1
