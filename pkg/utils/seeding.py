"""
Seed derivation helpers
"""

import numpy as np


def derive_seed(base_seed: int, *keys: int) -> int:
    """
    Mix a base seed with integer keys into an independent 32-bit seed.

    The mixing goes through numpy's SeedSequence, so seed_c for class index c
    is a fixed function of (base_seed, c) and never depends on scheduling.

    Args:
        base_seed: User-facing seed (e.g. GanConfig.random_seed)
        *keys: Stream identifiers such as the class index

    Returns:
        Derived seed in [0, 2**32)
    """
    sequence = np.random.SeedSequence([int(base_seed) & 0xFFFFFFFF, *[int(k) for k in keys]])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def make_rng(base_seed: int, *keys: int) -> np.random.Generator:
    """Generator seeded by derive_seed(base_seed, *keys)"""
    return np.random.default_rng(derive_seed(base_seed, *keys))
