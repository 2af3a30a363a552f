"""Decibel conversions and the shared random-number plumbing.

Every dB <-> linear conversion in the package goes through this module so
that golden output files stay bit-stable.
"""

import math

import numpy as np

# Identifier recorded in every report so outputs can be checked for
# cross-platform reproducibility.
RNG_ALGORITHM = "numpy-pcg64"

Seed = int | tuple[int, ...]


def make_rng(seed: Seed) -> np.random.Generator:
    """Seedable generator with a fixed, portable bit stream (PCG64)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def sub_seed(seed: Seed, index: int) -> tuple[int, ...]:
    """Derive an independent child seed from `seed` for stream `index`."""
    if isinstance(seed, tuple):
        return (*seed, index)
    return (seed, index)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)
