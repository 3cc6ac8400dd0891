"""Seeded random streams.

Every stochastic quantity is drawn from a numpy ``PCG64`` stream identified by
``(seed, index)``: the stream for sample ``index`` is
``Generator(PCG64(SeedSequence(entropy=seed, spawn_key=(index,))))``.
Streams for different indices are statistically independent and do not
depend on the order in which samples are evaluated.
"""
import numpy as np


def stream(seed: int, index: int = 0) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(sequence))
