"""Deterministic random-stream construction.

Every stochastic operation in this library takes an explicit numpy
``Generator``. A ``(seed, stream)`` pair maps to one independent generator,
so corpus runs can hand out ``stream = item index`` and stay byte-reproducible
no matter how the work is scheduled.
"""

import numpy as np


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for (seed, stream); equal pairs yield equal sequences."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be non-negative")
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream)]))
