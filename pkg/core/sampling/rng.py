"""Seeded random streams for reproducible, worker-count independent sampling."""
import random
from typing import MutableSequence

import numpy as np


class RngStream:
    """
    Wrapper around random.Random for one (master seed, stream index) pair.

    The stream seed comes from numpy's SeedSequence, so distinct indices give
    statistically independent streams.  random.Random is used for the draws
    because it samples exactly below arbitrarily large integers.
    """

    def __init__(self, seed: int, index: int = 0):
        if seed < 0 or index < 0:
            raise ValueError("seed and stream index must be non-negative")
        words = np.random.SeedSequence(entropy=seed, spawn_key=(index,)).generate_state(4, dtype=np.uint64)
        derived = 0
        for word in words:
            derived = (derived << 64) | int(word)
        self._rng = random.Random(derived)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) for any positive int n."""
        return self._rng.randrange(n)

    def shuffle(self, seq: MutableSequence) -> None:
        self._rng.shuffle(seq)
