"""Seeded, forkable random streams.

All protocol randomness is drawn from a :class:`RandomStream` passed in
explicitly. Streams are backed by numpy's counter-based Philox generator and
keyed by ``(seed, path)``, so ``RandomStream(7).fork(3)`` always yields the
same sequence regardless of what the parent stream has drawn.
"""
from __future__ import annotations

import numpy as np


class RandomStream:
    """Reproducible random stream identified by a seed and a fork path."""

    __slots__ = ("seed", "path", "_gen")

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.path = tuple(int(p) for p in path)
        seq = np.random.SeedSequence(entropy=seed, spawn_key=self.path)
        self._gen = np.random.Generator(np.random.Philox(seq))

    def fork(self, index: int) -> "RandomStream":
        """Independent substream ``(seed, path + (index,))``."""
        return RandomStream(self.seed, self.path + (index,))

    def random(self) -> float:
        return float(self._gen.random())

    def integers(self, low: int, high: int | None = None) -> int:
        return int(self._gen.integers(low, high))

    def bits(self, n: int) -> list[int]:
        return [int(b) for b in self._gen.integers(0, 2, size=n)]

    def permutation(self, n: int) -> list[int]:
        return [int(p) for p in self._gen.permutation(n)]

    def sample(self, population, k: int) -> list:
        """``k`` distinct items of ``population`` in random order."""
        population = list(population)
        picks = self._gen.choice(len(population), size=k, replace=False)
        return [population[int(i)] for i in picks]

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, path={self.path})"

