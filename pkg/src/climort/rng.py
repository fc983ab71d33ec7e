"""Reproducible random number streams.

All stochastic code in the package draws from a :class:`SeededStream`, a thin
wrapper around the counter-based Philox bit generator. A (seed, stream) pair
fully determines the sequence, streams with distinct indices are statistically
independent, and the output does not depend on platform or thread count.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ALGORITHM = "philox4x64"


@dataclass(frozen=True)
class SeededStream:
    """Named, reproducible RNG stream keyed by (seed, stream)."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key = np.array([self.seed % (1 << 64), self.stream % (1 << 64)],
                       dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "SeededStream":
        """Derived independent stream; used for per-path / per-fold draws."""
        return SeededStream(self.seed, self.stream * 1_000_003 + index + 1)
