"""Seeded, splittable random-number streams.

Every stochastic operation takes an ``RngStream`` (or a live numpy
``Generator`` when composing internally).  A stream is identified by
``(seed, stream_id)``: equal identifiers reproduce identical variates and
distinct identifiers give statistically independent ones, so a simulation
can hand out per-replication and per-draw streams without coordination
and results stay invariant under worker count or evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15  # 2^64 / golden ratio, the usual key-mixing constant


def _splitmix64(z: int) -> int:
    # Finalizer of the splitmix64 generator; full-avalanche 64-bit mixing.
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class RngStream:
    """A value identifying one reproducible stream of random numbers."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh counter-based generator positioned at the stream start."""
        key = np.array([self.seed & _MASK64, self.stream_id & _MASK64],
                       dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, *path: int) -> RngStream:
        """Derive a child stream; distinct paths give distinct streams."""
        sid = self.stream_id & _MASK64
        for index in path:
            sid = _splitmix64(sid ^ ((int(index) + 1) * _GOLDEN & _MASK64))
        return RngStream(self.seed, sid)


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream or a live Generator; return a Generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")
