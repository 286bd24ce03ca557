"""
Seeded random sources.

Splitting rule: an RngStream(seed, stream) is the numpy SeedSequence with entropy
``seed`` and spawn key ``(stream,)``. Children append their index to the spawn
key, so (seed, stream, child path) identifies a generator uniquely and streams
with different keys are statistically independent.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """A reproducible, splittable source of random numbers."""

    seed: int
    stream: int = 0
    path: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.stream < 0:
            raise ValueError("stream must be non-negative")

    @property
    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            entropy=self.seed & SEED_MASK, spawn_key=(self.stream, *self.path)
        )

    def generator(self) -> np.random.Generator:
        """Return a fresh Generator; identical streams give identical draws."""
        return np.random.Generator(np.random.PCG64(self.seed_sequence))

    def child(self, index: int) -> RngStream:
        """Return an independent sub-stream."""
        return RngStream(self.seed, self.stream, (*self.path, index))

    def named(self, name: str) -> RngStream:
        """Return the sub-stream keyed by a stable hash of ``name``."""
        return self.child(zlib.crc32(name.encode("utf-8")))

    def derived(self, attempt: int) -> RngStream:
        """Return the stream used for the ``attempt``-th rerun of the same work."""
        seed = (self.seed + 0x9E3779B97F4A7C15 * attempt) & SEED_MASK
        return RngStream(seed, self.stream, self.path)


def split(rng: RngStream | np.random.Generator, count: int) -> list[np.random.Generator]:
    """Return ``count`` independent generators derived from ``rng``."""
    if isinstance(rng, RngStream):
        return [rng.child(i).generator() for i in range(count)]
    return list(rng.spawn(count))


def as_generator(rng: RngStream | np.random.Generator | int | None) -> np.random.Generator:
    """Coerce any accepted random source to a numpy Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return np.random.default_rng(rng)
