"""
Random Streams
==============

Counter-keyed random streams for a run.

Every stream is a Philox generator seeded by SeedSequence(root_seed,
spawn_key=(purpose, iteration)), so a stream depends only on the root seed and
what it is used for. Propagation noise is drawn for the whole ensemble in
particle-index order: row i of an iteration's noise is a function of
(root seed, iteration, i) alone, whatever the worker layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from thermosmc.core.errors import InvalidArgumentError


class StreamPurpose(IntEnum):
    INIT = 0
    PROPAGATE = 1
    RESAMPLE = 2


@dataclass(frozen=True, eq=False)
class PropagationNoise:
    """Pre-drawn noise for one iteration: z (S, N, d) normals, u (S, N) uniforms."""

    z: np.ndarray
    u: np.ndarray

    @property
    def n_particles(self) -> int:
        return int(self.u.shape[1])

    @property
    def steps(self) -> int:
        return int(self.u.shape[0])

    def shard(self, start: int, stop: int) -> "PropagationNoise":
        return PropagationNoise(self.z[:, start:stop], self.u[:, start:stop])


class RandomStreams:
    """
    Factory of deterministic generators derived from one root seed.

    Usage:
        streams = RandomStreams(seed=7)
        rng = streams.init_rng()
        noise = streams.propagation_noise(iteration=1, n_particles=1024, dim=2)
    """

    def __init__(self, seed: int = 0):
        if seed < 0:
            raise InvalidArgumentError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed)

    def generator(self, purpose: StreamPurpose, iteration: int = 0) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(int(purpose), int(iteration)))
        return np.random.Generator(np.random.Philox(sequence))

    def init_rng(self) -> np.random.Generator:
        return self.generator(StreamPurpose.INIT)

    def resample_rng(self, iteration: int) -> np.random.Generator:
        return self.generator(StreamPurpose.RESAMPLE, iteration)

    def propagation_noise(
        self, iteration: int, n_particles: int, dim: int, steps: int = 1
    ) -> PropagationNoise:
        rng = self.generator(StreamPurpose.PROPAGATE, iteration)
        z = rng.standard_normal((steps, n_particles, dim))
        u = rng.random((steps, n_particles))
        return PropagationNoise(z, u)

    def __repr__(self) -> str:
        return f"RandomStreams(seed={self.seed})"
