"""
Sharded Propagation
===================

Splits the ensemble into W contiguous shards, propagates them concurrently with
joblib and gathers the results back in particle-index order.

Workers share no mutable state: each gets its slice of positions, momenta and
pre-drawn noise and returns new arrays. All reductions run after the gather on
full, index-ordered arrays, so results are bit-identical for any W.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from thermosmc.core.errors import InvalidArgumentError, PropagationError
from thermosmc.models.base import ModelSpec
from thermosmc.parallel.streams import PropagationNoise, RandomStreams
from thermosmc.sampling.hmc import KernelConfig, hmc_transition

if TYPE_CHECKING:
    from thermosmc.sampling.smc import Ensemble

logger = logging.getLogger(__name__)

JOBLIB_BACKEND = "threading"


@dataclass(frozen=True)
class ShardPlan:
    """W contiguous, disjoint index ranges covering [0, N)."""

    n_particles: int
    n_workers: int
    ranges: Tuple[Tuple[int, int], ...]

    @property
    def sizes(self) -> List[int]:
        return [stop - start for start, stop in self.ranges]


def partition(n: int, w: int) -> ShardPlan:
    """Balanced split: the first N mod W shards get one extra particle."""
    if n < 1:
        raise InvalidArgumentError(f"need at least one particle, got {n}")
    if w < 1:
        raise InvalidArgumentError(f"need at least one worker, got {w}")
    if w > n:
        raise InvalidArgumentError(f"{w} workers for {n} particles: W must not exceed N")
    base, extra = divmod(n, w)
    ranges = []
    start = 0
    for i in range(w):
        stop = start + base + (1 if i < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ShardPlan(n_particles=n, n_workers=w, ranges=tuple(ranges))


@dataclass
class ShardResult:
    q: np.ndarray
    p: np.ndarray
    energies: np.ndarray
    accepted: np.ndarray
    diverged: np.ndarray


@dataclass
class PropagationResult:
    """Gathered per-particle state after one propagation phase."""

    q: np.ndarray
    p: np.ndarray
    energies: np.ndarray
    n_accepted: int
    n_diverged: int
    n_proposals: int

    @property
    def acceptance_rate(self) -> float:
        return self.n_accepted / self.n_proposals if self.n_proposals else 0.0


def _propagate_shard(
    index: int,
    q: np.ndarray,
    p: np.ndarray,
    model: ModelSpec,
    config: KernelConfig,
    temperature: float,
    noise: PropagationNoise,
) -> ShardResult:
    try:
        accepted = np.zeros(q.shape[0], dtype=np.int64)
        diverged = np.zeros(q.shape[0], dtype=np.int64)
        energies = np.empty(q.shape[0])
        for s in range(noise.steps):
            step = hmc_transition(q, p, model, config, temperature, noise.z[s], noise.u[s])
            q, p, energies = step.q, step.p, step.energies
            accepted += step.accepted
            diverged += step.diverged
        return ShardResult(q, p, energies, accepted, diverged)
    except Exception as e:
        raise PropagationError(index, e) from e


def propagate_shards(
    ensemble: "Ensemble",
    plan: ShardPlan,
    model: ModelSpec,
    config: KernelConfig,
    temperature: float,
    streams: RandomStreams,
    iteration: Optional[int] = None,
) -> PropagationResult:
    """
    HMC-propagate every particle, one joblib task per shard.

    Noise for ``iteration`` (default: the ensemble's next iteration) is drawn for the
    whole ensemble before dispatch. Any worker failure raises PropagationError and
    nothing is returned.
    """
    n = ensemble.q.shape[0]
    if plan.n_particles != n:
        raise InvalidArgumentError(f"plan covers {plan.n_particles} particles, ensemble has {n}")
    iteration = ensemble.iteration + 1 if iteration is None else iteration
    noise = streams.propagation_noise(iteration, n, ensemble.q.shape[1], config.steps_per_iteration)

    tasks = (
        delayed(_propagate_shard)(
            i,
            ensemble.q[start:stop],
            ensemble.p[start:stop],
            model,
            config,
            temperature,
            noise.shard(start, stop),
        )
        for i, (start, stop) in enumerate(plan.ranges)
    )
    results: List[ShardResult] = Parallel(n_jobs=plan.n_workers, backend=JOBLIB_BACKEND)(tasks)

    accepted = np.concatenate([r.accepted for r in results])
    diverged = np.concatenate([r.diverged for r in results])
    logger.debug(
        "Propagated %d particles on %d shards: %d accepted, %d diverged",
        n,
        plan.n_workers,
        int(accepted.sum()),
        int(diverged.sum()),
    )
    return PropagationResult(
        q=np.concatenate([r.q for r in results]),
        p=np.concatenate([r.p for r in results]),
        energies=np.concatenate([r.energies for r in results]),
        n_accepted=int(accepted.sum()),
        n_diverged=int(diverged.sum()),
        n_proposals=n * config.steps_per_iteration,
    )


def reduce_ensemble(
    energies: np.ndarray, positions: np.ndarray, weights: np.ndarray
) -> Tuple[float, np.ndarray, float]:
    """
    (e_min, weighted mean position, weight sum) over the gathered ensemble.

    Inputs are full arrays in particle-index order, so the sums are the same whatever
    the shard layout. The mean is normalised by the weight sum.
    """
    energies = np.asarray(energies, dtype=float)
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    weights = np.asarray(weights, dtype=float)
    if energies.size == 0:
        raise InvalidArgumentError("cannot reduce an empty ensemble")
    weight_sum = float(np.sum(weights))
    if not weight_sum > 0:
        raise InvalidArgumentError("weights must have a positive sum")
    mean = np.sum(weights[:, None] * positions, axis=0) / weight_sum
    return float(np.min(energies)), mean, weight_sum
