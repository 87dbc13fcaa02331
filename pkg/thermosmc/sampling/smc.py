"""
SMC Operations
==============

The particle ensemble and the steps of one SMC iteration:

1. propagate every particle with HMC
2. subtract the lowest energy from every energy, store it
3. Boltzmann weights w_i ~ exp(-E_i / (k_B T)); store the weighted mean on the support
4. effective size N_eff = 1 / sum(w_i^2)
5. if N_eff < rho N: keep the ceil(N_eff) heaviest particles, duplicate them by weight
   back to N, reset momenta thermally and weights to 1/N

The final estimate averages the stored means with weights built from the stored
minimum energies.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from thermosmc.core.config import ResamplingScheme
from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.base import ModelSpec
from thermosmc.parallel.sharding import ShardPlan, partition, propagate_shards, reduce_ensemble
from thermosmc.parallel.streams import RandomStreams
from thermosmc.sampling.hmc import KernelConfig, hamiltonians, kinetic_energy, momentum_scale
from thermosmc.sampling.resampling import get_resampler, select_survivors
from thermosmc.telemetry.models import TraceRecord

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Particle:
    q: np.ndarray
    p: np.ndarray
    energy: float
    weight: float


@dataclass(eq=False)
class Ensemble:
    """
    N particles stored column-wise.

    q, p: (N, d); energies, weights: (N,). ``iteration`` counts completed SMC
    iterations.
    """

    q: np.ndarray
    p: np.ndarray
    energies: np.ndarray
    weights: np.ndarray
    temperature: float
    k_b: float = 1.0
    iteration: int = 0

    def __post_init__(self) -> None:
        self.q = np.atleast_2d(np.asarray(self.q, dtype=float))
        self.p = np.atleast_2d(np.asarray(self.p, dtype=float))
        self.energies = np.asarray(self.energies, dtype=float).reshape(-1)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        n = self.q.shape[0]
        if n < 1:
            raise InvalidArgumentError("an ensemble needs at least one particle")
        if self.p.shape != self.q.shape:
            raise InvalidArgumentError("q and p must have the same shape")
        if self.energies.shape != (n,) or self.weights.shape != (n,):
            raise InvalidArgumentError("energies and weights need one entry per particle")
        if not self.temperature > 0:
            raise InvalidArgumentError(f"temperature must be positive, got {self.temperature}")

    @property
    def n_particles(self) -> int:
        return int(self.q.shape[0])

    @property
    def dim(self) -> int:
        return int(self.q.shape[1])

    @property
    def particles(self) -> List[Particle]:
        return [
            Particle(self.q[i].copy(), self.p[i].copy(), float(self.energies[i]), float(self.weights[i]))
            for i in range(self.n_particles)
        ]


@dataclass(frozen=True)
class SmcConfig:
    """Resampling trigger and scheme."""

    ess_threshold: float = 0.5
    resampling: ResamplingScheme = ResamplingScheme.MULTINOMIAL

    def __post_init__(self) -> None:
        if not 0 < self.ess_threshold <= 1:
            raise InvalidArgumentError(f"ess_threshold must lie in (0, 1], got {self.ess_threshold}")
        object.__setattr__(self, "resampling", ResamplingScheme(self.resampling))


def init_ensemble(
    n: int,
    model: ModelSpec,
    temperature: float,
    rng: np.random.Generator,
    config: Optional[KernelConfig] = None,
) -> Ensemble:
    """Standard-normal positions on R^d, thermal momenta, weights 1/n."""
    if n < 1:
        raise InvalidArgumentError(f"need at least one particle, got {n}")
    if not temperature > 0:
        raise InvalidArgumentError(f"temperature must be positive, got {temperature}")
    config = config or KernelConfig()
    q = rng.standard_normal((n, model.dim))
    p = rng.standard_normal((n, model.dim)) * momentum_scale(config, temperature)
    return Ensemble(
        q=q,
        p=p,
        energies=hamiltonians(q, p, model, config),
        weights=np.full(n, 1.0 / n),
        temperature=temperature,
        k_b=config.k_b,
    )


def renormalize_energies(ensemble: Ensemble) -> float:
    """Subtract the lowest energy from all energies; return it."""
    e_min = float(np.min(ensemble.energies))
    ensemble.energies = ensemble.energies - e_min
    return e_min


def weights_from_energies(energies: Sequence[float] | np.ndarray, temperature: float, k_b: float = 1.0) -> np.ndarray:
    """Normalised Boltzmann weights exp(-E_i / (k_B T)), computed relative to the lowest energy."""
    if not temperature > 0:
        raise InvalidArgumentError(f"temperature must be positive, got {temperature}")
    e = np.asarray(energies, dtype=float)
    if e.size == 0 or not np.all(np.isfinite(e)):
        raise InvalidArgumentError("energies must be a non-empty finite vector")
    w = np.exp(-(e - e.min()) / (k_b * temperature))
    return w / w.sum()


def effective_size(weights: Sequence[float] | np.ndarray) -> float:
    """
    (sum w)^2 / sum w^2, which is 1 / sum w^2 for normalised weights.

    Clipped to [1, N], the bounds rounding can overshoot.
    """
    w = np.asarray(weights, dtype=float)
    total = float(np.sum(w))
    if w.size == 0 or not total > 0:
        raise InvalidArgumentError("weights must have a positive sum")
    return float(np.clip(total * total / float(np.sum(w * w)), 1.0, w.size))


def resample(
    ensemble: Ensemble,
    rng: np.random.Generator,
    model: Optional[ModelSpec] = None,
    config: Optional[KernelConfig] = None,
    scheme: ResamplingScheme | str = ResamplingScheme.MULTINOMIAL,
) -> Ensemble:
    """
    Rebuild the ensemble from its ceil(N_eff) heaviest particles, in place.

    Duplicates are drawn proportionally to the survivors' weights; momenta are redrawn
    at the ensemble temperature, energies recomputed and weights reset to 1/N.

    Without a model the potential part of each energy is taken from the ancestor's
    stored energy minus its kinetic energy, so any energy offset carries over.
    """
    config = config or KernelConfig(k_b=ensemble.k_b)
    n = ensemble.n_particles
    n_eff = effective_size(ensemble.weights)
    survivors = select_survivors(ensemble.weights, n_eff)
    ancestors = survivors[get_resampler(scheme).draw(ensemble.weights[survivors], n, rng)]

    q = ensemble.q[ancestors]
    p = rng.standard_normal(q.shape) * momentum_scale(config, ensemble.temperature)
    if model is not None:
        energies = hamiltonians(q, p, model, config)
    else:
        stored_potential = ensemble.energies - kinetic_energy(ensemble.p, config)
        energies = stored_potential[ancestors] + kinetic_energy(p, config)
    ensemble.q = q
    ensemble.p = p
    ensemble.energies = energies
    ensemble.weights = np.full(n, 1.0 / n)
    logger.debug(
        "Resampled %d particles from %d survivors (N_eff=%.1f)", n, survivors.size, n_eff
    )
    return ensemble


def smc_iterate(
    ensemble: Ensemble,
    model: ModelSpec,
    kernel_config: KernelConfig,
    smc_config: SmcConfig,
    streams: RandomStreams,
    plan: Optional[ShardPlan] = None,
) -> TraceRecord:
    """Run one full SMC iteration on ``ensemble`` and return its trace record."""
    start = time.perf_counter()
    iteration = ensemble.iteration + 1
    plan = plan or partition(ensemble.n_particles, 1)
    n = ensemble.n_particles

    propagated = propagate_shards(
        ensemble, plan, model, kernel_config, ensemble.temperature, streams, iteration
    )
    ensemble.q = propagated.q
    ensemble.p = propagated.p
    ensemble.energies = propagated.energies
    if propagated.n_diverged:
        logger.warning(
            "Iteration %d: %d divergent trajectories rejected", iteration, propagated.n_diverged
        )

    e_min = renormalize_energies(ensemble)
    ensemble.weights = weights_from_energies(ensemble.energies, ensemble.temperature, kernel_config.k_b)
    _, mean, _ = reduce_ensemble(ensemble.energies, model.to_support(ensemble.q), ensemble.weights)
    ess = effective_size(ensemble.weights)
    if n > 1 and ess < 2.0:
        logger.warning("Iteration %d: ESS %.2f, the weight sits on a single particle", iteration, ess)

    resampled = ess < smc_config.ess_threshold * n
    if resampled:
        resample(ensemble, streams.resample_rng(iteration), model, kernel_config, smc_config.resampling)

    ensemble.iteration = iteration
    record = TraceRecord(
        iteration=iteration,
        e_min=e_min,
        mean_params=tuple(mean),
        ess=ess,
        resampled=resampled,
        acceptance_rate=propagated.acceptance_rate,
        wall_time=time.perf_counter() - start,
        n_diverged=propagated.n_diverged,
    )
    logger.debug(
        "Iteration %d: e_min=%.6g ess=%.1f resampled=%s acceptance=%.3f",
        iteration,
        e_min,
        ess,
        resampled,
        record.acceptance_rate,
    )
    return record


def _estimate_weights(e_min: np.ndarray, temperature: float, k_b: float) -> np.ndarray:
    return np.exp(-(e_min - e_min.min()) / (k_b * temperature))


def weighted_estimate(trace: Sequence[TraceRecord], temperature: float, k_b: float = 1.0) -> np.ndarray:
    """
    Moving average of the stored means, weighted by exp(-e_min / (k_B T)).

    Energies are taken relative to the lowest stored e_min.
    """
    if not trace:
        raise InvalidArgumentError("cannot estimate from an empty trace")
    if not temperature > 0:
        raise InvalidArgumentError(f"temperature must be positive, got {temperature}")
    e_min = np.array([r.e_min for r in trace], dtype=float)
    means = np.array([r.mean_params for r in trace], dtype=float)
    w = _estimate_weights(e_min, temperature, k_b)
    return np.sum(w[:, None] * means, axis=0) / np.sum(w)


def running_estimates(trace: Sequence[TraceRecord], temperature: float, k_b: float = 1.0) -> np.ndarray:
    """weighted_estimate over the first t records, for t = 1..len(trace); shape (len, d)."""
    return np.array([weighted_estimate(trace[: t + 1], temperature, k_b) for t in range(len(trace))])
