"""
SMC Sampler
===========

Stateful driver for a whole run: owns the model, kernel and SMC settings, the
random streams, the shard plan and the ensemble.

Usage:
    sampler = SmcSampler.from_config(config)
    with CsvTraceSink(config.out) as sink:
        trace = sampler.run(config.n_smc_iterations, sink)
    estimate = sampler.estimate()
"""

from __future__ import annotations

import logging
import time
from typing import List, Optional

import numpy as np

from thermosmc.core.config import RunConfig
from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.base import ModelSpec
from thermosmc.models.factory import build_model
from thermosmc.parallel.sharding import ShardPlan, partition
from thermosmc.parallel.streams import RandomStreams
from thermosmc.sampling.hmc import KernelConfig
from thermosmc.sampling.smc import (
    Ensemble,
    SmcConfig,
    init_ensemble,
    running_estimates,
    smc_iterate,
    weighted_estimate,
)
from thermosmc.telemetry.models import RunSummary, TraceRecord
from thermosmc.telemetry.store import TraceSink

logger = logging.getLogger(__name__)


def kernel_config_from(config: RunConfig) -> KernelConfig:
    return KernelConfig(
        step_size=config.step_size,
        n_leapfrog=config.n_leapfrog,
        mass=config.mass,
        invert_momentum_on_accept=config.invert_momentum,
        k_b=config.k_b,
        steps_per_iteration=config.hmc_steps_per_iteration,
    )


def smc_config_from(config: RunConfig) -> SmcConfig:
    return SmcConfig(ess_threshold=config.ess_threshold, resampling=config.resampling)


class SmcSampler:
    """Runs SMC iterations on one ensemble and keeps the trace."""

    def __init__(
        self,
        model: ModelSpec,
        n_particles: int = 1024,
        temperature: float = 1.0,
        kernel_config: Optional[KernelConfig] = None,
        smc_config: Optional[SmcConfig] = None,
        seed: int = 0,
        workers: int = 1,
    ):
        self.model = model
        self.temperature = temperature
        self.kernel_config = kernel_config or KernelConfig()
        self.smc_config = smc_config or SmcConfig()
        self.streams = RandomStreams(seed)
        self.plan: ShardPlan = partition(n_particles, workers)
        self.trace: List[TraceRecord] = []
        self.ensemble: Ensemble = init_ensemble(
            n_particles, model, temperature, self.streams.init_rng(), self.kernel_config
        )

    @classmethod
    def from_config(cls, config: RunConfig, model: Optional[ModelSpec] = None) -> "SmcSampler":
        return cls(
            model=model or build_model(config),
            n_particles=config.n_particles,
            temperature=config.temperature,
            kernel_config=kernel_config_from(config),
            smc_config=smc_config_from(config),
            seed=config.seed,
            workers=config.resolved_workers(),
        )

    @property
    def n_particles(self) -> int:
        return self.plan.n_particles

    @property
    def workers(self) -> int:
        return self.plan.n_workers

    @property
    def seed(self) -> int:
        return self.streams.seed

    def step(self) -> TraceRecord:
        record = smc_iterate(
            self.ensemble, self.model, self.kernel_config, self.smc_config, self.streams, self.plan
        )
        self.trace.append(record)
        return record

    def run(self, n_iterations: int, sink: Optional[TraceSink] = None) -> List[TraceRecord]:
        """Run ``n_iterations`` iterations, streaming each record to ``sink``."""
        if n_iterations < 1:
            raise InvalidArgumentError(f"n_iterations must be at least 1, got {n_iterations}")
        logger.info(
            "Running %d SMC iterations: model=%s N=%d W=%d T=%g seed=%d",
            n_iterations,
            self.model.name,
            self.n_particles,
            self.workers,
            self.temperature,
            self.seed,
        )
        if sink is not None:
            sink.open(self.model.param_names)
        records = []
        for _ in range(n_iterations):
            record = self.step()
            records.append(record)
            if sink is not None:
                sink.write(record)
        return records

    def estimate(self) -> np.ndarray:
        return weighted_estimate(self.trace, self.temperature, self.kernel_config.k_b)

    def running(self) -> np.ndarray:
        return running_estimates(self.trace, self.temperature, self.kernel_config.k_b)

    def summary(self, trace_path: Optional[str] = None) -> RunSummary:
        if not self.trace:
            raise InvalidArgumentError("no iterations have been run")
        truth = self.model.truth
        return RunSummary(
            model=self.model.name,
            param_names=list(self.model.param_names),
            estimate=self.estimate().tolist(),
            n_particles=self.n_particles,
            n_iterations=len(self.trace),
            temperature=self.temperature,
            k_b=self.kernel_config.k_b,
            seed=self.seed,
            workers=self.workers,
            truth=None if truth is None else truth.tolist(),
            running_estimates=self.running().tolist(),
            total_wall_time=sum(r.wall_time for r in self.trace),
            mean_acceptance_rate=float(np.mean([r.acceptance_rate for r in self.trace])),
            n_resampled=sum(1 for r in self.trace if r.resampled),
            n_diverged=sum(r.n_diverged for r in self.trace),
            trace_path=trace_path,
            include_jacobian=self.model.include_jacobian,
        )


def time_run(sampler: SmcSampler, n_iterations: int) -> float:
    """Wall-clock seconds for ``n_iterations`` iterations."""
    start = time.perf_counter()
    sampler.run(n_iterations)
    return time.perf_counter() - start
