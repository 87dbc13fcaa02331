"""
Benchmark Sweep
===============

Times SMC runs over a grid of particle counts N and worker counts W.

For each N the W=1 run is the baseline: speedup(W) = t(W=1) / t(W). The baseline is
timed even when W=1 is not part of the requested sweep. Timings are the median over
``repeats`` runs and exclude ensemble initialisation.
"""

import csv
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from thermosmc.core.config import RunConfig
from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.base import ModelSpec
from thermosmc.models.factory import build_model
from thermosmc.sampling.sampler import SmcSampler, kernel_config_from, smc_config_from, time_run

from .models import BENCHMARK_COLUMNS, BenchmarkRow

logger = logging.getLogger(__name__)

ProgressFn = Callable[[int, int, float], None]


def _time_configuration(
    config: RunConfig, model: ModelSpec, n_particles: int, workers: int, n_iterations: int, repeats: int
) -> float:
    timings = []
    for _ in range(repeats):
        sampler = SmcSampler(
            model=model,
            n_particles=n_particles,
            temperature=config.temperature,
            kernel_config=kernel_config_from(config),
            smc_config=smc_config_from(config),
            seed=config.seed,
            workers=workers,
        )
        timings.append(time_run(sampler, n_iterations))
    return float(np.median(timings))


def run_benchmark(
    config: RunConfig,
    particle_counts: Sequence[int],
    worker_counts: Sequence[int],
    n_iterations: int = 1,
    repeats: int = 1,
    model: Optional[ModelSpec] = None,
    progress: Optional[ProgressFn] = None,
) -> List[BenchmarkRow]:
    """One BenchmarkRow per (N, W) pair with W <= N, ordered by N then W."""
    if not particle_counts or not worker_counts:
        raise InvalidArgumentError("the sweep needs at least one particle count and one worker count")
    if any(n < 1 for n in particle_counts) or any(w < 1 for w in worker_counts):
        raise InvalidArgumentError("particle and worker counts must be positive")
    if n_iterations < 1 or repeats < 1:
        raise InvalidArgumentError("n_iterations and repeats must be positive")
    model = model or build_model(config)

    rows: List[BenchmarkRow] = []
    for n in particle_counts:
        times: Dict[int, float] = {}
        for w in sorted(set(worker_counts) | {1}):
            if w > n:
                logger.warning("Skipping W=%d for N=%d: more workers than particles", w, n)
                continue
            times[w] = _time_configuration(config, model, n, w, n_iterations, repeats)
            logger.info("Benchmark N=%d W=%d: %.4fs", n, w, times[w])
            if progress is not None:
                progress(n, w, times[w])
        for w in worker_counts:
            if w in times:
                rows.append(BenchmarkRow(n, w, times[w], speedup=times[1] / times[w]))
    return rows


def write_benchmark_csv(rows: Sequence[BenchmarkRow], path: Path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(BENCHMARK_COLUMNS), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_dict())
