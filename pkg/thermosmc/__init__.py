"""
thermosmc
=========

Sequential Monte Carlo with an HMC kernel, written in the language of statistical
physics: particles carry energies H(q, p), are weighted by exp(-E / (k_B T)) and
resampled when the ensemble's effective size drops.

Quick Start:
    from thermosmc import SmcSampler, ct_expected_data, ct_model

    model = ct_model(ct_expected_data((0.5, 0.75)), truth=(0.5, 0.75))
    sampler = SmcSampler(model, n_particles=1024, temperature=1.0, seed=7)
    sampler.run(10)
    print(sampler.estimate())
"""

__version__ = "1.0.0"

# Core
from thermosmc.core import (
    ConfigError,
    IntegrationDivergedError,
    InvalidArgumentError,
    PropagationError,
    RunConfig,
    ThermoSMCError,
)

# Models
from thermosmc.models import (
    ModelSpec,
    SupportBijection,
    build_model,
    ct_expected_data,
    ct_generate,
    ct_map,
    ct_model,
    gaussian_model,
    irt_generate,
    irt_model,
    potential,
    to_support,
)

# Sampling (before parallel: the shard workers import the HMC kernel)
from thermosmc.sampling import (
    KernelConfig,
    PhasePoint,
    SmcConfig,
    SmcSampler,
    effective_size,
    hamiltonian,
    hmc_step,
    init_ensemble,
    leapfrog,
    resample,
    smc_iterate,
    weighted_estimate,
    weights_from_energies,
)

# Parallel
from thermosmc.parallel import RandomStreams, ShardPlan, partition, propagate_shards, reduce_ensemble

# Telemetry
from thermosmc.telemetry import CsvTraceSink, RunSummary, TraceRecord, read_trace

__all__ = [
    "__version__",
    # Core
    "ConfigError",
    "IntegrationDivergedError",
    "InvalidArgumentError",
    "PropagationError",
    "RunConfig",
    "ThermoSMCError",
    # Models
    "ModelSpec",
    "SupportBijection",
    "build_model",
    "ct_expected_data",
    "ct_generate",
    "ct_map",
    "ct_model",
    "gaussian_model",
    "irt_generate",
    "irt_model",
    "potential",
    "to_support",
    # Sampling
    "KernelConfig",
    "PhasePoint",
    "SmcConfig",
    "SmcSampler",
    "effective_size",
    "hamiltonian",
    "hmc_step",
    "init_ensemble",
    "leapfrog",
    "resample",
    "smc_iterate",
    "weighted_estimate",
    "weights_from_energies",
    # Parallel
    "RandomStreams",
    "ShardPlan",
    "partition",
    "propagate_shards",
    "reduce_ensemble",
    # Telemetry
    "CsvTraceSink",
    "RunSummary",
    "TraceRecord",
    "read_trace",
]
