"""
Sampling Module
===============

HMC kernel, SMC operations and the run-level sampler.

Usage:
    from thermosmc.sampling import SmcSampler

    sampler = SmcSampler(model, n_particles=1024, temperature=1.0, seed=7)
    sampler.run(10)
    print(sampler.estimate())
"""

from .hmc import (
    DIVERGENCE_THRESHOLD,
    KernelConfig,
    PhasePoint,
    TransitionResult,
    acceptance_probability,
    hamiltonian,
    hamiltonians,
    hmc_step,
    hmc_transition,
    kinetic_energy,
    leapfrog,
    run_chain,
    sample_momentum,
)
from .resampling import (
    MultinomialResampler,
    Resampler,
    SystematicResampler,
    get_resampler,
    select_survivors,
)
from .smc import (
    Ensemble,
    Particle,
    SmcConfig,
    effective_size,
    init_ensemble,
    renormalize_energies,
    resample,
    running_estimates,
    smc_iterate,
    weighted_estimate,
    weights_from_energies,
)
from .sampler import SmcSampler, kernel_config_from, smc_config_from

__all__ = [
    # HMC
    "DIVERGENCE_THRESHOLD",
    "KernelConfig",
    "PhasePoint",
    "TransitionResult",
    "acceptance_probability",
    "hamiltonian",
    "hamiltonians",
    "hmc_step",
    "hmc_transition",
    "kinetic_energy",
    "leapfrog",
    "run_chain",
    "sample_momentum",
    # Resampling
    "MultinomialResampler",
    "Resampler",
    "SystematicResampler",
    "get_resampler",
    "select_survivors",
    # SMC
    "Ensemble",
    "Particle",
    "SmcConfig",
    "effective_size",
    "init_ensemble",
    "renormalize_energies",
    "resample",
    "running_estimates",
    "smc_iterate",
    "weighted_estimate",
    "weights_from_energies",
    # Sampler
    "SmcSampler",
    "kernel_config_from",
    "smc_config_from",
]
