"""
HMC Kernel
==========

Hamiltonian Monte Carlo at temperature T.

    H(q, p) = |p|^2 / (2m) + V(q)
    p ~ Normal(0, m k_B T)
    accept with probability min(1, exp(-dH / (k_B T)))

so exp(-H / (k_B T)) is the stationary joint density. Momentum is not negated after an
accepted proposal unless ``invert_momentum_on_accept`` is set.

The batched ``hmc_transition`` works on arrays of shape (n, d) and takes its randomness
as pre-drawn noise, which lets the caller decide which stream feeds which particle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from thermosmc.core.errors import IntegrationDivergedError, InvalidArgumentError
from thermosmc.models.base import ModelSpec

logger = logging.getLogger(__name__)

# |dH| above this many k_B T counts as a divergent trajectory.
DIVERGENCE_THRESHOLD = 1000.0


@dataclass(frozen=True, eq=False)
class KernelConfig:
    """Leapfrog and acceptance settings for one HMC kernel call."""

    step_size: float = 0.01
    n_leapfrog: int = 100
    mass: float | np.ndarray = 1.0
    invert_momentum_on_accept: bool = False
    k_b: float = 1.0
    refresh_momentum: bool = True
    steps_per_iteration: int = 1

    def __post_init__(self) -> None:
        if not self.step_size > 0:
            raise InvalidArgumentError(f"step_size must be positive, got {self.step_size}")
        if self.n_leapfrog < 1:
            raise InvalidArgumentError(f"n_leapfrog must be at least 1, got {self.n_leapfrog}")
        if self.steps_per_iteration < 1:
            raise InvalidArgumentError("steps_per_iteration must be at least 1")
        mass = np.asarray(self.mass, dtype=float)
        if mass.ndim > 1 or np.any(~(mass > 0)):
            raise InvalidArgumentError("mass must be a positive scalar or vector")
        object.__setattr__(self, "mass", float(mass) if mass.ndim == 0 else mass)
        if not self.k_b > 0:
            raise InvalidArgumentError(f"k_B must be positive, got {self.k_b}")


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """Position q on unconstrained space and its conjugate momentum p."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=float).reshape(-1)
        p = np.asarray(self.p, dtype=float).reshape(-1)
        if q.shape != p.shape:
            raise InvalidArgumentError(f"q and p differ in length: {q.size} vs {p.size}")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise InvalidArgumentError("phase point must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return int(self.q.size)


@dataclass
class TransitionResult:
    """Per-particle outcome of one batched kernel call."""

    q: np.ndarray
    p: np.ndarray
    energies: np.ndarray
    accepted: np.ndarray
    diverged: np.ndarray

    @property
    def n_accepted(self) -> int:
        return int(np.count_nonzero(self.accepted))

    @property
    def n_diverged(self) -> int:
        return int(np.count_nonzero(self.diverged))


def _check_temperature(temperature: float, allow_zero: bool = False) -> None:
    if allow_zero and temperature == 0:
        return
    if not temperature > 0:
        bound = "non-negative" if allow_zero else "positive"
        raise InvalidArgumentError(f"temperature must be {bound}, got {temperature}")


def momentum_scale(config: KernelConfig, temperature: float) -> np.ndarray | float:
    """Standard deviation sqrt(m k_B T) of each momentum component."""
    return np.sqrt(np.asarray(config.mass) * config.k_b * temperature)


def sample_momentum(
    dim: int, temperature: float, config: KernelConfig, rng: np.random.Generator
) -> np.ndarray:
    """Thermal momentum, each component ~ Normal(0, m k_B T)."""
    _check_temperature(temperature, allow_zero=True)
    if temperature == 0:
        return np.zeros(dim)
    return rng.standard_normal(dim) * momentum_scale(config, temperature)


def kinetic_energy(p: np.ndarray, config: KernelConfig) -> np.ndarray:
    return np.sum(p * p / (2.0 * np.asarray(config.mass)), axis=-1)


def hamiltonians(q: np.ndarray, p: np.ndarray, model: ModelSpec, config: KernelConfig) -> np.ndarray:
    """H for a batch of phase points, shape (..., d) -> (...)."""
    return kinetic_energy(p, config) + model.potential(q)


def hamiltonian(point: PhasePoint, model: ModelSpec, config: KernelConfig) -> float:
    return float(hamiltonians(point.q, point.p, model, config))


def _integrate(
    q: np.ndarray,
    p: np.ndarray,
    model: ModelSpec,
    config: KernelConfig,
    raise_on_divergence: bool = False,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Velocity Verlet; returns (q, p, diverged) with diverged flagged per row."""
    eps = config.step_size
    half = 0.5 * eps
    inv_mass = 1.0 / np.asarray(config.mass)

    with np.errstate(over="ignore", invalid="ignore"):
        grad = model.grad_potential(q)
        diverged = ~np.all(np.isfinite(grad), axis=-1)
        if raise_on_divergence and np.any(diverged):
            raise IntegrationDivergedError(0)
        for step in range(1, config.n_leapfrog + 1):
            p = p - half * grad
            q = q + eps * inv_mass * p
            grad = model.grad_potential(q)
            bad = ~np.all(np.isfinite(grad), axis=-1)
            if raise_on_divergence and np.any(bad):
                raise IntegrationDivergedError(step)
            diverged = diverged | bad
            p = p - half * grad
    return q, p, diverged


def leapfrog(point: PhasePoint, model: ModelSpec, config: KernelConfig) -> PhasePoint:
    """
    Integrate Hamilton's equations for ``n_leapfrog`` steps of size ``step_size``.

    Raises IntegrationDivergedError carrying the step index (0 for the starting point)
    at the first non-finite gradient.
    """
    q, p, _ = _integrate(point.q, point.p, model, config, raise_on_divergence=True)
    return PhasePoint(q, p)


def acceptance_probability(delta_h, temperature: float, k_b: float = 1.0):
    """min(1, exp(-dH / (k_B T))); NaN energy differences give probability 0."""
    _check_temperature(temperature)
    dh = np.asarray(delta_h, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        prob = np.exp(np.minimum(0.0, -dh / (k_b * temperature)))
    prob = np.where(np.isnan(prob), 0.0, prob)
    return float(prob) if prob.ndim == 0 else prob


def hmc_transition(
    q: np.ndarray,
    p: np.ndarray,
    model: ModelSpec,
    config: KernelConfig,
    temperature: float,
    z: np.ndarray,
    u: np.ndarray,
) -> TransitionResult:
    """
    One kernel call for a batch of particles.

    ``z`` (n, d) are standard normals for the momentum refresh, ``u`` (n,) uniforms on
    [0, 1) for the accept test. With ``refresh_momentum`` off, ``p`` is used as the
    starting momentum and ``z`` is ignored. Rejected particles keep their position and
    the starting momentum of the trajectory.
    """
    _check_temperature(temperature)
    q = np.asarray(q, dtype=float)
    if config.refresh_momentum:
        p0 = np.asarray(z, dtype=float) * momentum_scale(config, temperature)
    else:
        p0 = np.asarray(p, dtype=float)

    h0 = hamiltonians(q, p0, model, config)
    q1, p1, diverged = _integrate(q, p0, model, config)
    with np.errstate(over="ignore", invalid="ignore"):
        h1 = hamiltonians(q1, p1, model, config)
        delta_h = h1 - h0
    kt = config.k_b * temperature
    diverged = diverged | ~np.isfinite(h1) | (np.abs(delta_h) > DIVERGENCE_THRESHOLD * kt)

    prob = np.asarray(acceptance_probability(np.where(diverged, np.inf, delta_h), temperature, config.k_b))
    accepted = (np.asarray(u) < prob) & ~diverged
    if config.invert_momentum_on_accept:
        p1 = -p1

    mask = accepted[..., None]
    return TransitionResult(
        q=np.where(mask, q1, q),
        p=np.where(mask, p1, p0),
        energies=np.where(accepted, h1, h0),
        accepted=accepted,
        diverged=diverged,
    )


def hmc_step(
    point: PhasePoint,
    model: ModelSpec,
    config: KernelConfig,
    temperature: float,
    rng: np.random.Generator,
) -> Tuple[PhasePoint, bool]:
    """One HMC kernel call on a single phase point; divergence counts as rejection."""
    z = rng.standard_normal((1, point.dim))
    u = rng.random(1)
    result = hmc_transition(point.q[None, :], point.p[None, :], model, config, temperature, z, u)
    if result.diverged[0]:
        logger.debug("Divergent trajectory from q=%s rejected", point.q)
    return PhasePoint(result.q[0], result.p[0]), bool(result.accepted[0])


def run_chain(
    q0: np.ndarray,
    model: ModelSpec,
    config: KernelConfig,
    temperature: float,
    n_steps: int,
    rng: np.random.Generator,
    p0: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, float]:
    """
    Run ``n_steps`` kernel calls from positions ``q0`` (shape (c, d) for c chains).

    Returns the positions after every step, shape (n_steps, c, d), and the acceptance rate.
    """
    q = np.atleast_2d(np.asarray(q0, dtype=float))
    p = np.zeros_like(q) if p0 is None else np.atleast_2d(np.asarray(p0, dtype=float))
    samples = np.empty((n_steps,) + q.shape)
    n_accepted = 0
    for i in range(n_steps):
        z = rng.standard_normal(q.shape)
        u = rng.random(q.shape[0])
        result = hmc_transition(q, p, model, config, temperature, z, u)
        q, p = result.q, result.p
        n_accepted += result.n_accepted
        samples[i] = q
    return samples, n_accepted / (n_steps * q.shape[0])
