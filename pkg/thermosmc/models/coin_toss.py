"""
Coin Toss Model
===============

Independent coins tossed N times each, K_i heads observed for coin i. The prior is
uniform on the unit cube (complete ignorance of the biases), so the posterior of coin i
is proportional to p^K (1 - p)^(N - K).

On unconstrained space, with p = logistic(q), the Jacobian p(1 - p) is absorbed into
the exponents:

    V(q) = -sum_i [(K_i + 1) ln p_i + (N - K_i + 1) ln(1 - p_i)]
    dV/dq_i = (N + 2) p_i - (K_i + 1)

so the potential's stationary point sits at p_i = (K_i + 1) / (N + 2). At temperature T the
support marginal is Beta((K + 1) / T, (N - K + 1) / T), whose mean does not move with T.
Without the Jacobian (``ModelSpec.without_jacobian``) the +1s drop out, the stationary
point is K_i / N and the marginal is Beta(K / T, (N - K) / T).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit, log_expit

from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.base import ModelSpec, SupportBijection

# Observations per coin in the reference experiment.
DEFAULT_N_OBS = 40
DEFAULT_P_TRUE = (0.5, 0.75)


@dataclass(frozen=True)
class CoinTossData:
    """Observed heads per coin out of ``n_obs >= 1`` tosses each."""

    n_obs: int
    heads: Tuple[int, ...]

    def __post_init__(self) -> None:
        heads = tuple(int(k) for k in self.heads)
        object.__setattr__(self, "heads", heads)
        if self.n_obs < 1:
            raise InvalidArgumentError(f"n_obs must be positive, got {self.n_obs}")
        if not heads:
            raise InvalidArgumentError("at least one coin is required")
        for i, k in enumerate(heads):
            if not 0 <= k <= self.n_obs:
                raise InvalidArgumentError(
                    f"heads[{i}]={k} outside [0, {self.n_obs}]"
                )

    @property
    def n_coins(self) -> int:
        return len(self.heads)


def ct_model(data: CoinTossData, truth: Optional[Sequence[float]] = None) -> ModelSpec:
    """Build the coin toss posterior on the open unit cube."""
    k = np.asarray(data.heads, dtype=float)
    n = float(data.n_obs)
    tails = n - k

    def log_density(x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.sum(k * np.log(x) + tails * np.log1p(-x), axis=-1)

    def grad_log_density(x: np.ndarray) -> np.ndarray:
        return k / x - tails / (1.0 - x)

    def potential_fn(q: np.ndarray) -> np.ndarray:
        return -np.sum((k + 1.0) * log_expit(q) + (tails + 1.0) * log_expit(-q), axis=-1)

    def grad_potential_fn(q: np.ndarray) -> np.ndarray:
        return (n + 2.0) * expit(q) - (k + 1.0)

    return ModelSpec(
        name="ct",
        param_names=tuple(f"p{i + 1}" for i in range(data.n_coins)),
        bijection=SupportBijection.unit_cube(data.n_coins),
        log_density=log_density,
        grad_log_density=grad_log_density,
        potential_fn=potential_fn,
        grad_potential_fn=grad_potential_fn,
        truth=None if truth is None else np.asarray(truth, dtype=float),
        metadata={"n_obs": data.n_obs, "heads": list(data.heads)},
    )


def ct_map(data: CoinTossData) -> Tuple[float, ...]:
    """Maximum a-posteriori estimate K/N under the uniform prior."""
    return tuple(k / data.n_obs for k in data.heads)


def ct_posterior_mean(data: CoinTossData) -> Tuple[float, ...]:
    """Posterior mean (K + 1) / (N + 2), the mean of Beta(K + 1, N - K + 1)."""
    return tuple((k + 1) / (data.n_obs + 2) for k in data.heads)


def ct_expected_data(p_true: Sequence[float], n_obs: int = DEFAULT_N_OBS) -> CoinTossData:
    """Data at the expected head counts round(N * p)."""
    return CoinTossData(n_obs=n_obs, heads=tuple(int(round(n_obs * p)) for p in p_true))


def ct_generate(
    p_true: Sequence[float], n_obs: int = DEFAULT_N_OBS, seed: Optional[int] = None
) -> CoinTossData:
    """Draw K_i ~ Binomial(n_obs, p_i); deterministic for a given seed."""
    p = np.asarray(p_true, dtype=float)
    if n_obs <= 0:
        raise InvalidArgumentError(f"n_obs must be positive, got {n_obs}")
    if p.size == 0 or np.any((p <= 0.0) | (p >= 1.0)):
        raise InvalidArgumentError("every p_true must lie in the open interval (0, 1)")
    rng = np.random.default_rng(seed)
    heads = rng.binomial(n_obs, p)
    return CoinTossData(n_obs=n_obs, heads=tuple(int(h) for h in heads))
