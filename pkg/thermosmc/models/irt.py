"""
IRT 2PL Model
=============

Two-parameter logistic item response model. Person p answers item i correctly with
probability

    P(y_pi = 1 | theta_p, a_i, b_i) = 1 / (1 + exp(-a_i (theta_p - b_i)))

Parameter layout (d = P + 2I): abilities theta_0..theta_{P-1}, discriminations
a_0..a_{I-1}, difficulties b_0..b_{I-1}. theta and b live on R, a on (0, inf) through
the exponential bijection a = exp(s).

Priors (declared, configurable): theta ~ N(0, 1), b ~ N(0, 1), ln a ~ N(0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import expit, log_expit

from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.base import ModelSpec, SupportBijection

DEFAULT_N_PERSONS = 100
DEFAULT_N_ITEMS = 20

# Bounds that keep exp(s) and the summed log-likelihood inside float64 range.
MAX_LOG_A = 700.0
MAX_ETA = 1e100


@dataclass(frozen=True)
class IrtPriors:
    """Normal priors on theta, b and ln a."""

    theta_mean: float = 0.0
    theta_scale: float = 1.0
    b_mean: float = 0.0
    b_scale: float = 1.0
    log_a_mean: float = 0.0
    log_a_scale: float = 1.0

    def __post_init__(self) -> None:
        for name in ("theta_scale", "b_scale", "log_a_scale"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"prior {name} must be positive")


@dataclass(frozen=True, eq=False)
class IrtData:
    """Binary response matrix, persons along rows and items along columns."""

    responses: np.ndarray

    def __post_init__(self) -> None:
        responses = np.asarray(self.responses)
        if responses.ndim != 2:
            raise InvalidArgumentError(
                f"responses must be a P x I matrix, got shape {responses.shape}"
            )
        if responses.shape[0] == 0 or responses.shape[1] == 0:
            raise InvalidArgumentError("at least one person and one item are required")
        if not np.isin(responses, (0, 1)).all():
            raise InvalidArgumentError("responses must be 0 or 1")
        responses = responses.astype(np.int8)
        responses.setflags(write=False)
        object.__setattr__(self, "responses", responses)

    @property
    def n_persons(self) -> int:
        return int(self.responses.shape[0])

    @property
    def n_items(self) -> int:
        return int(self.responses.shape[1])

    @property
    def dim(self) -> int:
        return self.n_persons + 2 * self.n_items


@dataclass(frozen=True)
class IrtLayout:
    """Slices of the parameter vector."""

    n_persons: int
    n_items: int

    @property
    def theta(self) -> slice:
        return slice(0, self.n_persons)

    @property
    def a(self) -> slice:
        return slice(self.n_persons, self.n_persons + self.n_items)

    @property
    def b(self) -> slice:
        return slice(self.n_persons + self.n_items, self.n_persons + 2 * self.n_items)

    def param_names(self) -> tuple[str, ...]:
        return (
            tuple(f"theta_{p}" for p in range(self.n_persons))
            + tuple(f"a_{i}" for i in range(self.n_items))
            + tuple(f"b_{i}" for i in range(self.n_items))
        )

    def pack(self, theta: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.concatenate([np.ravel(theta), np.ravel(a), np.ravel(b)]).astype(float)


def irt_layout(data: IrtData) -> IrtLayout:
    return IrtLayout(data.n_persons, data.n_items)


def irt_response_prob(theta: float | np.ndarray, a: float | np.ndarray, b: float | np.ndarray):
    """Probability of a correct response, 1 / (1 + exp(-a (theta - b)))."""
    return expit(np.multiply(a, np.subtract(theta, b)))


def _sum_cells(values: np.ndarray) -> np.ndarray:
    """Sum over the trailing (persons, items) axes in a fixed order."""
    return values.reshape(values.shape[:-2] + (-1,)).sum(axis=-1)


def irt_model(
    data: IrtData,
    priors: Optional[IrtPriors] = None,
    truth: Optional[Sequence[float]] = None,
) -> ModelSpec:
    """Build the 2PL posterior with a = exp(s) on the discrimination coordinates."""
    priors = priors or IrtPriors()
    layout = irt_layout(data)
    y = data.responses.astype(float)

    if truth is not None and np.asarray(truth).size != data.dim:
        raise InvalidArgumentError(f"truth must have {data.dim} entries")

    def split(v: np.ndarray):
        return v[..., layout.theta], v[..., layout.a], v[..., layout.b]

    def linear_predictor(theta, a, b) -> np.ndarray:
        return a[..., None, :] * (theta[..., :, None] - b[..., None, :])

    def discrimination(s: np.ndarray) -> np.ndarray:
        return np.exp(np.minimum(s, MAX_LOG_A))

    def log_likelihood(eta: np.ndarray) -> np.ndarray:
        eta = np.clip(eta, -MAX_ETA, MAX_ETA)
        return _sum_cells(y * log_expit(eta) + (1.0 - y) * log_expit(-eta))

    def residuals(eta: np.ndarray) -> np.ndarray:
        return y - expit(eta)

    def normal_energy(v: np.ndarray, mean: float, scale: float) -> np.ndarray:
        return np.sum((v - mean) ** 2, axis=-1) / (2.0 * scale**2)

    def log_density(x: np.ndarray) -> np.ndarray:
        theta, a, b = split(x)
        log_a = np.log(a)
        eta = linear_predictor(theta, a, b)
        return (
            log_likelihood(eta)
            - normal_energy(theta, priors.theta_mean, priors.theta_scale)
            - normal_energy(b, priors.b_mean, priors.b_scale)
            - normal_energy(log_a, priors.log_a_mean, priors.log_a_scale)
            - np.sum(log_a, axis=-1)
        )

    def grad_log_density(x: np.ndarray) -> np.ndarray:
        theta, a, b = split(x)
        eta = linear_predictor(theta, a, b)
        r = residuals(eta)
        diff = theta[..., :, None] - b[..., None, :]
        log_a = np.log(a)
        grad = np.empty_like(x)
        grad[..., layout.theta] = (r * a[..., None, :]).sum(axis=-1) - (
            theta - priors.theta_mean
        ) / priors.theta_scale**2
        grad[..., layout.a] = (
            (r * diff).sum(axis=-2)
            - (log_a - priors.log_a_mean) / (priors.log_a_scale**2 * a)
            - 1.0 / a
        )
        grad[..., layout.b] = -(r * a[..., None, :]).sum(axis=-2) - (
            b - priors.b_mean
        ) / priors.b_scale**2
        return grad

    def potential_fn(q: np.ndarray) -> np.ndarray:
        theta, s, b = split(q)
        eta = linear_predictor(theta, discrimination(s), b)
        return (
            -log_likelihood(eta)
            + normal_energy(theta, priors.theta_mean, priors.theta_scale)
            + normal_energy(b, priors.b_mean, priors.b_scale)
            + normal_energy(s, priors.log_a_mean, priors.log_a_scale)
        )

    def grad_potential_fn(q: np.ndarray) -> np.ndarray:
        theta, s, b = split(q)
        a = discrimination(s)
        eta = linear_predictor(theta, a, b)
        ra = residuals(eta) * a[..., None, :]
        diff = theta[..., :, None] - b[..., None, :]
        grad = np.empty_like(q)
        grad[..., layout.theta] = -ra.sum(axis=-1) + (
            theta - priors.theta_mean
        ) / priors.theta_scale**2
        grad[..., layout.a] = -(ra * diff).sum(axis=-2) + (
            s - priors.log_a_mean
        ) / priors.log_a_scale**2
        grad[..., layout.b] = ra.sum(axis=-2) + (b - priors.b_mean) / priors.b_scale**2
        return grad

    n_persons, n_items = layout.n_persons, layout.n_items
    bijection = SupportBijection.concat(
        SupportBijection.real(n_persons),
        SupportBijection(np.zeros(n_items), np.full(n_items, np.inf)),
        SupportBijection.real(n_items),
    )
    return ModelSpec(
        name="irt",
        param_names=layout.param_names(),
        bijection=bijection,
        log_density=log_density,
        grad_log_density=grad_log_density,
        potential_fn=potential_fn,
        grad_potential_fn=grad_potential_fn,
        truth=None if truth is None else np.asarray(truth, dtype=float),
        metadata={"n_persons": n_persons, "n_items": n_items},
    )


def irt_generate(
    theta: Sequence[float] | np.ndarray,
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    seed: Optional[int] = None,
) -> IrtData:
    """Draw each response as Bernoulli(irt_response_prob(theta_p, a_i, b_i))."""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.shape != b.shape:
        raise InvalidArgumentError("a and b must have one entry per item")
    if np.any(a <= 0):
        raise InvalidArgumentError("discriminations a must be positive")
    rng = np.random.default_rng(seed)
    prob = irt_response_prob(theta[:, None], a[None, :], b[None, :])
    responses = (rng.random(prob.shape) < prob).astype(np.int8)
    return IrtData(responses)


def irt_draw_parameters(
    n_persons: int = DEFAULT_N_PERSONS,
    n_items: int = DEFAULT_N_ITEMS,
    priors: Optional[IrtPriors] = None,
    seed: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw (theta, a, b) from the priors, for synthetic benchmarks."""
    priors = priors or IrtPriors()
    if n_persons <= 0 or n_items <= 0:
        raise InvalidArgumentError("n_persons and n_items must be positive")
    rng = np.random.default_rng(seed)
    theta = rng.normal(priors.theta_mean, priors.theta_scale, n_persons)
    a = np.exp(rng.normal(priors.log_a_mean, priors.log_a_scale, n_items))
    b = rng.normal(priors.b_mean, priors.b_scale, n_items)
    return theta, a, b
