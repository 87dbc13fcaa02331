"""
Model Base
==========

A model maps a posterior density on its natural support onto a potential on
unconstrained space:

    V(q) = -ln P(x | X) - ln|J(q)|,    x = to_support(q)

where J is the Jacobian of the support bijection. HMC runs on q in R^d; reported
parameter values live on the support. A model built with ``include_jacobian=False``
drops the ln|J| term, so exp(-V) is the support density evaluated along q rather than a
density on q.

Every callable here accepts batched positions of shape (..., d) so that a whole
ensemble is evaluated in one call. Models are immutable and safe to share between
worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit, log_expit, logit

from thermosmc.core.errors import InvalidArgumentError

DensityFn = Callable[[np.ndarray], np.ndarray]

GRADIENT_TOLERANCE = 1e-5


@dataclass(frozen=True, eq=False)
class SupportBijection:
    """
    Per-coordinate smooth bijection from R^d onto a box of intervals.

    Each coordinate has bounds (lower, upper), either of which may be infinite:
    - both finite:  x = lower + (upper - lower) * logistic(q)
    - lower only:   x = lower + exp(q)
    - upper only:   x = upper - exp(-q)
    - neither:      x = q
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape:
            raise InvalidArgumentError("lower and upper bounds must have equal length")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)):
            raise InvalidArgumentError("bounds must not be NaN")
        if np.any(lower >= upper):
            raise InvalidArgumentError("every lower bound must be below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def real(cls, dim: int) -> "SupportBijection":
        """Identity on R^d."""
        return cls(np.full(dim, -np.inf), np.full(dim, np.inf))

    @classmethod
    def unit_cube(cls, dim: int) -> "SupportBijection":
        """Logistic map onto the open unit cube (0, 1)^d."""
        return cls(np.zeros(dim), np.ones(dim))

    @classmethod
    def concat(cls, *parts: "SupportBijection") -> "SupportBijection":
        """Stack bijections coordinate-wise, in order."""
        return cls(
            np.concatenate([p.lower for p in parts]),
            np.concatenate([p.upper for p in parts]),
        )

    @property
    def dim(self) -> int:
        return int(self.lower.size)

    @property
    def _masks(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        lo_finite = np.isfinite(self.lower)
        hi_finite = np.isfinite(self.upper)
        return lo_finite & hi_finite, lo_finite & ~hi_finite, ~lo_finite & hi_finite

    def forward(self, q: np.ndarray) -> np.ndarray:
        """Map unconstrained q onto the support."""
        q = np.asarray(q, dtype=float)
        both, lower_only, upper_only = self._masks
        x = q.copy()
        if both.any():
            width = self.upper[both] - self.lower[both]
            x[..., both] = self.lower[both] + width * expit(q[..., both])
        if lower_only.any():
            x[..., lower_only] = self.lower[lower_only] + np.exp(q[..., lower_only])
        if upper_only.any():
            x[..., upper_only] = self.upper[upper_only] - np.exp(-q[..., upper_only])
        return x

    def inverse(self, x: np.ndarray) -> np.ndarray:
        """Map a support point back to unconstrained space."""
        x = np.asarray(x, dtype=float)
        both, lower_only, upper_only = self._masks
        q = x.copy()
        if both.any():
            width = self.upper[both] - self.lower[both]
            q[..., both] = logit((x[..., both] - self.lower[both]) / width)
        if lower_only.any():
            q[..., lower_only] = np.log(x[..., lower_only] - self.lower[lower_only])
        if upper_only.any():
            q[..., upper_only] = -np.log(self.upper[upper_only] - x[..., upper_only])
        return q

    def jacobian_diag(self, q: np.ndarray) -> np.ndarray:
        """dx/dq per coordinate (the Jacobian is diagonal)."""
        q = np.asarray(q, dtype=float)
        both, lower_only, upper_only = self._masks
        d = np.ones_like(q)
        if both.any():
            s = expit(q[..., both])
            d[..., both] = (self.upper[both] - self.lower[both]) * s * (1.0 - s)
        if lower_only.any():
            d[..., lower_only] = np.exp(q[..., lower_only])
        if upper_only.any():
            d[..., upper_only] = np.exp(-q[..., upper_only])
        return d

    def log_abs_det_jacobian(self, q: np.ndarray) -> np.ndarray:
        """ln|det dx/dq|, summed over the last axis."""
        q = np.asarray(q, dtype=float)
        both, lower_only, upper_only = self._masks
        terms = np.zeros_like(q)
        if both.any():
            qb = q[..., both]
            width = self.upper[both] - self.lower[both]
            terms[..., both] = np.log(width) + log_expit(qb) + log_expit(-qb)
        if lower_only.any():
            terms[..., lower_only] = q[..., lower_only]
        if upper_only.any():
            terms[..., upper_only] = -q[..., upper_only]
        return terms.sum(axis=-1)

    def grad_log_abs_det_jacobian(self, q: np.ndarray) -> np.ndarray:
        """Gradient of log_abs_det_jacobian with respect to q."""
        q = np.asarray(q, dtype=float)
        both, lower_only, upper_only = self._masks
        g = np.zeros_like(q)
        if both.any():
            g[..., both] = 1.0 - 2.0 * expit(q[..., both])
        g[..., lower_only] = 1.0
        g[..., upper_only] = -1.0
        return g


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """
    A posterior density together with its support bijection.

    ``log_density`` and ``grad_log_density`` are evaluated on the support (constrained
    space) and include the prior; normalisation constants may be dropped. The potential
    and its gradient on unconstrained space are derived from them unless the model
    supplies closed forms (``potential_fn``/``grad_potential_fn``), which must agree with
    the derived ones and stay finite where the support map saturates in floating point.
    Closed forms always include the -ln|J| term; with ``include_jacobian=False`` the
    term is cancelled by adding ln|J| back.
    """

    name: str
    param_names: Tuple[str, ...]
    bijection: SupportBijection
    log_density: DensityFn
    grad_log_density: DensityFn
    potential_fn: Optional[DensityFn] = None
    grad_potential_fn: Optional[DensityFn] = None
    truth: Optional[np.ndarray] = None
    metadata: Mapping[str, Any] = field(default_factory=dict)
    gradient_offset: float = 0.0
    include_jacobian: bool = True

    def __post_init__(self) -> None:
        names = tuple(self.param_names)
        if not names:
            raise InvalidArgumentError("a model needs at least one parameter")
        if len(names) != self.bijection.dim:
            raise InvalidArgumentError(
                f"{len(names)} parameter names for a {self.bijection.dim}-dimensional support"
            )
        object.__setattr__(self, "param_names", names)
        if self.truth is not None:
            truth = np.asarray(self.truth, dtype=float).reshape(-1)
            if truth.size != len(names):
                raise InvalidArgumentError("truth must have one value per parameter")
            object.__setattr__(self, "truth", truth)

    @property
    def dim(self) -> int:
        return len(self.param_names)

    def to_support(self, q: np.ndarray) -> np.ndarray:
        return self.bijection.forward(q)

    def from_support(self, x: np.ndarray) -> np.ndarray:
        return self.bijection.inverse(x)

    def support_potential(self, x: np.ndarray) -> np.ndarray:
        """Negative log posterior on the support, without the Jacobian term."""
        return -np.asarray(self.log_density(np.asarray(x, dtype=float)))

    def potential(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if self.potential_fn is None:
            return self.derived_potential(q)
        value = np.asarray(self.potential_fn(q))
        if not self.include_jacobian:
            value = value + self.bijection.log_abs_det_jacobian(q)
        return value

    def grad_potential(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if self.grad_potential_fn is None:
            grad = self.derived_grad_potential(q)
        else:
            grad = np.asarray(self.grad_potential_fn(q))
            if not self.include_jacobian:
                grad = grad + self.bijection.grad_log_abs_det_jacobian(q)
        if self.gradient_offset:
            grad = grad + self.gradient_offset
        return grad

    def derived_potential(self, q: np.ndarray) -> np.ndarray:
        """Potential built from the support density and, if included, the log-Jacobian."""
        x = self.bijection.forward(q)
        value = -np.asarray(self.log_density(x))
        if self.include_jacobian:
            value = value - self.bijection.log_abs_det_jacobian(q)
        return value

    def derived_grad_potential(self, q: np.ndarray) -> np.ndarray:
        x = self.bijection.forward(q)
        grad = -np.asarray(self.grad_log_density(x)) * self.bijection.jacobian_diag(q)
        if self.include_jacobian:
            grad = grad - self.bijection.grad_log_abs_det_jacobian(q)
        return grad

    def with_gradient_offset(self, offset: float) -> "ModelSpec":
        """Copy whose gradient is shifted by ``offset`` in every coordinate (fault injection)."""
        return replace(self, gradient_offset=self.gradient_offset + offset)

    def without_jacobian(self) -> "ModelSpec":
        """
        Copy whose potential omits -ln|J|.

        HMC then targets exp(-V(q) / (k_B T)) with V the support potential read along q.
        For the coin toss this is Beta(K/T, (N - K)/T) on the support; it is improper
        when a coin shows no heads or no tails.
        """
        return replace(self, include_jacobian=False)

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "param_names": list(self.param_names),
            "truth": None if self.truth is None else self.truth.tolist(),
            "include_jacobian": self.include_jacobian,
            **dict(self.metadata),
        }


def _checked_position(model: ModelSpec, q: Sequence[float] | np.ndarray) -> np.ndarray:
    arr = np.asarray(q, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != model.dim:
        raise InvalidArgumentError(
            f"expected a position of length {model.dim}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("position must be finite")
    return arr


def to_support(model: ModelSpec, q: Sequence[float] | np.ndarray) -> np.ndarray:
    """Map an unconstrained position onto the model's support."""
    return model.to_support(_checked_position(model, q))


def potential(model: ModelSpec, q: Sequence[float] | np.ndarray) -> np.ndarray | float:
    """V(q) = -ln P(to_support(q) | X) - ln|J(q)|."""
    value = model.potential(_checked_position(model, q))
    return float(value) if np.ndim(value) == 0 else value


def central_difference_gradient(
    model: ModelSpec, q: Sequence[float] | np.ndarray, h: float = 1e-5
) -> np.ndarray:
    """Central finite-difference gradient of the potential at a single point."""
    if not h > 0:
        raise InvalidArgumentError(f"step h must be positive, got {h}")
    q = _checked_position(model, q).reshape(-1)
    steps = np.eye(model.dim) * h
    values = model.potential(np.concatenate([q + steps, q - steps]))
    return (values[: model.dim] - values[model.dim :]) / (2.0 * h)


def check_gradient(
    model: ModelSpec, q: Sequence[float] | np.ndarray, h: float = 1e-5
) -> float:
    """
    Max relative error between the analytic gradient and central differences.

    The error per coordinate is |analytic - numeric| / max(1, |analytic|).
    """
    numeric = central_difference_gradient(model, q, h)
    analytic = model.grad_potential(np.asarray(q, dtype=float).reshape(-1))
    error = np.abs(analytic - numeric) / np.maximum(1.0, np.abs(analytic))
    return float(error.max())
