"""Gaussian toy model: V(q) = |q|^2 / (2 scale^2) on R^d."""

from __future__ import annotations

import numpy as np

from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.base import ModelSpec, SupportBijection


def gaussian_model(dim: int = 1, scale: float = 1.0) -> ModelSpec:
    if dim < 1:
        raise InvalidArgumentError(f"dim must be positive, got {dim}")
    if not scale > 0:
        raise InvalidArgumentError(f"scale must be positive, got {scale}")
    precision = 1.0 / scale**2

    def log_density(x: np.ndarray) -> np.ndarray:
        return -0.5 * precision * np.sum(x * x, axis=-1)

    def grad_log_density(x: np.ndarray) -> np.ndarray:
        return -precision * x

    return ModelSpec(
        name="gaussian-toy",
        param_names=tuple(f"x{i}" for i in range(dim)),
        bijection=SupportBijection.real(dim),
        log_density=log_density,
        grad_log_density=grad_log_density,
        truth=np.zeros(dim),
        metadata={"scale": scale},
    )
