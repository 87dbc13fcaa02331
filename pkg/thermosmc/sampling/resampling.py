"""
Resampling Schemes
==================

Index selection for the resampling step. Only indices are returned; copying
positions and resetting momenta is done by the caller.

Schemes:
- multinomial: counts ~ Multinomial(size, weights)
- systematic: one uniform offset, evenly spaced pointers into the weight CDF
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Dict, Type

import numpy as np

from thermosmc.core.config import ResamplingScheme
from thermosmc.core.errors import InvalidArgumentError


def _normalised(weights: np.ndarray) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    if w.ndim != 1 or w.size == 0:
        raise InvalidArgumentError("weights must be a non-empty vector")
    if not np.isfinite(total) or total <= 0 or np.any(w < 0):
        raise InvalidArgumentError("weights must be non-negative with a positive sum")
    return w / total


class Resampler(ABC):
    """Draws ``size`` ancestor indices proportionally to ``weights``."""

    scheme: ResamplingScheme

    @abstractmethod
    def draw(self, weights: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
        """Return ancestor indices in ascending order."""


class MultinomialResampler(Resampler):
    scheme = ResamplingScheme.MULTINOMIAL

    def draw(self, weights: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
        w = _normalised(weights)
        counts = rng.multinomial(size, w)
        return np.repeat(np.arange(w.size), counts)


class SystematicResampler(Resampler):
    scheme = ResamplingScheme.SYSTEMATIC

    def draw(self, weights: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
        w = _normalised(weights)
        cdf = np.cumsum(w)
        cdf[-1] = 1.0
        pointers = (rng.random() + np.arange(size)) / size
        return np.searchsorted(cdf, pointers, side="right")


_RESAMPLERS: Dict[ResamplingScheme, Type[Resampler]] = {
    ResamplingScheme.MULTINOMIAL: MultinomialResampler,
    ResamplingScheme.SYSTEMATIC: SystematicResampler,
}


def get_resampler(scheme: ResamplingScheme | str = ResamplingScheme.MULTINOMIAL) -> Resampler:
    try:
        return _RESAMPLERS[ResamplingScheme(scheme)]()
    except ValueError as e:
        raise InvalidArgumentError(f"unknown resampling scheme {scheme!r}") from e


def survivor_count(n_effective: float, n_particles: int) -> int:
    """ceil(N_eff) clipped to [1, N]; rounding noise below 1e-9 is ignored."""
    return max(1, min(n_particles, math.ceil(n_effective - 1e-9)))


def select_survivors(weights: np.ndarray, n_effective: float) -> np.ndarray:
    """
    Indices of the ceil(N_eff) largest weights, in ascending index order.

    Ties are broken by lower index first.
    """
    w = np.asarray(weights, dtype=float)
    k = survivor_count(n_effective, w.size)
    ranked = np.argsort(-w, kind="stable")
    return np.sort(ranked[:k])
