"""
Gradient Suite
==============

Compares each model's analytic potential gradient against central finite
differences at seeded points drawn from a standard normal on unconstrained space.

Usage:
    result = run_gradient_suite(model, n_points=100, seed=0)
    print(result.format_report())
    if not result.passed:
        ...
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.base import GRADIENT_TOLERANCE, ModelSpec, check_gradient

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 100
DEFAULT_STEP = 1e-5


@dataclass
class GradientCheckResult:
    """Outcome of checking one model's gradient at a set of points."""

    model_name: str
    n_points: int
    tolerance: float
    errors: List[float] = field(default_factory=list)
    worst_index: int = 0
    worst_point: List[float] = field(default_factory=list)

    @property
    def max_error(self) -> float:
        return max(self.errors) if self.errors else 0.0

    @property
    def passed(self) -> bool:
        return self.max_error < self.tolerance

    @property
    def n_failed(self) -> int:
        return sum(1 for e in self.errors if e >= self.tolerance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model_name,
            "n_points": self.n_points,
            "tolerance": self.tolerance,
            "max_error": self.max_error,
            "passed": self.passed,
            "worst_index": self.worst_index,
            "worst_point": self.worst_point,
        }

    def format_report(self) -> str:
        """Format the check as a report."""
        status = "PASSED" if self.passed else "FAILED"
        lines = [
            "",
            "═" * 60,
            f"        GRADIENT CHECK: {self.model_name}",
            "═" * 60,
            "",
            f"Points: {self.n_points} | Failed: {self.n_failed} | Tolerance: {self.tolerance:.0e}",
            f"Max relative error: {self.max_error:.3e}",
            f"Result: {status}",
            "",
            f"Worst point (#{self.worst_index}):",
        ]
        shown = self.worst_point[:8]
        lines.append("  q = [" + ", ".join(f"{v:.6g}" for v in shown) + (", ...]" if len(self.worst_point) > 8 else "]"))
        lines.append("")
        lines.append("═" * 60)
        return "\n".join(lines)


def run_gradient_suite(
    model: ModelSpec,
    n_points: int = DEFAULT_POINTS,
    seed: int = 0,
    h: float = DEFAULT_STEP,
    tolerance: float = GRADIENT_TOLERANCE,
) -> GradientCheckResult:
    """Run check_gradient at ``n_points`` standard-normal points."""
    if n_points < 1:
        raise InvalidArgumentError(f"n_points must be positive, got {n_points}")
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((n_points, model.dim))

    errors = [check_gradient(model, q, h) for q in points]
    worst = int(np.argmax(errors))
    logger.debug("Gradient check for %s: max error %.3e at point %d", model.name, errors[worst], worst)
    return GradientCheckResult(
        model_name=model.name,
        n_points=n_points,
        tolerance=tolerance,
        errors=errors,
        worst_index=worst,
        worst_point=points[worst].tolist(),
    )
