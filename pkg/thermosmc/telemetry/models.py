"""
Telemetry Models
================

Records emitted by a sampling run.

- TraceRecord: one row per SMC iteration (the CSV trace)
- RunSummary: the final estimate and run diagnostics (the JSON summary)
- BenchmarkRow: one (N, W) timing of the benchmark sweep
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple


@dataclass
class TraceRecord:
    """
    State stored at the end of one SMC iteration.

    ``e_min`` is the ensemble's lowest energy before renormalisation and
    ``mean_params`` the weighted ensemble mean on the model's support.
    """

    iteration: int
    e_min: float
    mean_params: Tuple[float, ...]
    ess: float
    resampled: bool
    acceptance_rate: float
    wall_time: float = 0.0
    n_diverged: int = 0

    def __post_init__(self) -> None:
        self.mean_params = tuple(float(v) for v in self.mean_params)

    @property
    def wall_ms(self) -> float:
        return self.wall_time * 1000.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iteration": self.iteration,
            "e_min": self.e_min,
            "mean_params": list(self.mean_params),
            "ess": self.ess,
            "resampled": self.resampled,
            "acceptance_rate": self.acceptance_rate,
            "wall_time": self.wall_time,
            "n_diverged": self.n_diverged,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TraceRecord":
        return cls(
            iteration=int(data["iteration"]),
            e_min=float(data["e_min"]),
            mean_params=tuple(data["mean_params"]),
            ess=float(data["ess"]),
            resampled=bool(data["resampled"]),
            acceptance_rate=float(data["acceptance_rate"]),
            wall_time=float(data.get("wall_time", 0.0)),
            n_diverged=int(data.get("n_diverged", 0)),
        )


@dataclass
class RunSummary:
    """Final result of a run, written next to the trace as JSON."""

    model: str
    param_names: List[str]
    estimate: List[float]
    n_particles: int
    n_iterations: int
    temperature: float
    k_b: float
    seed: int
    workers: int
    truth: Optional[List[float]] = None
    running_estimates: List[List[float]] = field(default_factory=list)
    total_wall_time: float = 0.0
    mean_acceptance_rate: float = 0.0
    n_resampled: int = 0
    n_diverged: int = 0
    trace_path: Optional[str] = None
    include_jacobian: bool = True

    @property
    def abs_error(self) -> Optional[List[float]]:
        if self.truth is None:
            return None
        return [abs(e - t) for e, t in zip(self.estimate, self.truth)]

    @property
    def max_abs_error(self) -> Optional[float]:
        errors = self.abs_error
        return max(errors) if errors else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "param_names": list(self.param_names),
            "estimate": list(self.estimate),
            "truth": self.truth,
            "abs_error": self.abs_error,
            "n_particles": self.n_particles,
            "n_iterations": self.n_iterations,
            "temperature": self.temperature,
            "k_b": self.k_b,
            "seed": self.seed,
            "workers": self.workers,
            "running_estimates": self.running_estimates,
            "total_wall_time": self.total_wall_time,
            "mean_acceptance_rate": self.mean_acceptance_rate,
            "n_resampled": self.n_resampled,
            "n_diverged": self.n_diverged,
            "trace_path": self.trace_path,
            "include_jacobian": self.include_jacobian,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunSummary":
        return cls(
            model=data["model"],
            param_names=list(data["param_names"]),
            estimate=[float(v) for v in data["estimate"]],
            n_particles=int(data["n_particles"]),
            n_iterations=int(data["n_iterations"]),
            temperature=float(data["temperature"]),
            k_b=float(data["k_b"]),
            seed=int(data["seed"]),
            workers=int(data["workers"]),
            truth=data.get("truth"),
            running_estimates=data.get("running_estimates", []),
            total_wall_time=float(data.get("total_wall_time", 0.0)),
            mean_acceptance_rate=float(data.get("mean_acceptance_rate", 0.0)),
            n_resampled=int(data.get("n_resampled", 0)),
            n_diverged=int(data.get("n_diverged", 0)),
            trace_path=data.get("trace_path"),
            include_jacobian=bool(data.get("include_jacobian", True)),
        )

    def format_report(self) -> str:
        """Format the run as a report."""
        lines = [
            "",
            "═" * 60,
            f"        SMC RUN: {self.model}",
            "═" * 60,
            "",
            f"Particles: {self.n_particles} | Iterations: {self.n_iterations} | Workers: {self.workers}",
            f"T: {self.temperature:g} | k_B: {self.k_b:g} | Seed: {self.seed}",
            f"Acceptance: {self.mean_acceptance_rate:.3f} | Resampled: {self.n_resampled} | Diverged: {self.n_diverged}",
        ]
        if not self.include_jacobian:
            lines.append("Potential built without the log-Jacobian term")
        lines.append("")
        errors = self.abs_error
        for i, name in enumerate(self.param_names[:8]):
            row = f"  {name:<12} {self.estimate[i]:.6f}"
            if errors is not None:
                row += f"   truth {self.truth[i]:.6f}   |err| {errors[i]:.2e}"
            lines.append(row)
        if len(self.param_names) > 8:
            lines.append(f"  ... {len(self.param_names) - 8} more")
        lines.append("")
        lines.append("═" * 60)
        return "\n".join(lines)

    def save(self, path: Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: Path) -> "RunSummary":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class BenchmarkRow:
    """Timing of one (N, W) configuration; speedup is t(W=1) / t(W) at the same N."""

    n_particles: int
    n_workers: int
    wall_time: float
    speedup: float = 1.0

    @property
    def time_per_particle(self) -> float:
        return self.wall_time / self.n_particles

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_particles": self.n_particles,
            "n_workers": self.n_workers,
            "wall_time": self.wall_time,
            "time_per_particle": self.time_per_particle,
            "speedup": self.speedup,
        }


BENCHMARK_COLUMNS: Sequence[str] = (
    "n_particles",
    "n_workers",
    "wall_time",
    "time_per_particle",
    "speedup",
)
