"""
Run Configuration
=================

Configuration for a sampling run.

Sources, lowest to highest precedence:
- field defaults
- a config file (.yaml/.yml, .toml, or pyproject.toml [tool.thermosmc])
- THERMOSMC_WORKERS environment variable (read by the CLI, only when --workers is absent)
- command-line flags

Unknown keys are errors at every nesting level.
"""

from __future__ import annotations

import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from thermosmc.core.errors import ConfigError

WORKERS_ENV_VAR = "THERMOSMC_WORKERS"
PYPROJECT_TABLE = "thermosmc"


class ModelKind(str, Enum):
    """Selectable models."""

    CT = "ct"
    IRT = "irt"
    GAUSSIAN_TOY = "gaussian-toy"


class ResamplingScheme(str, Enum):
    """How duplicates are drawn within the surviving subset."""

    MULTINOMIAL = "multinomial"
    SYSTEMATIC = "systematic"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, use_enum_values=False)


class CoinTossSettings(_Strict):
    """Coin toss data: expected counts by default, drawn from the run seed on request."""

    p_true: Tuple[float, ...] = (0.5, 0.75)
    n_obs: int = Field(40, ge=1)
    heads: Optional[Tuple[int, ...]] = None
    sample_data: bool = False

    @model_validator(mode="after")
    def _check(self) -> "CoinTossSettings":
        if not self.p_true or any(not 0.0 < p < 1.0 for p in self.p_true):
            raise ValueError("p_true entries must lie in (0, 1)")
        if self.heads is not None:
            if len(self.heads) != len(self.p_true):
                raise ValueError("heads must have one entry per coin")
            if any(not 0 <= k <= self.n_obs for k in self.heads):
                raise ValueError("heads must lie in [0, n_obs]")
        return self


class IrtSettings(_Strict):
    n_persons: int = Field(100, ge=1)
    n_items: int = Field(20, ge=1)
    theta_scale: float = Field(1.0, gt=0)
    b_scale: float = Field(1.0, gt=0)
    log_a_mean: float = 0.0
    log_a_scale: float = Field(1.0, gt=0)


class ToySettings(_Strict):
    dim: int = Field(2, ge=1)
    scale: float = Field(1.0, gt=0)


class RunConfig(_Strict):
    """All knobs of one SMC run."""

    model: ModelKind = ModelKind.CT
    ct: CoinTossSettings = CoinTossSettings()
    irt: IrtSettings = IrtSettings()
    gaussian_toy: ToySettings = ToySettings()
    data_path: Optional[Path] = None
    jacobian: bool = True

    n_particles: int = Field(1024, ge=1)
    n_smc_iterations: int = Field(10, ge=1)
    temperature: float = Field(1.0, gt=0)
    k_b: float = Field(1.0, gt=0)

    step_size: float = Field(0.01, gt=0)
    n_leapfrog: int = Field(100, ge=1)
    mass: float = Field(1.0, gt=0)
    hmc_steps_per_iteration: int = Field(1, ge=1)
    invert_momentum: bool = False

    ess_threshold: float = Field(0.5, gt=0, le=1)
    resampling: ResamplingScheme = ResamplingScheme.MULTINOMIAL

    seed: int = Field(0, ge=0)
    workers: Optional[int] = Field(None, ge=1)
    out: Path = Path("trace.csv")
    record_wall_time: bool = False

    @model_validator(mode="after")
    def _check_workers(self) -> "RunConfig":
        if self.workers is not None and self.workers > self.n_particles:
            raise ValueError(
                f"workers ({self.workers}) cannot exceed n_particles ({self.n_particles})"
            )
        return self

    @property
    def summary_path(self) -> Path:
        return self.out.with_name(self.out.stem + ".summary.json")

    def resolved_workers(self) -> int:
        """Configured worker count, else hardware parallelism capped at n_particles."""
        if self.workers is not None:
            return self.workers
        return max(1, min(os.cpu_count() or 1, self.n_particles))

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RunConfig":
        try:
            return cls.model_validate(dict(data))
        except ValidationError as e:
            raise _config_error(e) from e

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> "RunConfig":
        """Load from a config file; defaults when no path is given."""
        if config_path is None:
            return cls()
        return cls.from_mapping(read_config_file(Path(config_path)))

    def merged(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """Copy with ``overrides`` applied; entries whose value is None are skipped."""
        data = self.model_dump(mode="python")
        for key, value in overrides.items():
            if value is None:
                continue
            if isinstance(value, Mapping) and isinstance(data.get(key), dict):
                data[key] = {**data[key], **value}
            else:
                data[key] = value
        return type(self).from_mapping(data)

    def save(self, path: Path) -> None:
        """Save as YAML."""
        with open(path, "w") as f:
            yaml.safe_dump(self.model_dump(mode="json"), f, default_flow_style=False, sort_keys=False)


def _config_error(error: ValidationError) -> ConfigError:
    first = error.errors()[0]
    key = ".".join(str(part) for part in first["loc"]) or None
    message = first["msg"]
    if first["type"] == "extra_forbidden":
        message = "unknown key"
    return ConfigError(message, key=key)


def read_config_file(path: Path) -> Dict[str, Any]:
    """Read a YAML or TOML config file into a plain mapping."""
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        if path.suffix in (".yaml", ".yml"):
            with open(path) as f:
                data = yaml.safe_load(f) or {}
        elif path.suffix == ".toml":
            import toml

            data = toml.load(path)
            if path.name == "pyproject.toml":
                data = data.get("tool", {}).get(PYPROJECT_TABLE, {})
        else:
            raise ConfigError(f"unsupported config format: {path.suffix or path.name}")
    except (yaml.YAMLError, ValueError) as e:
        raise ConfigError(f"could not parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a mapping of keys to values")
    return _normalise_keys(data)


def _normalise_keys(data: Dict[str, Any]) -> Dict[str, Any]:
    """Accept dashed keys (gaussian-toy) as well as underscored ones."""
    out: Dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, dict):
            value = _normalise_keys(value)
        out[str(key).replace("-", "_")] = value
    return out
