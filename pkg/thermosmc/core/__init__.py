"""
Core Module
===========

Run configuration and error types shared by every thermosmc package.
"""

from .config import (
    WORKERS_ENV_VAR,
    CoinTossSettings,
    IrtSettings,
    ModelKind,
    ResamplingScheme,
    RunConfig,
    ToySettings,
    read_config_file,
)
from .errors import (
    ConfigError,
    IntegrationDivergedError,
    InvalidArgumentError,
    PropagationError,
    ThermoSMCError,
)

__all__ = [
    "WORKERS_ENV_VAR",
    "CoinTossSettings",
    "IrtSettings",
    "ModelKind",
    "ResamplingScheme",
    "RunConfig",
    "ToySettings",
    "read_config_file",
    "ConfigError",
    "IntegrationDivergedError",
    "InvalidArgumentError",
    "PropagationError",
    "ThermoSMCError",
]
