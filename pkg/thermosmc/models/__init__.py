"""
Models Module
=============

Posterior models expressed as potentials on unconstrained space.

Built-in models:
- ct: coin toss, uniform prior on the unit cube
- irt: two-parameter logistic item response model
- gaussian-toy: isotropic Gaussian for kernel checks

Usage:
    from thermosmc.models import ct_expected_data, ct_model, potential

    model = ct_model(ct_expected_data((0.5, 0.75)))
    v = potential(model, [0.0, 0.0])
"""

from .base import (
    GRADIENT_TOLERANCE,
    ModelSpec,
    SupportBijection,
    central_difference_gradient,
    check_gradient,
    potential,
    to_support,
)
from .coin_toss import (
    CoinTossData,
    ct_expected_data,
    ct_generate,
    ct_map,
    ct_model,
    ct_posterior_mean,
)
from .data_io import read_coin_toss, read_irt, write_coin_toss, write_irt
from .factory import build_model
from .gradcheck import GradientCheckResult, run_gradient_suite
from .irt import (
    IrtData,
    IrtLayout,
    IrtPriors,
    irt_draw_parameters,
    irt_generate,
    irt_layout,
    irt_model,
    irt_response_prob,
)
from .toy import gaussian_model

__all__ = [
    # Base
    "GRADIENT_TOLERANCE",
    "ModelSpec",
    "SupportBijection",
    "central_difference_gradient",
    "check_gradient",
    "potential",
    "to_support",
    # Coin toss
    "CoinTossData",
    "ct_expected_data",
    "ct_generate",
    "ct_map",
    "ct_model",
    "ct_posterior_mean",
    # IRT
    "IrtData",
    "IrtLayout",
    "IrtPriors",
    "irt_draw_parameters",
    "irt_generate",
    "irt_layout",
    "irt_model",
    "irt_response_prob",
    # Toy
    "gaussian_model",
    # Data files
    "read_coin_toss",
    "read_irt",
    "write_coin_toss",
    "write_irt",
    # Factory / checks
    "build_model",
    "GradientCheckResult",
    "run_gradient_suite",
]
