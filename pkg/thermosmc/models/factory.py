"""
Model Factory
=============

Builds the ModelSpec selected by a RunConfig, including its observations.
"""

from __future__ import annotations

import logging

from thermosmc.core.config import ModelKind, RunConfig
from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.base import ModelSpec
from thermosmc.models.coin_toss import (
    CoinTossData,
    ct_expected_data,
    ct_generate,
    ct_model,
)
from thermosmc.models.data_io import read_coin_toss, read_irt
from thermosmc.models.irt import (
    IrtPriors,
    irt_draw_parameters,
    irt_generate,
    irt_layout,
    irt_model,
)
from thermosmc.models.toy import gaussian_model

logger = logging.getLogger(__name__)


def _coin_toss(config: RunConfig) -> ModelSpec:
    settings = config.ct
    if config.data_path is not None:
        data = read_coin_toss(config.data_path)
        logger.info("Loaded coin toss data from %s: N=%d K=%s", config.data_path, data.n_obs, data.heads)
        truth = settings.p_true if len(settings.p_true) == data.n_coins else None
        return ct_model(data, truth=truth)

    if settings.heads is not None:
        data = CoinTossData(n_obs=settings.n_obs, heads=settings.heads)
    elif settings.sample_data:
        data = ct_generate(settings.p_true, settings.n_obs, seed=config.seed)
    else:
        data = ct_expected_data(settings.p_true, settings.n_obs)
    logger.debug("Coin toss data: N=%d K=%s", data.n_obs, data.heads)
    return ct_model(data, truth=settings.p_true)


def irt_priors(config: RunConfig) -> IrtPriors:
    settings = config.irt
    return IrtPriors(
        theta_scale=settings.theta_scale,
        b_scale=settings.b_scale,
        log_a_mean=settings.log_a_mean,
        log_a_scale=settings.log_a_scale,
    )


def _irt(config: RunConfig) -> ModelSpec:
    priors = irt_priors(config)
    if config.data_path is not None:
        data = read_irt(config.data_path)
        logger.info(
            "Loaded IRT responses from %s: %d persons x %d items",
            config.data_path,
            data.n_persons,
            data.n_items,
        )
        return irt_model(data, priors)

    settings = config.irt
    theta, a, b = irt_draw_parameters(settings.n_persons, settings.n_items, priors, seed=config.seed)
    data = irt_generate(theta, a, b, seed=config.seed + 1)
    truth = irt_layout(data).pack(theta, a, b)
    return irt_model(data, priors, truth=truth)


def _select(config: RunConfig) -> ModelSpec:
    kind = ModelKind(config.model)
    if kind is ModelKind.CT:
        return _coin_toss(config)
    if kind is ModelKind.IRT:
        return _irt(config)
    if kind is ModelKind.GAUSSIAN_TOY:
        if config.data_path is not None:
            raise InvalidArgumentError("the gaussian-toy model takes no data file")
        return gaussian_model(config.gaussian_toy.dim, config.gaussian_toy.scale)
    raise InvalidArgumentError(f"unknown model {config.model!r}")


def build_model(config: RunConfig) -> ModelSpec:
    """Model named by ``config.model`` with its data loaded or synthesised."""
    model = _select(config)
    if not config.jacobian:
        logger.info("Potential for %s built without the log-Jacobian term", model.name)
        model = model.without_jacobian()
    return model
