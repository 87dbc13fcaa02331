"""Pytest configuration for thermosmc tests."""

import sys
from pathlib import Path

# Ensure we import from the local package, not any other installed version
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

import numpy as np
import pytest


@pytest.fixture
def rng():
    """Seeded generator for tests that need randomness."""
    return np.random.default_rng(12345)


@pytest.fixture
def ct_data():
    """Coin toss data at the expected counts for p = (0.5, 0.75), N = 40."""
    from thermosmc.models import CoinTossData

    return CoinTossData(n_obs=40, heads=(20, 30))


@pytest.fixture
def ct_spec(ct_data):
    """Coin toss model with the true biases attached."""
    from thermosmc.models import ct_model

    return ct_model(ct_data, truth=(0.5, 0.75))


@pytest.fixture
def gaussian_1d():
    """V(q) = q^2 / 2 on R."""
    from thermosmc.models import gaussian_model

    return gaussian_model(dim=1)


@pytest.fixture
def gaussian_2d():
    from thermosmc.models import gaussian_model

    return gaussian_model(dim=2)


@pytest.fixture
def small_irt():
    """Small synthetic 2PL problem: 8 persons, 3 items."""
    from thermosmc.models import irt_draw_parameters, irt_generate, irt_layout, irt_model

    theta, a, b = irt_draw_parameters(8, 3, seed=3)
    data = irt_generate(theta, a, b, seed=4)
    return irt_model(data, truth=irt_layout(data).pack(theta, a, b))


@pytest.fixture
def flat_model():
    """Constant potential on R^2: zero gradient everywhere."""
    from thermosmc.models import ModelSpec, SupportBijection

    return ModelSpec(
        name="flat",
        param_names=("x0", "x1"),
        bijection=SupportBijection.real(2),
        log_density=lambda x: np.zeros(np.shape(x)[:-1]),
        grad_log_density=lambda x: np.zeros(np.shape(x)),
    )


@pytest.fixture
def run_config(tmp_path):
    """Small, fast coin toss run writing into tmp_path."""
    from thermosmc.core.config import RunConfig

    return RunConfig(
        n_particles=64,
        n_smc_iterations=3,
        n_leapfrog=20,
        step_size=0.05,
        seed=7,
        workers=1,
        out=tmp_path / "trace.csv",
    )
