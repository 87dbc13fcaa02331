"""
Tests for Built-in Models
=========================

Tests the concrete models:
- Coin toss posterior, MAP and data generation
- IRT 2PL response probability, posterior and data generation
- Gaussian toy model
- Model factory
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import logit

from thermosmc.core.config import RunConfig
from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models import (
    CoinTossData,
    IrtData,
    IrtPriors,
    build_model,
    check_gradient,
    ct_expected_data,
    ct_generate,
    ct_map,
    ct_model,
    ct_posterior_mean,
    gaussian_model,
    irt_draw_parameters,
    irt_generate,
    irt_layout,
    irt_model,
    irt_response_prob,
    read_coin_toss,
    read_irt,
    run_gradient_suite,
    write_coin_toss,
    write_irt,
)


class TestCoinTossData:
    def test_rejects_heads_above_n(self):
        with pytest.raises(InvalidArgumentError):
            CoinTossData(n_obs=40, heads=(41, 2))

    def test_rejects_negative_heads(self):
        with pytest.raises(InvalidArgumentError):
            CoinTossData(n_obs=40, heads=(-1, 2))

    @pytest.mark.parametrize("n_obs", [0, -3])
    def test_rejects_no_observations(self, n_obs):
        with pytest.raises(InvalidArgumentError, match="n_obs"):
            CoinTossData(n_obs=n_obs, heads=(0, 0))

    def test_expected_counts(self):
        data = ct_expected_data((0.5, 0.75), 40)
        assert data.heads == (20, 30)
        assert data.n_obs == 40


class TestCoinTossModel:
    """Tests for the coin toss posterior."""

    def test_stationary_point(self, ct_data, ct_spec):
        """grad V vanishes at logit((K + 1) / (N + 2))."""
        q = logit(np.array(ct_posterior_mean(ct_data)))
        assert_allclose(ct_spec.grad_potential(q), 0.0, atol=1e-12)

    def test_support_mode_at_truth(self, ct_spec):
        """On the support the posterior mode is K / N."""
        grid = np.linspace(0.01, 0.99, 99)
        xs = np.stack([grid, grid], axis=-1)
        v = ct_spec.support_potential(xs)
        # The coordinates are independent, so each column's minimum sits at K / N.
        k = np.array([20, 30])
        n = 40
        per_coin = -(k * np.log(xs) + (n - k) * np.log1p(-xs))
        assert grid[np.argmin(per_coin[:, 0])] == pytest.approx(0.5)
        assert grid[np.argmin(per_coin[:, 1])] == pytest.approx(0.75)
        assert_allclose(v, per_coin.sum(axis=-1), rtol=1e-12)

    def test_truth_beats_other_point(self, ct_spec):
        assert ct_spec.support_potential(np.array([0.5, 0.75])) < ct_spec.support_potential(
            np.array([0.6, 0.6])
        )

    def test_zero_heads_monotone(self):
        """K = (0, 0): the support potential increases in p."""
        model = ct_model(CoinTossData(n_obs=40, heads=(0, 0)))
        p = np.linspace(0.01, 0.99, 50)
        v = model.support_potential(np.stack([p, p], axis=-1))
        assert np.all(np.diff(v) > 0)

    def test_gradient_at_seeded_points(self, ct_spec, rng):
        for q in rng.standard_normal((100, 2)):
            assert check_gradient(ct_spec, q) < 1e-5


class TestCoinTossOracles:
    @pytest.mark.parametrize(
        "heads,expected",
        [((20, 30), (0.5, 0.75)), ((0, 40), (0.0, 1.0)), ((10, 10), (0.25, 0.25))],
    )
    def test_map(self, heads, expected):
        assert ct_map(CoinTossData(n_obs=40, heads=heads)) == expected

    def test_posterior_mean(self, ct_data):
        assert ct_posterior_mean(ct_data) == pytest.approx((21 / 42, 31 / 42))


class TestCoinTossGenerate:
    def test_same_seed_same_data(self):
        assert ct_generate((0.5, 0.75), 40, seed=11) == ct_generate((0.5, 0.75), 40, seed=11)

    def test_counts_in_range(self):
        for seed in range(20):
            data = ct_generate((0.5, 0.75), 40, seed=seed)
            assert all(0 <= k <= 40 for k in data.heads)

    def test_mean_counts(self):
        heads = np.array([ct_generate((0.5, 0.75), 40, seed=s).heads for s in range(400)])
        assert_allclose(heads.mean(axis=0), [20.0, 30.0], atol=0.6)

    def test_degenerate_coin(self):
        assert ct_generate((1 - 1e-12, 1 - 1e-12), 40, seed=0).heads == (40, 40)

    @pytest.mark.parametrize("p", [(0.0, 0.5), (0.5, 1.0), (1.5, 0.5)])
    def test_rejects_bias_outside_open_interval(self, p):
        with pytest.raises(InvalidArgumentError):
            ct_generate(p, 40, seed=0)


class TestIrtResponseProb:
    """Tests for the 2PL item response function."""

    def test_symmetry_point(self):
        assert irt_response_prob(0.7, 2.3, 0.7) == pytest.approx(0.5)

    def test_ln3(self):
        assert irt_response_prob(math.log(3.0), 1.0, 0.0) == pytest.approx(0.75)

    def test_zero_discrimination(self):
        assert_allclose(irt_response_prob(np.array([-3.0, 0.0, 5.0]), 0.0, 1.0), 0.5)

    def test_reflection(self):
        theta, a, b = 0.4, 1.7, -0.9
        total = irt_response_prob(theta, a, b) + irt_response_prob(-theta, a, -b)
        assert total == pytest.approx(1.0)


class TestIrtModel:
    """Tests for the 2PL posterior."""

    def test_dimension_and_layout(self, small_irt):
        assert small_irt.dim == 8 + 2 * 3
        assert small_irt.param_names[0] == "theta_0"
        assert small_irt.param_names[8] == "a_0"
        assert small_irt.param_names[11] == "b_0"

    def test_discrimination_is_positive(self, small_irt, rng):
        x = small_irt.to_support(rng.normal(scale=3.0, size=(50, small_irt.dim)))
        layout_a = slice(8, 11)
        assert np.all(x[:, layout_a] > 0)

    def test_gradient_at_seeded_points(self, small_irt, rng):
        for q in rng.standard_normal((10, small_irt.dim)):
            assert check_gradient(small_irt, q) < 1e-5

    def test_default_size_gradient(self, rng):
        theta, a, b = irt_draw_parameters(seed=5)
        model = irt_model(irt_generate(theta, a, b, seed=6))
        assert model.dim == 100 + 2 * 20
        for q in rng.standard_normal((3, model.dim)):
            assert check_gradient(model, q) < 1e-5

    def test_large_log_discrimination_stays_finite(self, small_irt):
        """Far out in log a the potential and its gradient are finite numbers."""
        for s in (800.0, 1e4):
            q = np.zeros(small_irt.dim)
            q[8:11] = s
            assert np.isfinite(small_irt.potential(q))
            grad = small_irt.grad_potential(q)
            assert not np.any(np.isnan(grad))
            assert np.all(np.isfinite(grad))

    def test_correct_answer_prefers_higher_ability(self):
        """One correct response: V falls as a (theta - b) grows, with negligible prior cost."""
        wide = IrtPriors(theta_scale=1e6, b_scale=1e6, log_a_scale=1e6)
        model = irt_model(IrtData(np.array([[1]])), priors=wide)
        energies = [model.potential(np.array([t, 0.0, 0.0])) for t in (0.0, 0.5, 1.0, 2.0)]
        assert all(e1 > e2 for e1, e2 in zip(energies, energies[1:]))

    def test_rejects_empty_matrix(self):
        with pytest.raises(InvalidArgumentError):
            IrtData(np.zeros((0, 4), dtype=int))

    def test_rejects_non_binary(self):
        with pytest.raises(InvalidArgumentError):
            IrtData(np.array([[0, 2]]))

    def test_truth_length_checked(self):
        with pytest.raises(InvalidArgumentError):
            irt_model(IrtData(np.array([[1, 0]])), truth=[0.0, 1.0])


class TestIrtGenerate:
    def test_same_seed_same_matrix(self):
        theta, a, b = irt_draw_parameters(20, 5, seed=1)
        first = irt_generate(theta, a, b, seed=9).responses
        second = irt_generate(theta, a, b, seed=9).responses
        assert np.array_equal(first, second)

    def test_symmetry_rate(self):
        """theta_p = b_i everywhere: about half the answers are correct."""
        theta = np.zeros(400)
        data = irt_generate(theta, np.ones(25), np.zeros(25), seed=2)
        assert data.responses.mean() == pytest.approx(0.5, abs=0.02)

    def test_saturation(self):
        data = irt_generate(np.full(10, 1.0), np.full(4, 1e3), np.zeros(4), seed=0)
        assert np.all(data.responses == 1)

    def test_rejects_non_positive_discrimination(self):
        with pytest.raises(InvalidArgumentError):
            irt_generate([0.0], [0.0], [0.0], seed=0)

    def test_layout_pack(self):
        theta, a, b = irt_draw_parameters(4, 2, seed=0)
        data = irt_generate(theta, a, b, seed=1)
        packed = irt_layout(data).pack(theta, a, b)
        assert_allclose(packed[irt_layout(data).a], a)


class TestGaussianModel:
    def test_value_and_gradient(self):
        model = gaussian_model(dim=2, scale=2.0)
        q = np.array([2.0, 0.0])
        assert model.potential(q) == pytest.approx(0.5)
        assert_allclose(model.grad_potential(q), [0.5, 0.0])

    def test_rejects_bad_scale(self):
        with pytest.raises(InvalidArgumentError):
            gaussian_model(dim=1, scale=0.0)


class TestBuildModel:
    """Tests for RunConfig -> ModelSpec."""

    def test_default_is_expected_coin_toss(self):
        model = build_model(RunConfig())
        assert model.name == "ct"
        assert model.metadata["heads"] == [20, 30]
        assert_allclose(model.truth, [0.5, 0.75])

    def test_sampled_coin_toss_follows_seed(self):
        cfg = RunConfig.from_mapping({"ct": {"sample_data": True}, "seed": 3})
        assert build_model(cfg).metadata["heads"] == list(ct_generate((0.5, 0.75), 40, seed=3).heads)

    def test_explicit_heads(self):
        cfg = RunConfig.from_mapping({"ct": {"heads": [12, 35]}})
        assert build_model(cfg).metadata["heads"] == [12, 35]

    def test_irt_synthetic_has_truth(self):
        cfg = RunConfig.from_mapping({"model": "irt", "irt": {"n_persons": 6, "n_items": 2}})
        model = build_model(cfg)
        assert model.dim == 10
        assert model.truth is not None and model.truth.size == 10

    def test_gaussian_toy(self):
        cfg = RunConfig.from_mapping({"model": "gaussian-toy", "gaussian_toy": {"dim": 3}})
        assert build_model(cfg).dim == 3

    def test_jacobian_switched_off(self):
        cfg = RunConfig.from_mapping({"jacobian": False})
        model = build_model(cfg)
        assert model.include_jacobian is False
        assert build_model(RunConfig()).include_jacobian is True


class TestDataFiles:
    """Tests for the plain-text observation formats."""

    def test_coin_toss_file(self, tmp_path, ct_data):
        path = tmp_path / "ct.csv"
        write_coin_toss(ct_data, path)
        assert path.read_text() == "40,20,30\n"
        assert read_coin_toss(path) == ct_data

    def test_coin_toss_skips_comments(self, tmp_path):
        path = tmp_path / "ct.csv"
        path.write_text("# N,K1,K2\n\n40, 12, 35\n")
        assert read_coin_toss(path).heads == (12, 35)

    @pytest.mark.parametrize("text", ["", "40,20,30\n40,20,30\n", "40\n", "forty,1,2\n", "40,41,2\n"])
    def test_bad_coin_toss_file(self, tmp_path, text):
        path = tmp_path / "ct.csv"
        path.write_text(text)
        with pytest.raises(InvalidArgumentError):
            read_coin_toss(path)

    def test_irt_file(self, tmp_path):
        data = IrtData(np.array([[1, 0, 1], [0, 0, 1]]))
        path = tmp_path / "irt.csv"
        write_irt(data, path)
        assert path.read_text().splitlines()[0] == "2,3"
        assert np.array_equal(read_irt(path).responses, data.responses)

    @pytest.mark.parametrize(
        "text",
        ["", "2,3\n1,0,1\n", "1,3\n1,0\n", "1,2\n1,2\n", "1\n1\n"],
    )
    def test_bad_irt_file(self, tmp_path, text):
        path = tmp_path / "irt.csv"
        path.write_text(text)
        with pytest.raises(InvalidArgumentError):
            read_irt(path)


class TestGradientSuite:
    @pytest.mark.parametrize("kind", ["ct", "irt", "gaussian-toy"])
    def test_builtin_models_pass(self, kind):
        cfg = RunConfig.from_mapping({"model": kind, "irt": {"n_persons": 10, "n_items": 4}})
        result = run_gradient_suite(build_model(cfg), n_points=20, seed=0)
        assert result.passed
        assert result.n_failed == 0
        assert len(result.errors) == 20

    def test_offset_fails(self, ct_spec):
        result = run_gradient_suite(ct_spec.with_gradient_offset(1e-3), n_points=10)
        assert not result.passed
        assert result.max_error > 1e-5
        assert "FAILED" in result.format_report()

    def test_report_and_dict(self, ct_spec):
        result = run_gradient_suite(ct_spec, n_points=5, seed=3)
        assert "GRADIENT CHECK: ct" in result.format_report()
        assert result.to_dict()["passed"] is True
        assert len(result.worst_point) == 2

    def test_rejects_no_points(self, ct_spec):
        with pytest.raises(InvalidArgumentError):
            run_gradient_suite(ct_spec, n_points=0)
