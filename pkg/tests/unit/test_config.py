"""
Tests for Run Configuration
===========================

Tests RunConfig defaults, validation, file loading and override precedence.
"""

from pathlib import Path

import pytest

from thermosmc.core.config import (
    ModelKind,
    ResamplingScheme,
    RunConfig,
    read_config_file,
)
from thermosmc.core.errors import ConfigError, ThermoSMCError


class TestDefaults:
    def test_reference_experiment(self):
        cfg = RunConfig()
        assert cfg.model is ModelKind.CT
        assert cfg.ct.p_true == (0.5, 0.75)
        assert cfg.ct.n_obs == 40
        assert cfg.n_particles == 1024
        assert cfg.n_smc_iterations == 10
        assert cfg.step_size == 0.01
        assert cfg.n_leapfrog == 100
        assert cfg.temperature == 1.0
        assert cfg.ess_threshold == 0.5
        assert cfg.resampling is ResamplingScheme.MULTINOMIAL
        assert cfg.invert_momentum is False
        assert cfg.jacobian is True

    def test_summary_path(self):
        assert RunConfig(out=Path("runs/ct.csv")).summary_path == Path("runs/ct.summary.json")

    def test_resolved_workers_capped_at_particles(self):
        assert RunConfig(n_particles=1).resolved_workers() == 1
        assert RunConfig(workers=3).resolved_workers() == 3


class TestValidation:
    """Tests for rejected configurations."""

    @pytest.mark.parametrize(
        "data,key",
        [
            ({"n_smc_iterations": 0}, "n_smc_iterations"),
            ({"n_particles": 0}, "n_particles"),
            ({"temperature": 0.0}, "temperature"),
            ({"ess_threshold": 1.5}, "ess_threshold"),
            ({"step_size": -0.1}, "step_size"),
            ({"model": "logistic"}, "model"),
            ({"irt": {"n_items": 0}}, "irt.n_items"),
        ],
    )
    def test_names_offending_key(self, data, key):
        with pytest.raises(ConfigError) as exc:
            RunConfig.from_mapping(data)
        assert exc.value.key == key
        assert str(exc.value).startswith(f"{key}:")

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as exc:
            RunConfig.from_mapping({"n_particle": 10})
        assert "unknown key" in str(exc.value)

    def test_unknown_nested_key(self):
        with pytest.raises(ConfigError) as exc:
            RunConfig.from_mapping({"ct": {"bias": 0.3}})
        assert exc.value.key == "ct.bias"

    def test_workers_above_particles(self):
        with pytest.raises(ConfigError):
            RunConfig.from_mapping({"n_particles": 4, "workers": 8})

    @pytest.mark.parametrize("ct", [{"p_true": [0.0, 0.5]}, {"heads": [1]}, {"heads": [50, 1]}])
    def test_coin_toss_settings(self, ct):
        with pytest.raises(ConfigError):
            RunConfig.from_mapping({"ct": ct})

    def test_config_error_is_library_error(self):
        assert issubclass(ConfigError, ThermoSMCError)


class TestFiles:
    """Tests for YAML and TOML loading."""

    def test_yaml(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("model: gaussian-toy\nn-particles: 32\ngaussian-toy:\n  dim: 4\n")
        cfg = RunConfig.load(path)
        assert cfg.model is ModelKind.GAUSSIAN_TOY
        assert cfg.n_particles == 32
        assert cfg.gaussian_toy.dim == 4

    def test_toml(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('model = "irt"\nseed = 9\n[irt]\nn_persons = 12\n')
        cfg = RunConfig.load(path)
        assert cfg.model is ModelKind.IRT
        assert cfg.seed == 9
        assert cfg.irt.n_persons == 12

    def test_pyproject_table(self, tmp_path):
        path = tmp_path / "pyproject.toml"
        path.write_text('[project]\nname = "x"\n\n[tool.thermosmc]\nn_particles = 256\n')
        assert RunConfig.load(path).n_particles == 256

    def test_empty_yaml_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert RunConfig.load(path) == RunConfig()

    def test_save_then_load(self, tmp_path):
        cfg = RunConfig(model=ModelKind.IRT, n_particles=128, seed=3, out=tmp_path / "t.csv")
        path = tmp_path / "saved.yaml"
        cfg.save(path)
        assert RunConfig.load(path) == cfg

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig.load(tmp_path / "nope.yaml")

    def test_unsupported_suffix(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{}")
        with pytest.raises(ConfigError):
            read_config_file(path)

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("model: [ct\n")
        with pytest.raises(ConfigError):
            read_config_file(path)

    def test_malformed_toml(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("model = \n")
        with pytest.raises(ConfigError):
            read_config_file(path)

    def test_non_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            read_config_file(path)


class TestMerged:
    """Tests for override precedence."""

    def test_none_values_are_skipped(self):
        cfg = RunConfig(seed=4).merged({"seed": None, "n_particles": 16})
        assert cfg.seed == 4
        assert cfg.n_particles == 16

    def test_nested_merge_keeps_siblings(self):
        cfg = RunConfig.from_mapping({"irt": {"n_persons": 12}}).merged({"irt": {"n_items": 3}})
        assert cfg.irt.n_persons == 12
        assert cfg.irt.n_items == 3

    def test_overrides_are_validated(self):
        with pytest.raises(ConfigError):
            RunConfig().merged({"n_leapfrog": 0})

    def test_original_untouched(self):
        base = RunConfig()
        base.merged({"n_particles": 8})
        assert base.n_particles == 1024
