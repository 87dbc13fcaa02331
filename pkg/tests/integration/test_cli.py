"""
Integration Tests for the CLI
=============================

Tests the command-line surface end to end through typer's CliRunner:
- run: trace and summary files, configuration errors, determinism
- gradcheck: pass and injected failure
- bench: sweep table and CSV
- data / trace subcommands
"""

import json

import pytest
from typer.testing import CliRunner

from thermosmc.cli import app

FAST = ["-n", "64", "-i", "3", "-L", "20", "--step-size", "0.05", "-w", "1"]


@pytest.fixture
def runner():
    return CliRunner()


def run_cli(runner, *args, env=None):
    return runner.invoke(app, [str(a) for a in args], env=env)


class TestRunCommand:
    """Tests for `thermosmc run`."""

    def test_writes_trace_and_summary(self, runner, tmp_path):
        out = tmp_path / "trace.csv"
        result = run_cli(runner, "run", *FAST, "-o", out)
        assert result.exit_code == 0, result.output

        lines = out.read_text().splitlines()
        assert len(lines) == 4
        assert lines[0].startswith("iteration,e_min,ess,resampled,acceptance_rate,wall_ms,mean_p1,mean_p2")

        summary = json.loads((tmp_path / "trace.summary.json").read_text())
        assert summary["model"] == "ct"
        assert summary["n_iterations"] == 3
        assert summary["truth"] == [0.5, 0.75]
        assert len(summary["estimate"]) == 2

    def test_same_seed_gives_identical_traces(self, runner, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(runner, "run", *FAST, "-s", 5, "-o", first).exit_code == 0
        assert run_cli(runner, "run", *FAST, "-s", 5, "-o", second).exit_code == 0
        assert first.read_bytes() == second.read_bytes()

    def test_worker_count_does_not_change_trace(self, runner, tmp_path):
        base = ["run", "-n", "64", "-i", "3", "-L", "20", "--step-size", "0.05", "-s", "2"]
        one, two = tmp_path / "w1.csv", tmp_path / "w2.csv"
        assert run_cli(runner, *base, "-w", 1, "-o", one).exit_code == 0
        assert run_cli(runner, *base, "-w", 2, "-o", two).exit_code == 0
        assert one.read_bytes() == two.read_bytes()

    def test_workers_from_environment(self, runner, tmp_path):
        out = tmp_path / "trace.csv"
        args = ["run", "-n", "64", "-i", "2", "-L", "10", "-o", out]
        result = run_cli(runner, *args, env={"THERMOSMC_WORKERS": "2"})
        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "trace.summary.json").read_text())
        assert summary["workers"] == 2

    def test_zero_iterations_is_usage_error(self, runner, tmp_path):
        result = run_cli(runner, "run", "-i", "0", "-o", tmp_path / "t.csv")
        assert result.exit_code == 2
        assert "n_smc_iterations" in result.output
        assert not (tmp_path / "t.csv").exists()

    def test_more_workers_than_particles(self, runner, tmp_path):
        result = run_cli(runner, "run", "-n", "4", "-w", "8", "-o", tmp_path / "t.csv")
        assert result.exit_code == 2

    def test_unknown_config_key(self, runner, tmp_path):
        config = tmp_path / "run.yaml"
        config.write_text("n_particle: 10\n")
        result = run_cli(runner, "run", "-c", config, "-o", tmp_path / "t.csv")
        assert result.exit_code == 2
        assert "unknown key" in result.output

    def test_flags_override_config_file(self, runner, tmp_path):
        config = tmp_path / "run.yaml"
        config.write_text("n_particles: 32\nn_smc_iterations: 5\nn_leapfrog: 10\nworkers: 1\n")
        out = tmp_path / "t.csv"
        result = run_cli(runner, "run", "-c", config, "-i", "2", "-o", out)
        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "t.summary.json").read_text())
        assert summary["n_particles"] == 32
        assert summary["n_iterations"] == 2

    def test_no_jacobian_flag(self, runner, tmp_path):
        out = tmp_path / "t.csv"
        result = run_cli(runner, "run", *FAST, "--no-jacobian", "-o", out)
        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "t.summary.json").read_text())
        assert summary["include_jacobian"] is False

        config = tmp_path / "run.yaml"
        config.write_text("jacobian: false\n")
        result = run_cli(runner, "run", *FAST, "-c", config, "--jacobian", "-o", out)
        assert result.exit_code == 0, result.output
        assert json.loads((tmp_path / "t.summary.json").read_text())["include_jacobian"] is True

    def test_coin_toss_data_file(self, runner, tmp_path):
        data = tmp_path / "ct.csv"
        data.write_text("40,12,35\n")
        out = tmp_path / "t.csv"
        result = run_cli(runner, "run", *FAST, "--data", data, "-o", out)
        assert result.exit_code == 0, result.output

    def test_bad_data_file(self, runner, tmp_path):
        data = tmp_path / "ct.csv"
        data.write_text("40,41,2\n")
        result = run_cli(runner, "run", *FAST, "--data", data, "-o", tmp_path / "t.csv")
        assert result.exit_code == 2

    def test_irt_and_toy_models(self, runner, tmp_path):
        config = tmp_path / "irt.yaml"
        config.write_text("irt:\n  n_persons: 10\n  n_items: 3\n")
        irt_out = tmp_path / "irt.csv"
        result = run_cli(runner, "run", "-c", config, "-m", "irt", *FAST, "-o", irt_out)
        assert result.exit_code == 0, result.output
        assert "mean_theta_0" in irt_out.read_text().splitlines()[0]

        toy_out = tmp_path / "toy.csv"
        result = run_cli(runner, "run", "-m", "gaussian-toy", *FAST, "-o", toy_out)
        assert result.exit_code == 0, result.output
        assert toy_out.read_text().splitlines()[0].endswith("mean_x0,mean_x1")


class TestGradcheckCommand:
    """Tests for `thermosmc gradcheck`."""

    @pytest.mark.parametrize("model", ["ct", "gaussian-toy"])
    def test_passes(self, runner, model):
        result = run_cli(runner, "gradcheck", "--model", model)
        assert result.exit_code == 0, result.output
        assert "PASSED" in result.output

    def test_irt_passes(self, runner):
        result = run_cli(runner, "gradcheck", "--model", "irt", "--points", "10")
        assert result.exit_code == 0, result.output

    def test_injected_error_fails(self, runner):
        result = run_cli(runner, "gradcheck", "--model", "ct", "--perturb-gradient", "1e-3")
        assert result.exit_code == 1
        assert "FAILED" in result.output

    def test_unknown_model(self, runner):
        assert run_cli(runner, "gradcheck", "--model", "logistic").exit_code == 2


class TestBenchCommand:
    def test_sweep_table_and_csv(self, runner, tmp_path):
        out = tmp_path / "bench.csv"
        result = run_cli(
            runner, "bench", "-n", "32", "-n", "64", "-w", "1", "-w", "2", "-i", "1", "-o", out
        )
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[0] == "n_particles,n_workers,wall_time,time_per_particle,speedup"
        assert len(lines) == 5


class TestDataAndTraceCommands:
    """Tests for the data and trace subcommands."""

    def test_data_ct_expected_counts(self, runner, tmp_path):
        out = tmp_path / "ct.csv"
        result = run_cli(runner, "data", "ct", "-o", out)
        assert result.exit_code == 0, result.output
        assert out.read_text() == "40,20,30\n"

    def test_data_ct_seeded(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(runner, "data", "ct", "-s", "3", "-o", a)
        run_cli(runner, "data", "ct", "-s", "3", "-o", b)
        assert a.read_text() == b.read_text()

    def test_data_ct_bad_bias(self, runner, tmp_path):
        result = run_cli(runner, "data", "ct", "-p", "1.5", "-o", tmp_path / "ct.csv")
        assert result.exit_code == 2

    def test_data_irt_with_truth(self, runner, tmp_path):
        out, truth = tmp_path / "irt.csv", tmp_path / "truth.csv"
        result = run_cli(runner, "data", "irt", "-P", "10", "-I", "3", "-o", out, "--truth-out", truth)
        assert result.exit_code == 0, result.output
        assert out.read_text().splitlines()[0] == "10,3"
        assert len(out.read_text().splitlines()) == 11
        assert len(truth.read_text().splitlines()) == 16

    def test_generated_irt_data_runs(self, runner, tmp_path):
        data = tmp_path / "irt.csv"
        run_cli(runner, "data", "irt", "-P", "6", "-I", "2", "-o", data)
        result = run_cli(runner, "run", "-m", "irt", "--data", data, *FAST, "-o", tmp_path / "t.csv")
        assert result.exit_code == 0, result.output

    def test_trace_show_and_estimate(self, runner, tmp_path):
        out = tmp_path / "trace.csv"
        assert run_cli(runner, "run", *FAST, "-o", out).exit_code == 0

        shown = run_cli(runner, "trace", "show", out)
        assert shown.exit_code == 0, shown.output
        assert "p1" in shown.output

        est = run_cli(runner, "trace", "estimate", out, "--running")
        assert est.exit_code == 0, est.output

    def test_estimate_matches_summary(self, runner, tmp_path):
        from thermosmc.sampling.smc import weighted_estimate
        from thermosmc.telemetry.store import read_trace

        out = tmp_path / "trace.csv"
        assert run_cli(runner, "run", *FAST, "-o", out).exit_code == 0
        _, records = read_trace(out)
        summary = json.loads((tmp_path / "trace.summary.json").read_text())
        assert weighted_estimate(records, 1.0).tolist() == pytest.approx(summary["estimate"], rel=1e-15)

    def test_trace_missing_file(self, runner, tmp_path):
        assert run_cli(runner, "trace", "show", tmp_path / "none.csv").exit_code == 2
