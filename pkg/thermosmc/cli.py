"""
thermosmc CLI
=============

Command-line interface for SMC runs.

Usage:
    thermosmc run [--config FILE] [flags]      Run SMC, write the trace and a summary
    thermosmc gradcheck [--model NAME]         Check analytic gradients
    thermosmc bench -n 2048 -n 65538 -w 1 -w 2 Time a particle/worker sweep
    thermosmc data <command>                   Generate synthetic data
    thermosmc trace <command>                  Inspect trace files

Exit codes: 0 success, 1 check failure, 2 usage or configuration error.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from thermosmc.core.config import WORKERS_ENV_VAR, ModelKind, ResamplingScheme, RunConfig
from thermosmc.core.errors import ConfigError, InvalidArgumentError, PropagationError

# Import subcommand CLIs
from thermosmc.models.cli import app as data_app
from thermosmc.telemetry.cli import app as trace_app

app = typer.Typer(
    name="thermosmc",
    help="Sequential Monte Carlo with an HMC kernel at temperature T",
    add_completion=False,
)
console = Console()

# Add subcommands
app.add_typer(data_app, name="data", help="Synthetic data generation")
app.add_typer(trace_app, name="trace", help="Trace file inspection")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


@app.callback()
def main_callback(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Configure logging for every command."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _fail(message: str, code: int = EXIT_USAGE) -> NoReturn:
    console.print(f"[red]Error:[/red] {message}")
    raise typer.Exit(code)


def _resolve_config(config_path: Optional[Path], overrides: Dict[str, Any]) -> RunConfig:
    """Defaults < config file < environment/flags."""
    try:
        return RunConfig.load(config_path).merged(overrides)
    except ConfigError as e:
        _fail(f"invalid configuration: {e}")


def _build(config: RunConfig):
    from thermosmc.models.factory import build_model

    try:
        return build_model(config)
    except InvalidArgumentError as e:
        _fail(str(e))


@app.command()
def run(
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="YAML or TOML run configuration"),
    model: Optional[ModelKind] = typer.Option(None, "--model", "-m", help="Model to sample"),
    data: Optional[Path] = typer.Option(None, "--data", help="Observations file for the model"),
    particles: Optional[int] = typer.Option(None, "--particles", "-n", help="Number of particles N"),
    iterations: Optional[int] = typer.Option(None, "--iterations", "-i", help="Number of SMC iterations"),
    temperature: Optional[float] = typer.Option(None, "--temperature", "-T", help="Temperature T"),
    k_b: Optional[float] = typer.Option(None, "--k-b", help="Boltzmann constant"),
    step_size: Optional[float] = typer.Option(None, "--step-size", help="Leapfrog step size"),
    leapfrog: Optional[int] = typer.Option(None, "--leapfrog", "-L", help="Leapfrog steps per HMC call"),
    ess_threshold: Optional[float] = typer.Option(
        None, "--ess-threshold", help="Resample when ESS < threshold * N"
    ),
    resampling: Optional[ResamplingScheme] = typer.Option(None, "--resampling", help="Resampling scheme"),
    invert_momentum: Optional[bool] = typer.Option(
        None, "--invert-momentum/--no-invert-momentum", help="Negate momentum after accepted proposals"
    ),
    jacobian: Optional[bool] = typer.Option(
        None, "--jacobian/--no-jacobian", help="Include the log-Jacobian of the support map in the potential"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Root random seed"),
    workers: Optional[int] = typer.Option(
        None, "--workers", "-w", envvar=WORKERS_ENV_VAR, help="Worker threads (default: all cores)"
    ),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Trace CSV path"),
    record_wall_time: Optional[bool] = typer.Option(
        None, "--record-wall-time/--no-record-wall-time", help="Write measured wall_ms into the trace"
    ),
):
    """Run SMC and write the trace plus a JSON summary."""
    from thermosmc.sampling.sampler import SmcSampler
    from thermosmc.telemetry.store import CsvTraceSink

    config = _resolve_config(
        config_path,
        {
            "model": model,
            "data_path": data,
            "n_particles": particles,
            "n_smc_iterations": iterations,
            "temperature": temperature,
            "k_b": k_b,
            "step_size": step_size,
            "n_leapfrog": leapfrog,
            "ess_threshold": ess_threshold,
            "resampling": resampling,
            "invert_momentum": invert_momentum,
            "jacobian": jacobian,
            "seed": seed,
            "workers": workers,
            "out": out,
            "record_wall_time": record_wall_time,
        },
    )
    spec = _build(config)

    try:
        sampler = SmcSampler.from_config(config, spec)
        with CsvTraceSink(config.out, record_wall_time=config.record_wall_time) as sink:
            sampler.run(config.n_smc_iterations, sink)
    except InvalidArgumentError as e:
        _fail(str(e))
    except PropagationError as e:
        _fail(f"run aborted: {e}", EXIT_CHECK_FAILED)

    summary = sampler.summary(trace_path=str(config.out))
    summary.save(config.summary_path)
    _print_summary(summary, config)
    raise typer.Exit(EXIT_OK)


def _print_summary(summary, config: RunConfig) -> None:
    console.print(Panel.fit(
        f"[bold]{summary.model}[/bold]  N={summary.n_particles}  W={summary.workers}  "
        f"T={summary.temperature:g}  seed={summary.seed}\n"
        f"Iterations: {summary.n_iterations} | Resampled: {summary.n_resampled} | "
        f"Diverged: {summary.n_diverged}\n"
        f"Mean acceptance: {summary.mean_acceptance_rate:.3f} | "
        f"Wall time: {summary.total_wall_time:.2f}s",
        title="SMC run",
    ))

    table = Table(title="Weighted estimate")
    table.add_column("Parameter", style="cyan")
    table.add_column("Estimate", justify="right")
    if summary.truth is not None:
        table.add_column("Truth", justify="right")
        table.add_column("Abs error", justify="right")

    shown = list(zip(summary.param_names, summary.estimate))[:20]
    errors = summary.abs_error or []
    for i, (name, value) in enumerate(shown):
        if summary.truth is not None:
            table.add_row(name, f"{value:.6f}", f"{summary.truth[i]:.6f}", f"{errors[i]:.2e}")
        else:
            table.add_row(name, f"{value:.6f}")
    console.print(table)
    if len(summary.param_names) > len(shown):
        console.print(f"[dim]... and {len(summary.param_names) - len(shown)} more parameters[/dim]")
    console.print(f"Trace: {config.out}  Summary: {config.summary_path}")


@app.command()
def gradcheck(
    model: str = typer.Option("all", "--model", "-m", help="ct, irt, gaussian-toy or all"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Run configuration for model settings"),
    points: int = typer.Option(100, "--points", help="Number of seeded check points"),
    seed: int = typer.Option(0, "--seed", "-s", help="Seed for the check points"),
    perturb_gradient: float = typer.Option(0.0, "--perturb-gradient", hidden=True),
):
    """Compare analytic potential gradients with central differences."""
    from thermosmc.models.gradcheck import run_gradient_suite

    if model == "all":
        kinds = list(ModelKind)
    else:
        try:
            kinds = [ModelKind(model)]
        except ValueError:
            _fail(f"unknown model {model!r}; choose from {', '.join(k.value for k in ModelKind)} or all")
    if points < 1:
        _fail("--points must be positive")

    base = _resolve_config(config_path, {})
    passed = True
    for kind in kinds:
        config = base.merged({"model": kind})
        if kind != base.model:
            config = config.model_copy(update={"data_path": None})
        spec = _build(config)
        if perturb_gradient:
            spec = spec.with_gradient_offset(perturb_gradient)
        result = run_gradient_suite(spec, n_points=points, seed=seed)
        console.print(result.format_report())
        passed = passed and result.passed

    raise typer.Exit(EXIT_OK if passed else EXIT_CHECK_FAILED)


@app.command()
def bench(
    particles: List[int] = typer.Option([2048, 65538], "--particles", "-n", help="Particle counts N"),
    workers: List[int] = typer.Option([1, 2], "--workers", "-w", help="Worker counts W"),
    iterations: int = typer.Option(1, "--iterations", "-i", help="SMC iterations per timing"),
    repeats: int = typer.Option(1, "--repeats", "-r", help="Timings per configuration (median)"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Run configuration"),
    model: Optional[ModelKind] = typer.Option(None, "--model", "-m", help="Model to sample"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Also write the table as CSV"),
):
    """Time SMC iterations over a sweep of particle and worker counts."""
    from thermosmc.telemetry.bench import run_benchmark, write_benchmark_csv

    config = _resolve_config(config_path, {"model": model})
    spec = _build(config)
    try:
        rows = run_benchmark(config, particles, workers, iterations, repeats, model=spec)
    except InvalidArgumentError as e:
        _fail(str(e))

    table = Table(title=f"Benchmark: {spec.name}, {iterations} iteration(s), L={config.n_leapfrog}")
    table.add_column("N", justify="right", style="cyan")
    table.add_column("W", justify="right", style="cyan")
    table.add_column("Wall time (s)", justify="right")
    table.add_column("Time/particle (us)", justify="right")
    table.add_column("Speedup", justify="right")
    for row in rows:
        table.add_row(
            str(row.n_particles),
            str(row.n_workers),
            f"{row.wall_time:.4f}",
            f"{row.time_per_particle * 1e6:.2f}",
            f"{row.speedup:.2f}",
        )
    console.print(table)

    if out is not None:
        write_benchmark_csv(rows, out)
        console.print(f"[green]Wrote {out}[/green]")


def main():
    """Main entry point."""
    app()


if __name__ == "__main__":
    main()
