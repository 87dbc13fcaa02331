"""
Trace CLI Commands
==================

Inspect trace files written by ``thermosmc run``.
"""

from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

app = typer.Typer(name="trace", help="Trace file inspection")
console = Console()


def _load(path: Path):
    from thermosmc.core.errors import InvalidArgumentError
    from thermosmc.telemetry.store import read_trace

    if not path.exists():
        console.print(f"[red]Error:[/red] trace file not found: {path}")
        raise typer.Exit(2)
    try:
        return read_trace(path)
    except InvalidArgumentError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(2)


@app.command()
def show(
    path: Path = typer.Argument(..., help="Trace CSV file"),
    limit: int = typer.Option(20, "--limit", "-l", help="Maximum rows to show"),
):
    """Show the per-iteration records of a trace."""
    param_names, records = _load(path)

    table = Table(title=f"Trace {path.name} ({len(records)} iterations)")
    table.add_column("Iter", justify="right", style="dim")
    table.add_column("e_min", justify="right")
    table.add_column("ESS", justify="right")
    table.add_column("Resampled", justify="center")
    table.add_column("Accept", justify="right")
    for name in param_names:
        table.add_column(name, justify="right", style="cyan")

    for r in records[:limit]:
        table.add_row(
            str(r.iteration),
            f"{r.e_min:.4f}",
            f"{r.ess:.1f}",
            "[yellow]yes[/yellow]" if r.resampled else "no",
            f"{r.acceptance_rate:.3f}",
            *(f"{v:.4f}" for v in r.mean_params),
        )
    console.print(table)
    if len(records) > limit:
        console.print(f"[dim]... and {len(records) - limit} more[/dim]")


@app.command()
def estimate(
    path: Path = typer.Argument(..., help="Trace CSV file"),
    temperature: float = typer.Option(1.0, "--temperature", "-T", help="Temperature for the e_min weights"),
    k_b: float = typer.Option(1.0, "--k-b", help="Boltzmann constant"),
    running: bool = typer.Option(False, "--running", "-r", help="Show the estimate after every iteration"),
):
    """Recompute the energy-weighted estimate from a trace."""
    from thermosmc.core.errors import InvalidArgumentError
    from thermosmc.sampling.smc import running_estimates, weighted_estimate

    param_names, records = _load(path)
    try:
        if running:
            rows = running_estimates(records, temperature, k_b)
        else:
            rows = [weighted_estimate(records, temperature, k_b)]
    except InvalidArgumentError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(2)

    table = Table(title=f"Weighted estimate (T={temperature:g})")
    table.add_column("After iter" if running else "", justify="right", style="dim")
    for name in param_names:
        table.add_column(name, justify="right", style="cyan")
    for i, row in enumerate(rows):
        label = str(records[i].iteration) if running else "estimate"
        table.add_row(label, *(f"{v:.6f}" for v in row))
    console.print(table)
