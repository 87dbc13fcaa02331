"""
Data CLI Commands
=================

Synthetic data generators:
- data ct:  coin toss record N,K1,K2
- data irt: 2PL response matrix drawn from the priors
"""

from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
from rich.table import Table

app = typer.Typer(name="data", help="Synthetic data generation")
console = Console()


@app.command("ct")
def coin_toss(
    out: Path = typer.Option(Path("ct.csv"), "--out", "-o", help="Output data file"),
    p_true: Optional[List[float]] = typer.Option(
        None, "--p-true", "-p", help="True bias of a coin (repeat per coin); default 0.5 0.75"
    ),
    n_obs: int = typer.Option(40, "--n-obs", "-n", help="Tosses per coin"),
    seed: Optional[int] = typer.Option(
        None, "--seed", "-s", help="Draw binomial counts with this seed instead of expected counts"
    ),
):
    """Write coin toss observations."""
    from thermosmc.core.errors import InvalidArgumentError
    from thermosmc.models.coin_toss import DEFAULT_P_TRUE, ct_expected_data, ct_generate
    from thermosmc.models.data_io import write_coin_toss

    biases = tuple(p_true) if p_true else DEFAULT_P_TRUE
    try:
        if seed is None:
            data = ct_expected_data(biases, n_obs)
        else:
            data = ct_generate(biases, n_obs, seed=seed)
    except InvalidArgumentError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(2)

    write_coin_toss(data, out)
    table = Table(title=f"Coin toss data ({out})")
    table.add_column("Coin", style="cyan")
    table.add_column("p_true", justify="right")
    table.add_column("Heads", justify="right")
    table.add_column("N", justify="right")
    for i, (p, k) in enumerate(zip(biases, data.heads), start=1):
        table.add_row(f"p{i}", f"{p:g}", str(k), str(data.n_obs))
    console.print(table)


@app.command("irt")
def item_response(
    out: Path = typer.Option(Path("irt.csv"), "--out", "-o", help="Output data file"),
    persons: int = typer.Option(100, "--persons", "-P", help="Number of persons"),
    items: int = typer.Option(20, "--items", "-I", help="Number of items"),
    seed: int = typer.Option(0, "--seed", "-s", help="Seed for parameters and responses"),
    truth_out: Optional[Path] = typer.Option(
        None, "--truth-out", help="Also write the drawn (theta, a, b) as name,value rows"
    ),
):
    """Write a 2PL response matrix with parameters drawn from the priors."""
    from thermosmc.core.errors import InvalidArgumentError
    from thermosmc.models.data_io import write_irt
    from thermosmc.models.irt import irt_draw_parameters, irt_generate, irt_layout

    try:
        theta, a, b = irt_draw_parameters(persons, items, seed=seed)
    except InvalidArgumentError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(2)
    data = irt_generate(theta, a, b, seed=seed + 1)
    write_irt(data, out)

    if truth_out is not None:
        layout = irt_layout(data)
        values = layout.pack(theta, a, b)
        lines = [f"{name},{value:.17g}" for name, value in zip(layout.param_names(), values)]
        truth_out.write_text("\n".join(lines) + "\n")

    console.print(
        f"[green]Wrote {data.n_persons} x {data.n_items} responses to {out}[/green] "
        f"(proportion correct {data.responses.mean():.3f})"
    )
