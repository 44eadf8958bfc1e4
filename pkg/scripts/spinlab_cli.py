#!/usr/bin/env python3
# coding: UTF-8
"""
CLI for building representations, dumping Clifford maps, solving the
upper half-space Killing equation and running the verification suites.
"""

import functools
import sys
from pathlib import Path

import click
import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table, box

# Add parent directory to PYTHONPATH
ROOT_DIR = Path(__file__).resolve().parents[1]
sys.path.append(str(ROOT_DIR))
from core.config import settings
from core.exceptions import EXIT_CONFIG_ERROR, EXIT_FAILURE, EXIT_OK, SpinLabException
from core.logger import setup_logging
from models.common import BASIS_ALIASES, BasisConvention, SpinLabel
from models.report import MatrixSetDump, OutputFormat, Suite, SuiteConfig
from services.clifford_service import clifford_service
from services.irrep_service import irrep_service
from services.report_service import report_service
from services.suite_service import suite_service

console = Console(stderr=True)

BASIS_CHOICE = click.Choice([b.value for b in BasisConvention] + list(BASIS_ALIASES))


def handle_errors(command):
    """Map SpinLab and validation errors to their exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SpinLabException as e:
            console.print(f"[red]Error:[/red] {e.detail}")
            sys.exit(e.exit_code)
        except ValidationError as e:
            console.print(f"[red]Invalid configuration:[/red] {e}")
            sys.exit(EXIT_CONFIG_ERROR)

    return wrapper


def _format_entry(value: complex) -> str:
    if abs(value) < 1e-14:
        return "0"
    re, im = value.real, value.imag
    if abs(im) < 1e-14:
        return f"{re:.6g}"
    if abs(re) < 1e-14:
        return f"{im:.6g}i"
    return f"{re:.6g}{im:+.6g}i"


def _matrix_table(title: str, m: np.ndarray) -> Table:
    table = Table(title=title, box=box.SQUARE, show_header=False)
    for _ in range(m.shape[1]):
        table.add_column(justify="right")
    for row in m:
        table.add_row(*(_format_entry(complex(v)) for v in row))
    return table


def _print_dump(dump: MatrixSetDump) -> None:
    out = Console()
    for matrix in dump.matrices:
        m = np.array(matrix.real) + 1j * np.array(matrix.imag)
        out.print(_matrix_table(f"{matrix.name}  (twoS={dump.two_s}, {dump.basis.value})", m))


@click.group()
@click.option("--log-level",
              default=settings.LOG_LEVEL,
              type=click.Choice(["critical", "error", "warning", "info", "debug"],
                                case_sensitive=False),
              help="Logging level")
def cli(log_level: str) -> None:
    """Higher spin representation and Killing spinor toolkit."""
    setup_logging(log_level)


@cli.command("verify")
@click.option("--config",
              "config_file",
              type=click.Path(path_type=Path),
              default=None,
              help="TOML file with run settings")
@click.option("--jmax", type=int, default=None, help="Largest spin index j")
@click.option("--tol", "tolerance", type=float, default=None, help="Field tolerance")
@click.option("--samples", type=int, default=None, help="Random points per check")
@click.option("--seed", type=int, default=None, help="Random seed")
@click.option("--basis", type=BASIS_CHOICE, default=None, help="Basis convention")
@click.option("--suite",
              "suites",
              type=click.Choice([s.value for s in Suite]),
              multiple=True,
              help="Suite to run (repeatable); all suites by default")
@click.option("--format",
              "fmt",
              type=click.Choice([f.value for f in OutputFormat]),
              default=OutputFormat.JSON.value,
              help="Report format")
@click.option("--out",
              type=click.Path(path_type=Path),
              default=None,
              help="Write the report here instead of stdout")
@handle_errors
def verify(config_file: Path | None, jmax: int | None, tolerance: float | None,
           samples: int | None, seed: int | None, basis: str | None,
           suites: tuple[str, ...], fmt: str, out: Path | None) -> None:
    """Run the verification suites and emit a report."""
    config = SuiteConfig.load(config_file,
                              jmax=jmax,
                              tolerance=tolerance,
                              samples=samples,
                              seed=seed,
                              basis=basis,
                              suites=list(suites) or None)
    report = suite_service.run_suite(config)
    text = report_service.emit(report, OutputFormat(fmt), out)
    if out is None:
        click.echo(text)
    summary = report.summary
    colour = "green" if report.all_passed else "red"
    console.print(f"[{colour}]{summary.passed}/{summary.total} checks passed[/{colour}] "
                  f"(max residual {summary.max_residual:.3e})")
    sys.exit(EXIT_OK if report.all_passed else EXIT_FAILURE)


@cli.command("solve-h3")
@click.option("--j", "j", type=int, required=True, help="Spin index j (twoS = 2j+1)")
@click.option("--mu", default="+i/2", show_default=True, help="Killing number +i/2 or -i/2")
@click.option("--basis",
              type=BASIS_CHOICE,
              default=BasisConvention.TRIANGULAR.value,
              show_default=True,
              help="Basis convention")
@click.option("--format",
              "fmt",
              type=click.Choice(["table", "json", "latex"]),
              default="table",
              show_default=True)
@handle_errors
def solve_h3(j: int, mu: str, basis: str, fmt: str) -> None:
    """Print the closed-form Killing spinors on the upper half-space."""
    if j < 0:
        raise click.BadParameter("j must be non-negative", param_hint="--j")
    table = report_service.solve_h3(2 * j + 1, mu, BasisConvention(basis))
    if fmt == "json":
        click.echo(table.model_dump_json(indent=2))
        return
    if fmt == "latex":
        click.echo(report_service.h3_latex(table))
        return

    entries = report_service.h3_entries(table)
    view = Table(title=f"Killing spinors on H3, twoS={table.two_s}, mu={table.mu}",
                 box=box.SQUARE)
    view.add_column("weight", justify="right")
    for b in range(table.two_s + 1):
        view.add_column(f"C{b + 1}")
    for a, row in enumerate(entries):
        view.add_row(str(table.two_s - 2 * a), *row)
    Console().print(view)


@cli.command("reps")
@click.option("--twos", "two_s", type=int, required=True, help="Doubled highest weight")
@click.option("--basis", type=BASIS_CHOICE, default=BasisConvention.UNITARY.value)
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@handle_errors
def reps(two_s: int, basis: str, fmt: str) -> None:
    """Dump H, E, F and the sigma matrices of one irreducible representation."""
    rep = irrep_service.build_irrep(SpinLabel(two_s=two_s), BasisConvention(basis))
    dump = report_service.dump_irrep(rep)
    if fmt == "json":
        click.echo(dump.model_dump_json(by_alias=True, indent=2))
    else:
        _print_dump(dump)


@cli.command("clifford")
@click.option("--twos", "two_s", type=int, required=True, help="Doubled highest weight")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@handle_errors
def clifford(two_s: int, fmt: str) -> None:
    """Dump the Clifford homomorphisms pi, pi^+ and pi^- at one level."""
    triple = clifford_service.build_clifford(SpinLabel(two_s=two_s))
    dump = report_service.dump_clifford(triple)
    if fmt == "json":
        click.echo(dump.model_dump_json(by_alias=True, indent=2))
    else:
        _print_dump(dump)


if __name__ == "__main__":
    cli()
