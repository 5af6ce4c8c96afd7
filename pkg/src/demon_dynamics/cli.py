"""CLI commands for Demon Dynamics."""

import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import structlog
import typer
from rich.console import Console
from rich.table import Table

from . import __version__
from .core.config import settings
from .core.exceptions import (
    ConfigurationError,
    DemonDynamicsError,
    NumericalContractError,
    ValidationError,
)
from .core.logging import setup_logging
from .models.run import RunConfig, RunManifest
from .services.config_loader import load_run_config, parse_number
from .services.lattice import dispersion_parabolic_range
from .services.orchestration_service import GREEN_KINDS, RunOrchestrator

app = typer.Typer(
    name="demon-dynamics",
    help="Wave dynamics in a box with a momentum-dependent demon",
    add_completion=False,
)

console = Console()
logger = structlog.get_logger(__name__)

EXIT_INPUT = 2
EXIT_NUMERICAL = 3


@app.callback()
def configure(
    log_level: str = typer.Option(settings.log_level, "--log-level", help="Log level"),
    log_format: str = typer.Option(settings.log_format, "--log-format", help="json or console"),
):
    """Set up logging before any command runs."""
    setup_logging(log_level=log_level, log_format=log_format)


def _number(value: Optional[str], key: str) -> Optional[float]:
    if value is None:
        return None
    try:
        return parse_number(value)
    except ValueError as exc:
        raise ConfigurationError(f"invalid value for '{key}': {value!r}", config_key=key) from exc


def _guarded(action: Callable[[], Any]) -> Any:
    """Run a command body and map package errors to exit codes."""
    try:
        return action()
    except (ConfigurationError, ValidationError) as exc:
        logger.error("Invalid input", error_code=exc.error_code, details=exc.details)
        console.print(f"[red]Input error:[/red] {exc.message}")
        raise typer.Exit(code=EXIT_INPUT)
    except NumericalContractError as exc:
        logger.error("Numerical contract violated", error_code=exc.error_code, details=exc.details)
        console.print(f"[red]Numerical error:[/red] {exc.message}")
        raise typer.Exit(code=EXIT_NUMERICAL)
    except DemonDynamicsError as exc:
        logger.error("Run failed", error_code=exc.error_code, details=exc.details)
        console.print(f"[red]Error:[/red] {exc.message}")
        raise typer.Exit(code=1)


def _load(config_path: Optional[Path], overrides: Dict[str, Any]) -> RunConfig:
    return load_run_config(config_path, overrides)


def _print_manifest(manifest: RunManifest, title: str) -> None:
    table = Table(title=title)
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="green")
    for key, value in manifest.summary.items():
        table.add_row(str(key), str(value))
    table.add_row("outputs", ", ".join(manifest.outputs) or "-")
    if manifest.partial:
        table.add_row("failures", ", ".join(f"{k}: {v}" for k, v in manifest.failures.items()))
    console.print(table)


@app.command()
def version():
    """Show application version."""
    console.print(f"Demon Dynamics v{__version__}")


@app.command()
def config(
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c", help="key = value run file or a run manifest (.json)"
    ),
):
    """Show the resolved run configuration."""

    def body():
        run_config = _load(config_path, {})
        table = Table(title="Run Configuration")
        table.add_column("Key", style="cyan")
        table.add_column("Value", style="green")
        for key, value in run_config.model_dump(mode="python").items():
            table.add_row(key, str(value))
        console.print(table)

    _guarded(body)


@app.command()
def evolve(
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c", help="key = value run file or a run manifest (.json)"
    ),
    output_dir: Optional[str] = typer.Option(
        None, "--output-dir", "-o", help="Directory for run outputs"
    ),
    beta: Optional[str] = typer.Option(None, "--beta", help="Boltzmann beta or 'uniform'"),
    upsilon0: Optional[str] = typer.Option(None, "--upsilon0", help="Demon strength"),
    half_sites: Optional[int] = typer.Option(None, "--half-sites", help="N; 2N+1 sites"),
    kappa_r: Optional[str] = typer.Option(None, "--kappa-r", help="Reference wavenumber"),
    tau_max: Optional[str] = typer.Option(None, "--tau-max", help="Last rescaled time"),
    tau_steps: Optional[int] = typer.Option(None, "--tau-steps", help="Number of time points"),
):
    """Propagate one initial state and write its observables."""

    def body():
        run_config = _load(
            config_path,
            {
                "output_dir": output_dir,
                "beta": beta,
                "upsilon0": _number(upsilon0, "upsilon0"),
                "half_sites": half_sites,
                "kappa_r": _number(kappa_r, "kappa_r"),
                "tau_max": _number(tau_max, "tau_max"),
                "tau_steps": tau_steps,
            },
        )
        manifest = RunOrchestrator(run_config).run_evolve()
        _print_manifest(manifest, "Evolve Run")

    _guarded(body)


@app.command()
def sweep(
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c", help="key = value run file or a run manifest (.json)"
    ),
    output_dir: Optional[str] = typer.Option(
        None, "--output-dir", "-o", help="Directory for run outputs"
    ),
    betas: Optional[str] = typer.Option(None, "--betas", help="Comma list of beta values"),
    upsilon0: Optional[str] = typer.Option(None, "--upsilon0", help="Demon strength"),
    half_sites: Optional[int] = typer.Option(None, "--half-sites", help="N; 2N+1 sites"),
    tau_max: Optional[str] = typer.Option(None, "--tau-max", help="Last rescaled time"),
    tau_steps: Optional[int] = typer.Option(None, "--tau-steps", help="Number of time points"),
):
    """Run one evolution per beta on a shared eigensystem."""

    def body():
        sweep_betas: Optional[List[Any]] = None
        if betas is not None:
            sweep_betas = [item.strip() for item in betas.split(",") if item.strip()]
        run_config = _load(
            config_path,
            {
                "output_dir": output_dir,
                "sweep_betas": sweep_betas,
                "upsilon0": _number(upsilon0, "upsilon0"),
                "half_sites": half_sites,
                "tau_max": _number(tau_max, "tau_max"),
                "tau_steps": tau_steps,
            },
        )
        manifest = RunOrchestrator(run_config).run_sweep()
        _print_manifest(manifest, "Beta Sweep")
        if manifest.partial:
            raise typer.Exit(code=EXIT_NUMERICAL)

    _guarded(body)


@app.command()
def poles(
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c", help="key = value run file or a run manifest (.json)"
    ),
    output_dir: Optional[str] = typer.Option(
        None, "--output-dir", "-o", help="Directory for run outputs"
    ),
    e_lo: Optional[str] = typer.Option(None, "--e-lo", help="Lower end of the energy window"),
    e_hi: Optional[str] = typer.Option(None, "--e-hi", help="Upper end of the energy window"),
    p_ref: Optional[str] = typer.Option(None, "--p-ref", help="Reference momentum P_R"),
    strength: Optional[str] = typer.Option(None, "--strength", help="Demon strength V0"),
):
    """Find the real roots of the demon denominator."""

    def body():
        run_config = _load(
            config_path,
            {
                "output_dir": output_dir,
                "pole_e_lo": _number(e_lo, "pole_e_lo"),
                "pole_e_hi": _number(e_hi, "pole_e_hi"),
                "p_ref": _number(p_ref, "p_ref"),
                "strength": _number(strength, "strength"),
            },
        )
        manifest = RunOrchestrator(run_config).run_poles()
        console.print(f"Found {manifest.summary['roots']} demon poles")
        _print_manifest(manifest, "Pole Scan")

    _guarded(body)


@app.command()
def dispersion(
    tolerances: List[float] = typer.Option(
        [0.01, 0.05, 0.1], "--tol", "-t", help="Relative deviation from k^2 (repeatable)"
    ),
):
    """Print the largest wavenumber where the lattice dispersion stays parabolic."""

    def body():
        table = Table(title="Parabolic Regime")
        table.add_column("tol", style="cyan")
        table.add_column("kappa_max", style="green")
        table.add_column("kappa_max / pi", style="green")
        for tol in tolerances:
            kappa = dispersion_parabolic_range(tol)
            table.add_row(f"{tol:g}", f"{kappa:.6f}", f"{kappa / math.pi:.6f}")
        console.print(table)

    _guarded(body)


@app.command()
def greens(
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c", help="key = value run file or a run manifest (.json)"
    ),
    output_dir: Optional[str] = typer.Option(
        None, "--output-dir", "-o", help="Directory for run outputs"
    ),
    kind: str = typer.Option("demon", "--kind", help=f"One of {', '.join(GREEN_KINDS)}"),
    energy: str = typer.Option("0.7", "--energy", "-e", help="Real energy"),
    x_prime: str = typer.Option("0.5", "--x-prime", help="Fixed second argument"),
    points: int = typer.Option(101, "--points", help="Grid points across the box"),
):
    """Evaluate a perturbed Green's function across the box to CSV."""

    def body():
        run_config = _load(config_path, {"output_dir": output_dir})
        manifest = RunOrchestrator(run_config).run_greens(
            kind, _number(energy, "energy"), _number(x_prime, "x_prime"), points
        )
        _print_manifest(manifest, "Green's Function")

    _guarded(body)


def main():
    """Main CLI entry point."""
    app()


if __name__ == "__main__":
    main()
