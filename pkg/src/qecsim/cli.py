import logging
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Union

import click
import typer

from .config import LOG_LEVEL
from .errors import ConfigurationError, QecSimError
from .experiment import ExperimentConfig, experiment_config, run_experiment
from .presets import (
    PRESET_NAMES,
    Preset,
    analytic_overlay,
    build_preset,
    depth_rows,
    emit_csv,
    emit_oracle_csv,
    oracle_count_rows,
)

log = logging.getLogger("qecsim.cli")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3


class CodeOption(str, Enum):
    physical = "physical"
    five = "five"
    seven = "seven"
    nine = "nine"


class AncillaOption(str, Enum):
    one = "one"
    four = "four"


ANCILLA_MODES = {AncillaOption.one: "one_qubit", AncillaOption.four: "four_qubit_shor"}


@dataclass(frozen=True)
class RunRequest:
    target: Union[Preset, ExperimentConfig]
    out: Path
    analytic: bool = False


def _parse_period(value: str) -> Optional[int]:
    if value.strip().lower() == "never":
        return None
    try:
        period = int(value)
    except ValueError:
        raise typer.BadParameter(f"expected a positive integer or 'never', got {value!r}", param_hint="--qec-every")
    if period < 1:
        raise typer.BadParameter("the QEC period must be at least 1", param_hint="--qec-every")
    return period


def _check_out(out: Path) -> None:
    # checked while parsing, before any trial runs
    parent = out.parent
    if not parent.is_dir():
        raise typer.BadParameter(f"directory {str(parent)!r} does not exist", param_hint="--out")
    if not os.access(parent, os.W_OK):
        raise typer.BadParameter(f"directory {str(parent)!r} is not writable", param_hint="--out")


app = typer.Typer(add_completion=False, help="Monte Carlo fidelity experiments for the five, seven and nine qubit codes.")


@app.command()
def experiment(
    code: Optional[CodeOption] = typer.Option(None, "--code", help="Code to simulate, or the bare physical qubit."),
    p: Optional[float] = typer.Option(None, "--p", help="Depolarizing probability per qubit per layer (default 0)."),
    sigma: Optional[float] = typer.Option(None, "--sigma", help="Standard deviation of gate-angle errors in radians (default 0)."),
    qec_every: Optional[str] = typer.Option(None, "--qec-every", help="Main gates between recovery rounds, or 'never' (default)."),
    gates: Optional[int] = typer.Option(None, "--gates", help="Number of main Hadamard gates (default 4000)."),
    trials: int = typer.Option(10_000, "--trials", min=1, help="Monte Carlo trials."),
    seed: int = typer.Option(0, "--seed", min=0, help="Master seed."),
    ancilla: Optional[AncillaOption] = typer.Option(None, "--ancilla", help="Syndrome ancilla: one qubit (default) or four-qubit Shor state."),
    preset: Optional[str] = typer.Option(None, "--preset", help=f"One of: {', '.join(PRESET_NAMES)}."),
    out: Path = typer.Option(Path("results.csv"), "--out", dir_okay=False, writable=True, help="CSV output path."),
    analytic: bool = typer.Option(False, "--analytic", help="Add the closed-form fidelity column."),
) -> RunRequest:
    """Run one experiment, or every experiment of a preset, and write the series as CSV."""
    _check_out(out)
    if preset is not None:
        single_run_flags = {"--code": code, "--p": p, "--sigma": sigma, "--qec-every": qec_every, "--ancilla": ancilla}
        given = [flag for flag, value in single_run_flags.items() if value is not None]
        if given:
            raise click.UsageError(f"--preset cannot be combined with {', '.join(given)}")
        if preset not in PRESET_NAMES:
            raise typer.BadParameter(f"unknown preset {preset!r}", param_hint="--preset")
        try:
            target = build_preset(preset, trials=trials, seed=seed, gates=gates, measure_counts=analytic)
        except ConfigurationError as e:
            raise click.UsageError(str(e))
        return RunRequest(target, out, analytic or target.analytic)

    if code is None:
        raise click.UsageError("one of --code or --preset is required")
    try:
        config = experiment_config(
            code=code.value,
            ancilla_mode=ANCILLA_MODES[ancilla or AncillaOption.one],
            p=p or 0.0,
            sigma=sigma or 0.0,
            qec_period=_parse_period(qec_every or "never"),
            n_main_gates=4000 if gates is None else gates,
            trials=trials,
            master_seed=seed,
        )
    except ConfigurationError as e:
        raise click.UsageError(str(e))
    return RunRequest(config, out, analytic)


def parse_args(argv: Optional[Sequence[str]] = None) -> Union[RunRequest, int]:
    """
    Parse command-line flags without running anything.

    Returns:
        the RunRequest, or an exit code when click handled the call itself (--help).
    Raises:
        click.ClickException on bad or conflicting flags.
    """
    command = typer.main.get_command(app)
    return command.main(args=list(argv) if argv is not None else None, prog_name="qecsim", standalone_mode=False)


def execute(request: RunRequest) -> Path:
    target = request.target
    if isinstance(target, Preset) and target.name == "oracle-counts":
        metadata = ["preset=oracle-counts"]
        return emit_oracle_csv(oracle_count_rows(), depth_rows(), request.out, metadata)

    if isinstance(target, Preset):
        configs: List[ExperimentConfig] = target.configs
        counts = target.counts
        metadata = [f"preset={target.name}"]
        metadata += [f"measured y={y} C={c} L={l}" for y, (c, l) in sorted(counts.items())]
    else:
        configs, counts, metadata = [target], {}, []

    series = [run_experiment(config) for config in configs]
    overlays = [analytic_overlay(config, counts) if request.analytic else None for config in configs]
    return emit_csv(series, overlays, request.out, metadata)


def main(argv: Optional[Sequence[str]] = None) -> int:
    # ------------- LOGGING -------------
    logging.basicConfig(level=getattr(logging, LOG_LEVEL, logging.INFO))

    try:
        request = parse_args(argv)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        return EXIT_USAGE
    if not isinstance(request, RunRequest):
        return int(request or EXIT_OK)

    try:
        path = execute(request)
    except QecSimError:
        log.exception("run failed")
        return EXIT_RUNTIME
    except OSError:
        log.exception("could not write %s", request.out)
        return EXIT_RUNTIME
    log.info("results written to %s", path)
    return EXIT_OK
