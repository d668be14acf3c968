"""Command-line interface.

Exit codes: 0 on success, 2 on usage/configuration errors (click's
convention), 3 on numerical failures such as stiffness or truncation.
"""

from __future__ import annotations

import dataclasses

import click
import yaml

from . import __version__
from .errors import SimulationError
from .scenarios import (
    INITIAL_STATE_TAGS,
    PRESET_NAMES,
    config_from_dict,
    config_to_dict,
    preset,
    run,
    run_spectrum,
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="dotcavity")
def main():
    """Simulate two Förster-coupled quantum dots in a lossy cavity."""


def _resolve(preset_name, config_path):
    try:
        if config_path is not None:
            with open(config_path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
            if preset_name is not None:
                data.setdefault("preset", preset_name)
            return config_from_dict(data)
        if preset_name is not None:
            return preset(preset_name)
    except (ValueError, KeyError, TypeError, OSError, yaml.YAMLError) as exc:
        raise click.UsageError(f"bad configuration: {exc}") from exc
    raise click.UsageError("provide --preset, --config, or both")


def _apply(cfg, **overrides):
    fields = {k: v for k, v in overrides.items() if v is not None}
    try:
        return dataclasses.replace(cfg, **fields)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _execute(cfg, runner):
    try:
        paths = runner(cfg)
    except SimulationError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        raise SystemExit(3)
    for path in paths:
        click.echo(str(path))


@main.command()
@click.option("--preset", "preset_name", type=click.Choice(PRESET_NAMES),
              help="Built-in scenario to start from.")
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False),
              help="YAML configuration file (may itself name a preset).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              help="Output directory for CSV files and manifest.json.")
@click.option("--initial-state", type=click.Choice(INITIAL_STATE_TAGS),
              help="Initial condition tag.")
@click.option("--t-end", type=float, help="Simulation window end, ps.")
@click.option("--workers", type=click.IntRange(min=1),
              help="Parallel worker processes for sweeps.")
@click.option("--fixed-step", type=float,
              help="Fixed integrator step in ps (deterministic mode).")
def simulate(preset_name, config_path, out_dir, initial_state, t_end, workers,
             fixed_step):
    """Integrate a scenario and write trajectory CSVs plus a manifest."""
    cfg = _resolve(preset_name, config_path)
    cfg = _apply(cfg, output_dir=out_dir, initial_state=initial_state,
                 t_end=t_end, workers=workers, fixed_step=fixed_step)
    _execute(cfg, run)


@main.command()
@click.option("--manifold", type=click.IntRange(1, 2), required=True,
              help="Excitation manifold (1 or 2).")
@click.option("--delta-min", type=float, default=-50.0, show_default=True,
              help="Lowest detuning, GHz.")
@click.option("--delta-max", type=float, default=50.0, show_default=True,
              help="Highest detuning, GHz.")
@click.option("--steps", type=click.IntRange(min=2), default=401,
              show_default=True, help="Detuning grid points.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              help="Output directory.")
def spectrum(manifold, delta_min, delta_max, steps, out_dir):
    """Eigenvalues of one excitation manifold against detuning."""
    import numpy as np

    from .scenarios import SweepSpec

    if delta_max <= delta_min:
        raise click.UsageError("--delta-max must exceed --delta-min")
    cfg = preset(f"spectrum{manifold}")
    sweep = SweepSpec("delta_over_2pi",
                      tuple(np.linspace(delta_min, delta_max, steps)))
    cfg = dataclasses.replace(cfg, sweep=sweep)
    cfg = _apply(cfg, output_dir=out_dir)
    _execute(cfg, run_spectrum)


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="YAML configuration file to check.")
def validate(config_path):
    """Resolve a configuration file and print the result."""
    cfg = _resolve(None, config_path)
    click.echo(yaml.safe_dump(config_to_dict(cfg), sort_keys=True), nl=False)


if __name__ == "__main__":
    main()
