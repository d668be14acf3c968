"""Named scenarios, parameter sweeps, and file outputs.

A scenario resolves to one or more trajectories (or a detuning spectrum),
written as CSV files plus a ``manifest.json`` that records the fully
resolved configuration, tool version, and integrator tolerances; the
manifest alone is enough to reproduce a run.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from ._kernels import backend
from .correlations import evaluate_trajectory
from .dynamics import DEFAULT_ATOL, DEFAULT_RTOL, TOP_FOCK_GUARD, integrate, observables
from .errors import SimulationError
from .hilbert import HilbertSpace, make_space
from .model import ANGULAR_PER_GHZ, PulseParams, SystemParams, spectrum_sweep

__all__ = [
    "PRESET_NAMES",
    "INITIAL_STATE_TAGS",
    "CSV_COLUMNS",
    "SweepSpec",
    "ScenarioConfig",
    "preset",
    "initial_state",
    "run",
    "run_spectrum",
    "load_config",
    "config_to_dict",
    "config_from_dict",
]

PRESET_NAMES = ("fig4a", "fig4b", "fig5", "fig6", "fig7", "spectrum1", "spectrum2")
INITIAL_STATE_TAGS = ("vacuum", "dot1", "dot2", "symmetric")

CSV_COLUMNS = ("t_ps", "cc", "eof", "mutual_info", "classical", "discord",
               "n_photon", "pop_x1", "pop_x2", "pump_px", "top_fock")

# Fock depth for scenarios with incoherent pumping on; the truncation guard
# in dynamics keeps this honest.
_N_MAX_PUMPED = 9


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter: a SystemParams or PulseParams field name plus
    the values it takes (one trajectory each)."""

    parameter: str
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("sweep needs at least one value")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    params: SystemParams
    initial_state: str = "dot1"
    t_end: float = 150.0
    sample_dt: float = 0.25
    sweep: SweepSpec | None = None
    output_dir: str = "out"
    manifold: int | None = None
    fixed_step: float | None = None
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    truncation_guard: float | None = TOP_FOCK_GUARD
    workers: int = 1

    def __post_init__(self):
        if self.initial_state not in INITIAL_STATE_TAGS:
            raise ValueError(
                f"unknown initial state {self.initial_state!r}; "
                f"valid: {', '.join(INITIAL_STATE_TAGS)}")
        if self.t_end <= 0 or self.sample_dt <= 0:
            raise ValueError("t_end and sample_dt must be positive")
        if self.manifold is not None and self.manifold not in (1, 2):
            raise ValueError(f"manifold must be 1 or 2, got {self.manifold}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def initial_state(space: HilbertSpace, tag: str) -> np.ndarray:
    """Density matrix for one of the named initial conditions."""
    if tag == "vacuum":
        psi = space.basis_state(0, 0, 0)
    elif tag == "dot1":
        psi = space.basis_state(1, 0, 0)
    elif tag == "dot2":
        psi = space.basis_state(0, 1, 0)
    elif tag == "symmetric":
        psi = (space.basis_state(1, 0, 0) + space.basis_state(0, 1, 0)) / np.sqrt(2.0)
    else:
        raise ValueError(
            f"unknown initial state {tag!r}; valid: {', '.join(INITIAL_STATE_TAGS)}")
    return np.outer(psi, psi.conj())


def preset(name: str) -> ScenarioConfig:
    """Built-in scenario configurations.

    All share g/2pi = 10 GHz, kappa/2pi = 5 GHz, gamma/2pi = 0.025 GHz,
    resonance, and a 150 ps window sampled every 0.25 ps.  The dynamical
    presets start from the symmetric exciton superposition, which is the
    state behind the reference entanglement curves; pulsed scenarios
    centre the pump at 60 ps.
    """
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; valid: {', '.join(PRESET_NAMES)}")
    base = dict(g_over_2pi=10.0, kappa_over_2pi=5.0, gamma_over_2pi=0.025,
                delta_over_2pi=0.0)
    sweep = None
    manifold = None

    if name == "fig4a":
        params = SystemParams(**base, forster_over_2pi=15.0, pc_over_2pi=0.0,
                              pulse=PulseParams(p0_over_2pi=0.0, tau_p=20.0, t0=60.0),
                              n_max=5)
    elif name == "fig4b":
        params = SystemParams(**base, forster_over_2pi=0.0, pc_over_2pi=1.0,
                              pulse=PulseParams(p0_over_2pi=1.0, tau_p=20.0, t0=60.0),
                              n_max=_N_MAX_PUMPED)
    elif name == "fig5":
        params = SystemParams(**base, forster_over_2pi=15.0, pc_over_2pi=1.0,
                              pulse=PulseParams(p0_over_2pi=1.0, tau_p=20.0, t0=60.0),
                              n_max=_N_MAX_PUMPED)
        sweep = SweepSpec("forster_over_2pi", (5.0, 10.0, 15.0, 20.0))
    elif name == "fig6":
        params = SystemParams(**base, forster_over_2pi=15.0, pc_over_2pi=0.5,
                              pulse=PulseParams(p0_over_2pi=1.0, tau_p=20.0, t0=60.0),
                              n_max=_N_MAX_PUMPED)
        sweep = SweepSpec("p0_over_2pi", (0.5, 1.0, 1.5, 2.0, 2.5))
    elif name == "fig7":
        params = SystemParams(**base, forster_over_2pi=15.0, pc_over_2pi=1.0,
                              pulse=PulseParams(p0_over_2pi=1.0, tau_p=20.0, t0=60.0),
                              n_max=_N_MAX_PUMPED)
        sweep = SweepSpec("tau_p", (1.0, 5.0, 10.0, 15.0, 20.0))
    else:  # spectrum1 / spectrum2
        params = SystemParams(**base, forster_over_2pi=15.0, n_max=5)
        sweep = SweepSpec("delta_over_2pi", tuple(np.linspace(-50.0, 50.0, 401)))
        manifold = 1 if name == "spectrum1" else 2

    return ScenarioConfig(name=name, params=params, initial_state="symmetric",
                          sweep=sweep, manifold=manifold)


_PARAM_FIELDS = {f.name for f in dataclasses.fields(SystemParams)} - {"pulse"}
_PULSE_FIELDS = {f.name for f in dataclasses.fields(PulseParams)}


def _with_parameter(params: SystemParams, name: str, value: float) -> SystemParams:
    if name in _PARAM_FIELDS:
        return replace(params, **{name: value})
    if name in _PULSE_FIELDS:
        return replace(params, pulse=replace(params.pulse, **{name: value}))
    raise ValueError(
        f"unknown sweep parameter {name!r}; must be a field of "
        "SystemParams or PulseParams")


def _csv_name(config: ScenarioConfig, value: float | None) -> str:
    if value is None:
        return f"{config.name}.csv"
    return f"{config.name}_{config.sweep.parameter}={value:g}.csv"


def _format_row(values) -> list[str]:
    return [f"{float(v):.12g}" for v in values]


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(_format_row(row))


def _run_one_trajectory(config: ScenarioConfig, csv_path: str) -> None:
    """Integrate, measure, and write a single trajectory CSV."""
    space = make_space(config.params.n_max)
    rho0 = initial_state(space, config.initial_state)
    trajectory = integrate(space, config.params, rho0, (0.0, config.t_end),
                           config.sample_dt, rtol=config.rtol, atol=config.atol,
                           fixed_step=config.fixed_step,
                           truncation_guard=config.truncation_guard)
    table = observables(space, trajectory)
    records = evaluate_trajectory(space, trajectory)
    pump_ghz = trajectory.pump_values / ANGULAR_PER_GHZ
    rows = [
        (rec.t, rec.cc, rec.eof, rec.mutual_info, rec.classical, rec.discord,
         table.n_photon[i], table.pop_x1[i], table.pop_x2[i], pump_ghz[i],
         table.top_fock[i])
        for i, rec in enumerate(records)
    ]
    _write_csv(Path(csv_path), CSV_COLUMNS, rows)


def _trajectory_job(args) -> tuple[str, str | None]:
    config, csv_path = args
    try:
        _run_one_trajectory(config, csv_path)
    except SimulationError as exc:
        return csv_path, f"{type(exc).__name__}: {exc}"
    return csv_path, None


def _write_manifest(out_dir: Path, config: ScenarioConfig, outputs,
                    csv_columns) -> Path:
    manifest = {
        "tool": {"name": "dotcavity", "version": __version__, "backend": backend()},
        "config": config_to_dict(config),
        "integrator": {"rtol": config.rtol, "atol": config.atol,
                       "fixed_step": config.fixed_step,
                       "truncation_guard": config.truncation_guard},
        "csv_columns": list(csv_columns),
        "outputs": outputs,
    }
    path = out_dir / "manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def run(config: ScenarioConfig) -> list[Path]:
    """Execute a trajectory scenario: one CSV per sweep value plus the
    manifest.  A trajectory that fails numerically never aborts its
    siblings; every failure is recorded in the manifest, and one
    ``SimulationError`` summarizing them is raised after all outputs are
    on disk.  Returns written paths.
    """
    if config.manifold is not None:
        return run_spectrum(config)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if config.sweep is None:
        jobs = [(config, str(out_dir / _csv_name(config, None)), None)]
    else:
        jobs = []
        for value in config.sweep.values:
            cfg = replace(config, params=_with_parameter(config.params,
                                                         config.sweep.parameter, value))
            jobs.append((cfg, str(out_dir / _csv_name(config, value)), value))

    results = []
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for (path, error), (_, _, value) in zip(
                    pool.map(_trajectory_job, [(c, p) for c, p, _ in jobs]),
                    jobs):
                results.append((path, value, error))
    else:
        for cfg, path, value in jobs:
            path, error = _trajectory_job((cfg, path))
            results.append((path, value, error))

    outputs = []
    written = []
    for path, value, error in results:
        entry = {"file": Path(path).name, "sweep_value": value,
                 "status": "error" if error else "ok"}
        if error:
            entry["error"] = error
        else:
            written.append(Path(path))
        outputs.append(entry)
    manifest_path = _write_manifest(out_dir, config, outputs, CSV_COLUMNS)
    written.append(manifest_path)
    failed = [entry for entry in outputs if entry["status"] == "error"]
    if failed:
        names = ", ".join(entry["file"] for entry in failed)
        raise SimulationError(
            f"{len(failed)} of {len(outputs)} trajectories failed ({names}); "
            f"details in {manifest_path}")
    return written


def run_spectrum(config: ScenarioConfig) -> list[Path]:
    """Manifold eigenvalues against detuning, one CSV plus manifest."""
    if config.manifold is None:
        raise ValueError("spectrum run needs manifold 1 or 2")
    if config.sweep is None or config.sweep.parameter != "delta_over_2pi":
        raise ValueError("spectrum run sweeps delta_over_2pi")
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    table = spectrum_sweep(config.params, config.manifold, config.sweep.values)
    n_eigs = table.eigenvalues_ghz.shape[1]
    header = ("delta_ghz",) + tuple(f"eig{i + 1}" for i in range(n_eigs))
    rows = [(d, *row) for d, row in zip(table.delta_ghz, table.eigenvalues_ghz)]
    csv_path = out_dir / f"{config.name}.csv"
    _write_csv(csv_path, header, rows)

    outputs = [{"file": csv_path.name, "sweep_value": None, "status": "ok"}]
    manifest = _write_manifest(out_dir, config, outputs, header)
    return [csv_path, manifest]


# ---------------------------------------------------------------------------
# configuration serialization

def config_to_dict(config: ScenarioConfig) -> dict:
    pulse = config.params.pulse
    return {
        "name": config.name,
        "params": {
            "g_over_2pi": config.params.g_over_2pi,
            "gamma_over_2pi": config.params.gamma_over_2pi,
            "kappa_over_2pi": config.params.kappa_over_2pi,
            "forster_over_2pi": config.params.forster_over_2pi,
            "delta_over_2pi": config.params.delta_over_2pi,
            "pc_over_2pi": config.params.pc_over_2pi,
            "n_max": config.params.n_max,
            "cavity_freq_over_2pi": config.params.cavity_freq_over_2pi,
            "pulse": {
                "p0_over_2pi": pulse.p0_over_2pi,
                "tau_p": pulse.tau_p,
                "t0": pulse.t0,
            },
        },
        "initial_state": config.initial_state,
        "t_end": config.t_end,
        "sample_dt": config.sample_dt,
        "sweep": None if config.sweep is None else {
            "parameter": config.sweep.parameter,
            "values": [float(v) for v in config.sweep.values],
        },
        "output_dir": str(config.output_dir),
        "manifold": config.manifold,
        "fixed_step": config.fixed_step,
        "rtol": config.rtol,
        "atol": config.atol,
        "truncation_guard": config.truncation_guard,
        "workers": config.workers,
    }


def config_from_dict(data: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from a plain dict (YAML file or manifest).

    A ``preset`` key selects a base configuration that remaining keys
    override; unknown keys are rejected.
    """
    if not isinstance(data, dict):
        raise ValueError(f"configuration must be a mapping, got {type(data).__name__}")
    data = dict(data)
    base = preset(data.pop("preset")) if "preset" in data else None

    known = {"name", "params", "initial_state", "t_end", "sample_dt", "sweep",
             "output_dir", "manifold", "fixed_step", "rtol", "atol",
             "truncation_guard", "workers"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown configuration keys: {', '.join(sorted(unknown))}")

    params = base.params if base is not None else SystemParams()
    if "params" in data:
        pdata = dict(data.pop("params"))
        pulse_data = pdata.pop("pulse", None)
        unknown_p = set(pdata) - _PARAM_FIELDS
        if unknown_p:
            raise ValueError(f"unknown parameter keys: {', '.join(sorted(unknown_p))}")
        params = replace(params, **pdata)
        if pulse_data is not None:
            unknown_pp = set(pulse_data) - _PULSE_FIELDS
            if unknown_pp:
                raise ValueError(f"unknown pulse keys: {', '.join(sorted(unknown_pp))}")
            params = replace(params, pulse=replace(params.pulse, **pulse_data))

    if "sweep" in data:
        sweep_data = data.pop("sweep")
        sweep = None if sweep_data is None else SweepSpec(
            parameter=sweep_data["parameter"],
            values=tuple(float(v) for v in sweep_data["values"]))
    else:
        sweep = base.sweep if base is not None else None

    defaults = base if base is not None else ScenarioConfig(name="run", params=params)
    return replace(defaults, params=params, sweep=sweep, **data)


def load_config(path) -> ScenarioConfig:
    """Read a YAML configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        raise ValueError(f"configuration file {path} is empty")
    return config_from_dict(data)
