"""Presets, persistence, configuration round-trips, and the CLI."""

import dataclasses
import json

import numpy as np
import pytest
import yaml
from click.testing import CliRunner
from numpy.testing import assert_allclose

from dotcavity import cli, hilbert
from dotcavity.correlations import concurrence, reduce_to_dots
from dotcavity.errors import SimulationError
from dotcavity.scenarios import (
    CSV_COLUMNS,
    PRESET_NAMES,
    ScenarioConfig,
    SweepSpec,
    config_from_dict,
    config_to_dict,
    initial_state,
    load_config,
    preset,
    run,
    run_spectrum,
)


def small(cfg: ScenarioConfig, out_dir, **extra) -> ScenarioConfig:
    """Shrink a preset's window so tests stay fast."""
    fields = dict(t_end=2.0, sample_dt=0.5, output_dir=str(out_dir))
    fields.update(extra)
    return dataclasses.replace(cfg, **fields)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
    return header, np.asarray(rows)


# ---------------------------------------------------------------------------
# presets

def test_preset_names_are_exhaustive():
    assert set(PRESET_NAMES) == {
        "fig4a", "fig4b", "fig5", "fig6", "fig7", "spectrum1", "spectrum2"}
    with pytest.raises(ValueError, match="fig4a"):
        preset("fig9")


def test_presets_share_base_rates():
    for name in ("fig4a", "fig4b", "fig5", "fig6", "fig7"):
        cfg = preset(name)
        assert cfg.params.g_over_2pi == 10.0
        assert cfg.params.kappa_over_2pi == 5.0
        assert cfg.params.gamma_over_2pi == 0.025
        assert cfg.params.delta_over_2pi == 0.0
        assert cfg.t_end == 150.0
        assert cfg.sample_dt == 0.25
        assert cfg.initial_state == "symmetric"


def test_preset_fig4a():
    cfg = preset("fig4a")
    assert cfg.params.forster_over_2pi == 15.0
    assert cfg.params.pc_over_2pi == 0.0
    assert cfg.params.pulse.p0_over_2pi == 0.0
    assert cfg.sweep is None


def test_preset_fig4b():
    cfg = preset("fig4b")
    assert cfg.params.forster_over_2pi == 0.0
    assert cfg.params.pc_over_2pi == 1.0
    assert cfg.params.pulse.p0_over_2pi == 1.0
    assert cfg.params.pulse.tau_p == 20.0


def test_preset_sweeps():
    assert preset("fig5").sweep == SweepSpec("forster_over_2pi", (5.0, 10.0, 15.0, 20.0))
    assert preset("fig6").sweep == SweepSpec("p0_over_2pi", (0.5, 1.0, 1.5, 2.0, 2.5))
    assert preset("fig7").sweep == SweepSpec("tau_p", (1.0, 5.0, 10.0, 15.0, 20.0))
    assert preset("fig6").params.pc_over_2pi == 0.5
    assert preset("fig6").params.forster_over_2pi == 15.0
    assert preset("fig7").params.pc_over_2pi == 1.0
    assert preset("fig7").params.forster_over_2pi == 15.0
    # the width sweep must not drag the pulse centre along with tau_p
    assert preset("fig7").params.pulse.t0 == 60.0


def test_spectrum_presets():
    for name, manifold in (("spectrum1", 1), ("spectrum2", 2)):
        cfg = preset(name)
        assert cfg.manifold == manifold
        assert cfg.sweep.parameter == "delta_over_2pi"
        assert len(cfg.sweep.values) == 401
        assert cfg.sweep.values[0] == -50.0 and cfg.sweep.values[-1] == 50.0


# ---------------------------------------------------------------------------
# initial states

def test_initial_state_tags():
    space = hilbert.make_space(3)
    for tag, (e1, e2) in (("vacuum", (0, 0)), ("dot1", (1, 0)), ("dot2", (0, 1))):
        rho = initial_state(space, tag)
        psi = space.basis_state(e1, e2, 0)
        assert_allclose(rho, np.outer(psi, psi.conj()), atol=1e-15)
    rho = initial_state(space, "symmetric")
    assert np.trace(rho).real == pytest.approx(1.0)
    assert concurrence(reduce_to_dots(space, rho)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        initial_state(space, "thermal")


def test_config_validation():
    params = preset("fig4a").params
    with pytest.raises(ValueError):
        ScenarioConfig(name="x", params=params, initial_state="thermal")
    with pytest.raises(ValueError):
        ScenarioConfig(name="x", params=params, t_end=0.0)
    with pytest.raises(ValueError):
        ScenarioConfig(name="x", params=params, manifold=3)
    with pytest.raises(ValueError):
        ScenarioConfig(name="x", params=params, workers=0)
    with pytest.raises(ValueError):
        SweepSpec("p0_over_2pi", ())


# ---------------------------------------------------------------------------
# running scenarios and persistence

def test_run_single_trajectory_outputs(tmp_path):
    cfg = small(preset("fig4a"), tmp_path, t_end=5.0, sample_dt=0.25)
    written = run(cfg)
    csv_path = tmp_path / "fig4a.csv"
    manifest_path = tmp_path / "manifest.json"
    assert set(written) == {csv_path, manifest_path}

    header, rows = read_csv(csv_path)
    assert header == list(CSV_COLUMNS)
    assert rows.shape[0] == 21  # floor(t_end / sample_dt) + 1
    assert_allclose(rows[:, 0], np.arange(21) * 0.25, atol=1e-12)

    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    assert manifest["tool"]["name"] == "dotcavity"
    assert manifest["csv_columns"] == list(CSV_COLUMNS)
    assert manifest["outputs"] == [
        {"file": "fig4a.csv", "sweep_value": None, "status": "ok"}]
    assert manifest["config"]["params"]["forster_over_2pi"] == 15.0


def test_csv_values_carry_twelve_significant_digits(tmp_path):
    cfg = small(preset("fig4a"), tmp_path, t_end=1.0, sample_dt=1.0 / 3.0)
    run(cfg)
    lines = (tmp_path / "fig4a.csv").read_text(encoding="utf-8").splitlines()
    t_text = lines[2].split(",")[0]
    assert t_text == "0.333333333333"


def test_run_sweep_writes_one_csv_per_value(tmp_path):
    cfg = small(preset("fig5"), tmp_path)
    written = run(cfg)
    names = sorted(p.name for p in written)
    assert names == sorted([
        "fig5_forster_over_2pi=5.csv",
        "fig5_forster_over_2pi=10.csv",
        "fig5_forster_over_2pi=15.csv",
        "fig5_forster_over_2pi=20.csv",
        "manifest.json",
    ])
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert [o["sweep_value"] for o in manifest["outputs"]] == [5.0, 10.0, 15.0, 20.0]
    assert all(o["status"] == "ok" for o in manifest["outputs"])


def test_sweep_over_pulse_parameter(tmp_path):
    cfg = small(preset("fig7"), tmp_path, t_end=1.0)
    written = run(cfg)
    assert (tmp_path / "fig7_tau_p=1.csv") in written
    assert (tmp_path / "fig7_tau_p=20.csv") in written


def test_parallel_sweep_matches_serial(tmp_path):
    serial_dir = tmp_path / "serial"
    parallel_dir = tmp_path / "parallel"
    base = small(preset("fig5"), serial_dir, t_end=1.0, fixed_step=0.05)
    run(base)
    run(dataclasses.replace(base, output_dir=str(parallel_dir), workers=2))
    for name in ("fig5_forster_over_2pi=5.csv", "fig5_forster_over_2pi=20.csv"):
        assert (serial_dir / name).read_bytes() == (parallel_dir / name).read_bytes()


def test_fixed_step_reruns_are_byte_identical(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    cfg = small(preset("fig4a"), first, t_end=3.0, fixed_step=0.05)
    run(cfg)
    run(dataclasses.replace(cfg, output_dir=str(second)))
    assert (first / "fig4a.csv").read_bytes() == (second / "fig4a.csv").read_bytes()


def test_manifest_round_trip_reproduces_run(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    run(small(preset("fig4a"), first, t_end=3.0, fixed_step=0.05))
    manifest = json.loads((first / "manifest.json").read_text(encoding="utf-8"))
    cfg = config_from_dict(manifest["config"])
    run(dataclasses.replace(cfg, output_dir=str(second)))
    assert (first / "fig4a.csv").read_bytes() == (second / "fig4a.csv").read_bytes()


def test_failed_trajectory_is_recorded_and_raised(tmp_path):
    # a 2-level Fock ladder under continuous pumping overflows immediately
    cfg = preset("fig4b")
    cfg = small(cfg, tmp_path, t_end=20.0,
                params=dataclasses.replace(cfg.params, n_max=2))
    with pytest.raises(SimulationError, match="manifest"):
        run(cfg)
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["outputs"][0]["status"] == "error"
    assert "n_max" in manifest["outputs"][0]["error"]


def test_run_spectrum_outputs(tmp_path):
    cfg = dataclasses.replace(preset("spectrum1"), output_dir=str(tmp_path))
    written = run_spectrum(cfg)
    header, rows = read_csv(tmp_path / "spectrum1.csv")
    assert header == ["delta_ghz", "eig1", "eig2", "eig3"]
    assert rows.shape == (401, 4)
    assert (tmp_path / "manifest.json") in written
    # the detuned-dot line crosses zero at resonance for Gamma = 0
    cfg0 = dataclasses.replace(
        cfg, params=dataclasses.replace(cfg.params, forster_over_2pi=0.0),
        output_dir=str(tmp_path / "g0"))
    run_spectrum(cfg0)
    _, rows0 = read_csv(tmp_path / "g0" / "spectrum1.csv")
    deltas = rows0[:, 0]
    dark_line = np.min(np.abs(rows0[:, 1:] - deltas[:, None]), axis=1)
    assert dark_line.max() < 1e-9


def test_run_spectrum_manifold_two_has_four_columns(tmp_path):
    cfg = dataclasses.replace(preset("spectrum2"), output_dir=str(tmp_path))
    run_spectrum(cfg)
    header, rows = read_csv(tmp_path / "spectrum2.csv")
    assert header == ["delta_ghz", "eig1", "eig2", "eig3", "eig4"]
    assert rows.shape == (401, 5)


def test_run_dispatches_spectrum_configs(tmp_path):
    cfg = dataclasses.replace(preset("spectrum1"), output_dir=str(tmp_path))
    written = run(cfg)
    assert (tmp_path / "spectrum1.csv") in written


# ---------------------------------------------------------------------------
# configuration serialization

def test_config_round_trip_through_dict():
    cfg = preset("fig6")
    assert config_from_dict(config_to_dict(cfg)) == cfg


def test_config_from_dict_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown config"):
        config_from_dict({"preset": "fig4a", "speed": 11})
    with pytest.raises(ValueError, match="unknown parameter"):
        config_from_dict({"preset": "fig4a", "params": {"gee": 1.0}})
    with pytest.raises(ValueError, match="unknown pulse"):
        config_from_dict({"preset": "fig4a", "params": {"pulse": {"width": 3.0}}})


def test_config_from_dict_preset_with_overrides():
    cfg = config_from_dict({
        "preset": "fig4a",
        "t_end": 80.0,
        "params": {"forster_over_2pi": 7.5, "pulse": {"tau_p": 10.0}},
    })
    assert cfg.name == "fig4a"
    assert cfg.t_end == 80.0
    assert cfg.params.forster_over_2pi == 7.5
    assert cfg.params.pulse.tau_p == 10.0
    # untouched fields keep their preset values
    assert cfg.params.pc_over_2pi == 0.0
    assert cfg.sample_dt == 0.25


def test_load_config_reads_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("preset: fig4a\nt_end: 42.0\n", encoding="utf-8")
    cfg = load_config(path)
    assert cfg.t_end == 42.0
    assert cfg.params.forster_over_2pi == 15.0


# ---------------------------------------------------------------------------
# command-line interface

@pytest.fixture()
def runner():
    return CliRunner()


def test_cli_requires_preset_or_config(runner):
    result = runner.invoke(cli.main, ["simulate"])
    assert result.exit_code == 2
    assert "--preset" in result.output


def test_cli_simulate_with_preset(runner, tmp_path):
    result = runner.invoke(cli.main, [
        "simulate", "--preset", "fig4a", "--t-end", "2", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "fig4a.csv").exists()
    assert (tmp_path / "manifest.json").exists()
    assert "fig4a.csv" in result.output


def test_cli_simulate_initial_state_override(runner, tmp_path):
    result = runner.invoke(cli.main, [
        "simulate", "--preset", "fig4a", "--t-end", "1",
        "--initial-state", "dot2", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["config"]["initial_state"] == "dot2"


def test_cli_config_file_with_preset_flag(runner, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("t_end: 1.5\nsample_dt: 0.5\n", encoding="utf-8")
    out = tmp_path / "out"
    result = runner.invoke(cli.main, [
        "simulate", "--preset", "fig4a", "--config", str(path), "--out", str(out)])
    assert result.exit_code == 0, result.output
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["config"]["t_end"] == 1.5


def test_cli_rejects_bad_config(runner, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("preset: fig4a\nspeed: 11\n", encoding="utf-8")
    result = runner.invoke(cli.main, ["simulate", "--config", str(path)])
    assert result.exit_code == 2
    assert "speed" in result.output


def test_cli_exit_code_three_on_numerical_failure(runner, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "preset: fig4b\nt_end: 20.0\nparams:\n  n_max: 2\n", encoding="utf-8")
    result = runner.invoke(cli.main, [
        "simulate", "--config", str(path), "--out", str(tmp_path / "out")])
    assert result.exit_code == 3
    assert "numerical failure" in result.output


def test_cli_spectrum(runner, tmp_path):
    result = runner.invoke(cli.main, [
        "spectrum", "--manifold", "1", "--steps", "21", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    header, rows = read_csv(tmp_path / "spectrum1.csv")
    assert rows.shape == (21, 4)
    result = runner.invoke(cli.main, ["spectrum", "--manifold", "3"])
    assert result.exit_code == 2


def test_cli_validate_prints_resolved_config(runner, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("preset: fig6\nworkers: 2\n", encoding="utf-8")
    result = runner.invoke(cli.main, ["validate", "--config", str(path)])
    assert result.exit_code == 0, result.output
    resolved = yaml.safe_load(result.output)
    assert resolved["workers"] == 2
    assert resolved["params"]["pc_over_2pi"] == 0.5
    assert config_from_dict(resolved) == dataclasses.replace(
        config_from_dict({"preset": "fig6"}), workers=2)


def test_cli_version(runner):
    result = runner.invoke(cli.main, ["--version"])
    assert result.exit_code == 0
    assert "dotcavity" in result.output
