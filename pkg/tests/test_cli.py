"""Command-line workflow tests on a small self-contained scenario."""

import numpy as np
import pytest
import yaml

from mgsizer.cli import main
from mgsizer.dispatch import DesignVector
from mgsizer.optimizer import PsoParams
from mgsizer.profiles import (HOURS_PER_YEAR, TimeSeries, load_hourly_series,
                              write_hourly_series)
from mgsizer.scenario import (ScenarioConfig, config_from_dict, config_to_dict,
                              load_config, load_design, save_config, save_design)


@pytest.fixture()
def small_scenario_dir(tmp_path):
    """A full-year scenario with flat profiles and a tiny swarm, so CLI runs
    finish quickly."""
    t = np.arange(HOURS_PER_YEAR)
    wind = np.clip(12.0 + 4.0 * np.sin(2 * np.pi * t / 36.0), 4.0, 24.0)
    write_hourly_series(TimeSeries(values=wind, unit="m/s", label="wind"),
                        tmp_path / "wind.csv")
    write_hourly_series(TimeSeries(values=np.full(HOURS_PER_YEAR, 90.0),
                                   unit="kW", label="elec"),
                        tmp_path / "electric.csv")
    write_hourly_series(TimeSeries(values=np.full(HOURS_PER_YEAR, 10.0),
                                   unit="kW", label="heat"),
                        tmp_path / "thermal.csv")
    cfg = ScenarioConfig(
        profile_paths={"wind": "wind.csv", "electric": "electric.csv",
                       "thermal": "thermal.csv"},
        pso=PsoParams(population=6, max_iterations=8, seed=3),
    )
    save_config(cfg, tmp_path / "scenario.yaml")
    design = DesignVector(n_wt=4, n_sc_modules=500, n_battery_packs=10,
                          electrolyser_kw=300.0, h2_tank_kg=200.0,
                          fuel_cell_kw=150.0, heat_exchanger_kw=60.0,
                          hot_water_tank_l=20_000.0, inline_heater_kw=40.0,
                          h2_station_kg_per_h=10.0, inverter_kw=200.0)
    save_design(design, tmp_path / "design.yaml")
    return tmp_path


def test_simulate_writes_reports(small_scenario_dir, capsys):
    out = small_scenario_dir / "out"
    rc = main(["simulate", "--config", str(small_scenario_dir / "scenario.yaml"),
               "--design", str(small_scenario_dir / "design.yaml"),
               "--out", str(out)])
    assert rc == 0
    for name in ("dispatch.csv", "lpsp_summary.csv", "cost_report.csv",
                 "monthly_mean_wind.csv", "monthly_mean_electric.csv",
                 "monthly_mean_thermal.csv"):
        assert (out / name).exists(), name
    lines = (out / "dispatch.csv").read_text().splitlines()
    data_rows = [ln for ln in lines if ln and not ln.startswith("#")]
    assert len(data_rows) == HOURS_PER_YEAR + 1  # header + hours
    header = data_rows[0].split(",")
    assert header[0] == "hour" and "p_wt" in header
    monthly = (out / "monthly_mean_wind.csv").read_text().splitlines()
    assert len(monthly) == 13  # header + 12 months


def test_simulate_missing_profile_names_path(small_scenario_dir, capsys):
    (small_scenario_dir / "wind.csv").unlink()
    rc = main(["simulate", "--config", str(small_scenario_dir / "scenario.yaml"),
               "--design", str(small_scenario_dir / "design.yaml"),
               "--out", str(small_scenario_dir / "out")])
    assert rc == 2
    assert "wind.csv" in capsys.readouterr().err


def test_simulate_design_outside_bounds_fails_fast(small_scenario_dir, capsys):
    design = load_design(small_scenario_dir / "design.yaml")
    import dataclasses
    bad = dataclasses.replace(design, n_wt=500)  # above the default upper bound
    save_design(bad, small_scenario_dir / "bad.yaml")
    rc = main(["simulate", "--config", str(small_scenario_dir / "scenario.yaml"),
               "--design", str(small_scenario_dir / "bad.yaml"),
               "--out", str(small_scenario_dir / "out")])
    assert rc == 2
    assert "bounds" in capsys.readouterr().err


def test_optimize_deterministic_output(small_scenario_dir):
    cfg_path = str(small_scenario_dir / "scenario.yaml")
    out1 = small_scenario_dir / "o1"
    out2 = small_scenario_dir / "o2"
    assert main(["optimize", "--config", cfg_path, "--out", str(out1)]) == 0
    assert main(["optimize", "--config", cfg_path, "--out", str(out2)]) == 0
    b1 = (out1 / "best_design.yaml").read_bytes()
    b2 = (out2 / "best_design.yaml").read_bytes()
    assert b1 == b2
    trace = (out1 / "convergence_trace.csv").read_text().splitlines()
    assert trace[0] == "iteration,best_penalized"
    values = [float(ln.split(",")[1]) for ln in trace[1:]]
    assert len(values) == 8 + 1
    assert all(b <= a + 1e-9 for a, b in zip(values, values[1:]))
    # the best design re-parses and simulates
    best = load_design(out1 / "best_design.yaml")
    assert isinstance(best, DesignVector)
    assert (out1 / "dispatch.csv").exists()


def test_optimize_seed_override_changes_result(small_scenario_dir):
    cfg_path = str(small_scenario_dir / "scenario.yaml")
    out1 = small_scenario_dir / "s1"
    out2 = small_scenario_dir / "s2"
    assert main(["optimize", "--config", cfg_path, "--out", str(out1)]) == 0
    assert main(["optimize", "--config", cfg_path, "--seed", "99",
                 "--out", str(out2)]) == 0
    t1 = (out1 / "convergence_trace.csv").read_text()
    t2 = (out2 / "convergence_trace.csv").read_text()
    assert t1 != t2


def test_optimize_rejects_population_of_one(small_scenario_dir, capsys):
    cfg_path = small_scenario_dir / "scenario.yaml"
    data = yaml.safe_load(cfg_path.read_text())
    data["pso"]["population"] = 1
    cfg_path.write_text(yaml.safe_dump(data))
    rc = main(["optimize", "--config", str(cfg_path),
               "--out", str(small_scenario_dir / "out")])
    assert rc == 2


def test_synth_h2_profile_round_trips(small_scenario_dir):
    out = small_scenario_dir / "h2.csv"
    rc = main(["synth-h2", "--config", str(small_scenario_dir / "scenario.yaml"),
               "--out", str(out)])
    assert rc == 0
    series = load_hourly_series(out, "kg/h")
    assert series.values.sum() == pytest.approx(136.39625 * 365, rel=1e-6)


def test_report_recomputes_from_saved_dispatch(small_scenario_dir):
    cfg = str(small_scenario_dir / "scenario.yaml")
    design = str(small_scenario_dir / "design.yaml")
    sim_out = small_scenario_dir / "sim"
    rep_out = small_scenario_dir / "rep"
    assert main(["simulate", "--config", cfg, "--design", design,
                 "--out", str(sim_out)]) == 0
    assert main(["report", "--config", cfg, "--design", design,
                 "--dispatch", str(sim_out / "dispatch.csv"),
                 "--out", str(rep_out)]) == 0
    assert (rep_out / "cost_report.csv").read_text() == \
        (sim_out / "cost_report.csv").read_text()
    assert (rep_out / "lpsp_summary.csv").read_text() == \
        (sim_out / "lpsp_summary.csv").read_text()


def test_missing_config_exit_code(tmp_path, capsys):
    rc = main(["simulate", "--config", str(tmp_path / "nope.yaml"),
               "--design", str(tmp_path / "d.yaml"), "--out", str(tmp_path)])
    assert rc == 2


def test_config_round_trip(small_scenario_dir):
    cfg = load_config(small_scenario_dir / "scenario.yaml")
    again = config_from_dict(config_to_dict(cfg))
    assert again == cfg
