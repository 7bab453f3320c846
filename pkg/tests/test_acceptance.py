"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest -s tests/test_acceptance.py`` to see them).
"""

import time

import numpy as np
import pytest

from conftest import (TOY_STRATEGY, random_design, random_profiles, toy_bounds,
                      toy_design, toy_profiles)
from mgsizer.cli import main
from mgsizer.components import (HHV_H2, fc_outputs, hot_water_power, wt_power)
from mgsizer.dispatch import (energy_ledger, lowpass_decompose, lpsp,
                              simulate_year)
from mgsizer.economics import (EconomicParams, component_npc, crf,
                               default_component_specs, total_npc)
from mgsizer.optimizer import (PsoParams, Scenario, evaluate_fitness,
                               grid_search_oracle, pso_optimize)
from mgsizer.profiles import TimeSeries, write_hourly_series
from mgsizer.scenario import (bundled_config_path, load_config,
                              reference_design)

PUBLISHED_TOTAL_NPC = 7_961_243.0


def _report(criterion, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_1_component_point_checks():
    """Device-model and discounting point values, exact to 1e-6, under 1 s."""
    t0 = time.perf_counter()
    checks = [
        ("wt_power(15)", wt_power(15.0), 100.0),
        ("wt_power(9)", wt_power(9.0), 12.5),
        ("fc_outputs(100).electric", fc_outputs(100.0)[0], 50.0),
        ("fc_outputs(100).heat", fc_outputs(100.0)[1], 26.0),
        ("hot_water_power(1000, 52)", hot_water_power(1000.0, 52.0),
         1000.0 * 4.19 * 0.96 * 40.0 / 3600.0),
        ("crf(0.06, 20)", crf(0.06, 20), 0.0871846),
    ]
    worst = max(abs(got - want) for _, got, want in checks)
    elapsed = time.perf_counter() - t0
    _report(1, worst <= 1e-6 and elapsed < 1.0,
            f"max abs error {worst:.2e}, runtime {elapsed:.3f} s")


def test_criterion_2_conservation_suite():
    """200 randomized week-long scenarios: hourly bus balance to 1e-6 kW,
    annual ledger to 1e-3 kWh, hydrogen mass to 1e-9 kg, storage bounds
    respected; under 30 s."""
    rng = np.random.default_rng(20_240_501)
    t0 = time.perf_counter()
    worst_balance = worst_ledger = worst_mass = 0.0
    bounds_ok = True
    for _ in range(200):
        profiles = random_profiles(rng)
        result = simulate_year(random_design(rng), profiles)
        supply = (result.p_wt + result.battery_discharge + result.sc_discharge
                  + result.p_fc_e)
        use = (result.dc_served + result.battery_charge + result.sc_charge
               + result.p_electrolyser + result.p_heater + result.p_dump)
        worst_balance = max(worst_balance, float(np.max(np.abs(supply - use))))
        worst_ledger = max(worst_ledger,
                           abs(energy_ledger(result)["residual_kwh"]))
        eff = result.system.efficiency
        mass_flux = (result.p_electrolyser.sum() * eff.electrolyser
                     - (result.p_tank_to_fc.sum()
                        + result.p_tank_to_station.sum()) / eff.h2_tank) / HHV_H2
        worst_mass = max(worst_mass, abs(result.tank_mass[-1]
                                         - result.tank_initial_kg - mass_flux))
        eps = 1e-9
        lo_b, hi_b = result.system.battery_soc
        lo_s, hi_s = result.system.sc_soc
        if result.battery_capacity_kwh > 0 and (
                result.battery_energy.min() < lo_b * result.battery_capacity_kwh - eps
                or result.battery_energy.max() > hi_b * result.battery_capacity_kwh + eps):
            bounds_ok = False
        if result.sc_capacity_kwh > 0 and (
                result.sc_energy.min() < lo_s * result.sc_capacity_kwh - eps
                or result.sc_energy.max() > hi_s * result.sc_capacity_kwh + eps):
            bounds_ok = False
        if result.tank_mass.min() < -eps or \
                result.tank_mass.max() > result.tank_capacity_kg + eps:
            bounds_ok = False
    elapsed = time.perf_counter() - t0
    ok = (worst_balance <= 1e-6 and worst_ledger <= 1e-3
          and worst_mass <= 1e-9 and bounds_ok and elapsed < 30.0)
    _report(2, ok, f"balance {worst_balance:.2e} kW, ledger {worst_ledger:.2e} kWh, "
                   f"mass {worst_mass:.2e} kg, bounds {'ok' if bounds_ok else 'BAD'}, "
                   f"{elapsed:.1f} s")


def test_criterion_3_filter_reconstruction():
    """low + high == input to 1e-12 on 1000 random signals; width 1 is the
    identity."""
    rng = np.random.default_rng(33)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 500))
        x = rng.normal(0.0, 1000.0, n)
        w = int(rng.integers(1, 72))
        low, high = lowpass_decompose(x, w)
        worst = max(worst, float(np.max(np.abs(low + high - x))))
    x = rng.normal(0.0, 10.0, 200)
    low, high = lowpass_decompose(x, 1)
    identity_ok = np.array_equal(low, x) and np.all(high == 0.0)
    _report(3, worst <= 1e-12 and identity_ok,
            f"worst reconstruction error {worst:.2e}, identity {identity_ok}")


def test_criterion_4_lpsp_matches_count_oracle():
    """The index equals an independent per-hour counting loop exactly."""
    rng = np.random.default_rng(44)
    ok = True
    for _ in range(300):
        n = int(rng.integers(1, 2000))
        supplied = rng.uniform(0.0, 100.0, n)
        demanded = rng.uniform(0.0, 100.0, n)
        if rng.random() < 0.3:  # exercise exact ties
            demanded[: n // 2] = supplied[: n // 2]
        tol = 1e-6
        count = 0
        for s, d in zip(supplied, demanded):
            if s < d - tol:
                count += 1
        if lpsp(supplied, demanded, tol) != 100.0 * count / n:
            ok = False
    _report(4, ok, "exact agreement on 300 random pairs")


def test_criterion_5_economics_cashflow_oracle():
    """Every catalogue row at one unit matches an explicit year-by-year
    discounted cashflow recomputation to 1e-6 relative."""
    econ = EconomicParams()
    d, horizon = econ.discount_rate, econ.horizon_years
    worst = 0.0
    for key, spec in default_component_specs().items():
        total = spec.capital_cost
        for year in range(1, horizon + 1):
            total += spec.om_cost / (1.0 + d) ** year
        year = spec.lifetime_years
        last_install = 0
        while year < horizon:
            total += spec.replacement_cost / (1.0 + d) ** year
            last_install = year
            year += spec.lifetime_years
        remaining = spec.lifetime_years - (horizon - last_install)
        if remaining > 0:
            total -= (spec.replacement_cost * remaining / spec.lifetime_years
                      / (1.0 + d) ** horizon)
        got = component_npc(1.0, spec, econ)
        worst = max(worst, abs(got - total) / total)
    _report(5, worst <= 1e-6, f"worst relative error {worst:.2e}")


def test_criterion_6_pso_within_two_percent_of_oracle():
    """On the two-variable toy problem, PSO averaged over 10 seeds lands
    within 2% of the exhaustive grid optimum; each run under 60 s."""
    p = toy_profiles()
    scen = Scenario(wind=p["wind"], electric=p["electric"], thermal=p["thermal"],
                    h2=p["h2"], strategy=TOY_STRATEGY)

    def fitness(x):
        return evaluate_fitness(toy_design(int(round(x[0])), int(round(x[1]))),
                                scen)

    _, oracle_value, oracle_eval = grid_search_oracle(toy_bounds(), [1.0, 1.0],
                                                      fitness)
    values = []
    slowest = 0.0
    for seed in range(10):
        t0 = time.perf_counter()
        res = pso_optimize(toy_bounds(), PsoParams(seed=seed), fitness)
        slowest = max(slowest, time.perf_counter() - t0)
        values.append(res.best_value)
    ratio = float(np.mean(values)) / oracle_value
    ok = ratio <= 1.02 and slowest < 60.0 and oracle_eval.feasible
    _report(6, ok, f"seed-averaged PSO/oracle = {ratio:.5f}, slowest run "
                   f"{slowest:.1f} s, oracle feasible {oracle_eval.feasible}")


def test_criterion_7_optimize_determinism(tmp_path):
    """Two CLI optimize runs with one seed produce byte-identical
    best-design files."""
    from mgsizer.profiles import HOURS_PER_YEAR
    from mgsizer.scenario import ScenarioConfig, save_config

    t = np.arange(HOURS_PER_YEAR)
    wind = np.clip(12.0 + 4.0 * np.sin(2 * np.pi * t / 36.0), 4.0, 24.0)
    write_hourly_series(TimeSeries(values=wind, unit="m/s"), tmp_path / "w.csv")
    write_hourly_series(TimeSeries(values=np.full(HOURS_PER_YEAR, 80.0), unit="kW"),
                        tmp_path / "e.csv")
    write_hourly_series(TimeSeries(values=np.full(HOURS_PER_YEAR, 8.0), unit="kW"),
                        tmp_path / "t.csv")
    cfg = ScenarioConfig(profile_paths={"wind": "w.csv", "electric": "e.csv",
                                        "thermal": "t.csv"},
                         pso=PsoParams(population=6, max_iterations=6, seed=11))
    save_config(cfg, tmp_path / "scenario.yaml")
    rc1 = main(["optimize", "--config", str(tmp_path / "scenario.yaml"),
                "--out", str(tmp_path / "r1")])
    rc2 = main(["optimize", "--config", str(tmp_path / "scenario.yaml"),
                "--out", str(tmp_path / "r2")])
    identical = ((tmp_path / "r1" / "best_design.yaml").read_bytes()
                 == (tmp_path / "r2" / "best_design.yaml").read_bytes())
    _report(7, rc1 == 0 and rc2 == 0 and identical,
            f"exit codes {rc1}/{rc2}, byte-identical {identical}")


def test_criterion_8_island_scale_plausibility():
    """Bundled island scenario: the reference equipment mix costs within
    25% of the published US$7,961,243 system, and a full swarm run (45 x 300)
    reaches zero loss-of-supply on all three carriers at a cost no more than
    10% above that mix. Well under 30 minutes."""
    t0 = time.perf_counter()
    config_path = bundled_config_path()
    cfg = load_config(config_path)
    scenario = cfg.to_scenario(config_path.parent)

    ref = reference_design()
    ref_report = total_npc(ref, cfg.component_specs, cfg.econ)
    npc_ratio = ref_report.total_npc / PUBLISHED_TOTAL_NPC
    npc_ok = abs(npc_ratio - 1.0) <= 0.25

    res = pso_optimize(cfg.bounds(), cfg.pso,
                       lambda x: evaluate_fitness(x, scenario, cfg.targets))
    best = res.best_evaluation
    lpsp_ok = (best.lpsp_electric == 0.0 and best.lpsp_thermal == 0.0
               and best.lpsp_h2 == 0.0)
    cost_ok = best.npc <= 1.10 * ref_report.total_npc
    elapsed = time.perf_counter() - t0
    ok = npc_ok and lpsp_ok and cost_ok and elapsed < 1800.0
    _report(8, ok,
            f"reference NPC US${ref_report.total_npc:,.0f} "
            f"({npc_ratio:.3f}x published), best NPC US${best.npc:,.0f} "
            f"({best.npc / ref_report.total_npc:.3f}x reference), "
            f"LPSP {best.lpsp_electric}/{best.lpsp_thermal}/{best.lpsp_h2} %, "
            f"{elapsed:.0f} s")
