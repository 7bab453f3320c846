"""Shared test fixtures: small deterministic scenarios and random-scenario
generators used by the property and acceptance suites."""

import numpy as np
import pytest

from mgsizer.dispatch import DesignVector, StrategyParams
from mgsizer.optimizer import Bounds, Scenario

TOY_HOURS = 168

# Sizes held fixed while the toy search varies turbine count and battery
# packs. Generous enough that reliability hinges on the searched pair.
TOY_FIXED = dict(
    n_sc_modules=1000,
    electrolyser_kw=800.0,
    h2_tank_kg=400.0,
    fuel_cell_kw=250.0,
    heat_exchanger_kw=80.0,
    hot_water_tank_l=60_000.0,
    inline_heater_kw=60.0,
    h2_station_kg_per_h=12.0,
    inverter_kw=320.0,
)

TOY_STRATEGY = StrategyParams(filter1_window_h=12, filter2_window_h=3,
                              initial_soc_battery=1.0, initial_soc_sc=1.0,
                              initial_soc_h2=1.0, initial_tank_temp_c=60.0)


def toy_profiles() -> dict:
    """One deterministic week: windy and calm spells, daily load cycles.
    During calm evening peaks the fixed fuel cell alone cannot carry the
    load, so turbine count and battery packs trade off along a frontier.
    The week ends windy so the stores return to full and the cyclical-state
    constraint is satisfiable."""
    t = np.arange(TOY_HOURS)
    wind = 11.5 + 5.0 * np.sin(2 * np.pi * t / 36.0) + 1.0 * np.sin(2 * np.pi * t / 13.0)
    wind[-12:] = np.maximum(wind[-12:], 16.0)
    wind = np.clip(wind, 3.0, 24.0)
    electric = 160.0 + 70.0 * np.sin(2 * np.pi * (t % 24 - 12) / 24.0) ** 2 \
        + 15.0 * np.sin(2 * np.pi * t / 7.3)
    thermal = np.clip(8.0 + 6.0 * np.sin(2 * np.pi * (t % 24 - 7) / 24.0), 1.0, None)
    h2 = np.zeros(TOY_HOURS)
    h2[(t % 24 >= 1) & (t % 24 <= 6)] = 5.0
    return {"wind": wind, "electric": electric, "thermal": thermal, "h2": h2}


def toy_design(n_wt: int, n_battery_packs: int) -> DesignVector:
    return DesignVector(n_wt=int(n_wt), n_battery_packs=int(n_battery_packs),
                        **TOY_FIXED)


@pytest.fixture(scope="session")
def toy_scenario() -> Scenario:
    p = toy_profiles()
    return Scenario(wind=p["wind"], electric=p["electric"], thermal=p["thermal"],
                    h2=p["h2"], strategy=TOY_STRATEGY)


def toy_bounds() -> Bounds:
    return Bounds(lower=np.zeros(2), upper=np.array([15.0, 60.0]),
                  integer_mask=np.array([True, True]))


def random_profiles(rng: np.random.Generator, n: int = 168) -> dict:
    return {
        "wind": np.clip(rng.uniform(3, 20, n) + 4 * np.sin(np.arange(n) / 24), 0, 24),
        "electric": rng.uniform(50, 300, n),
        "thermal": rng.uniform(0, 40, n),
        "h2": rng.uniform(0, 8, n),
    }


def random_design(rng: np.random.Generator) -> DesignVector:
    return DesignVector(
        n_wt=int(rng.integers(0, 30)),
        n_sc_modules=int(rng.integers(0, 8000)),
        n_battery_packs=int(rng.integers(0, 40)),
        electrolyser_kw=float(rng.uniform(0, 800)),
        h2_tank_kg=float(rng.uniform(0, 500)),
        fuel_cell_kw=float(rng.uniform(0, 400)),
        heat_exchanger_kw=float(rng.uniform(0, 200)),
        hot_water_tank_l=float(rng.uniform(0, 2e5)),
        inline_heater_kw=float(rng.uniform(0, 100)),
        h2_station_kg_per_h=float(rng.uniform(0, 20)),
        inverter_kw=float(rng.uniform(0, 700)),
    )
