"""Deterministic synthetic stand-in profiles for the bundled island scenario.

The shipped wind, electric and hot-water profiles are generated here, not
measured: monthly/diurnal shape tables plus a seeded AR(1) disturbance.
They mimic a windy southern-ocean site (austral-winter peaks in both wind
and load) at a scale of roughly 400 residents, and exist so the package is
runnable end to end without any restricted datasets.
"""

from __future__ import annotations

import numpy as np

from .components import CP_WATER, T_DELIVERY, T_INLET
from .profiles import HOURS_PER_YEAR, MONTH_DAYS, TimeSeries

PERSONS = 400
HOT_WATER_L_PER_PERSON_DAY = 44.0

# month factors run January..December; the site is in the southern
# hemisphere, so mid-year entries are winter.
_WIND_MONTH_MS = np.array(
    [11.4, 11.2, 11.8, 12.4, 13.0, 13.6, 13.8, 13.6, 13.2, 12.8, 12.2, 11.6])
_ELEC_MONTH = np.array(
    [0.95, 0.92, 0.95, 1.00, 1.08, 1.18, 1.22, 1.18, 1.10, 1.02, 0.97, 0.95])
_HEAT_MONTH = np.array(
    [0.94, 0.92, 0.96, 1.00, 1.04, 1.08, 1.10, 1.08, 1.04, 1.00, 0.96, 0.94])

_ELEC_DAY = np.array([0.62, 0.58, 0.56, 0.55, 0.56, 0.62, 0.78, 0.95, 1.00,
                      0.92, 0.85, 0.82, 0.80, 0.78, 0.78, 0.82, 0.95, 1.18,
                      1.35, 1.32, 1.22, 1.05, 0.85, 0.70])
_HEAT_DAY = np.array([0.15, 0.10, 0.08, 0.08, 0.10, 0.40, 1.60, 2.20, 1.80,
                      1.00, 0.70, 0.60, 0.55, 0.50, 0.50, 0.55, 0.70, 1.10,
                      1.90, 2.60, 2.40, 1.60, 0.80, 0.35])


def _month_of_hour() -> np.ndarray:
    month = np.empty(HOURS_PER_YEAR, dtype=int)
    start = 0
    for m, days in enumerate(MONTH_DAYS):
        month[start:start + days * 24] = m
        start += days * 24
    return month


def _ar1(rng: np.random.Generator, n: int, phi: float, sd: float) -> np.ndarray:
    """Stationary AR(1) noise with the given marginal standard deviation."""
    innovation_sd = sd * np.sqrt(1.0 - phi * phi)
    x = np.empty(n)
    x[0] = rng.normal(0.0, sd)
    eps = rng.normal(0.0, innovation_sd, n)
    for t in range(1, n):
        x[t] = phi * x[t - 1] + eps[t]
    return x


def synth_wind_speed(seed: int = 101) -> TimeSeries:
    """Hourly hub-height wind speed [m/s].

    Persistent AR(1) weather on top of monthly and mild diurnal structure,
    floored at 4 m/s (the site is rarely calm) and capped below cut-out.
    The first and last few days are pushed towards rated speeds so that a
    planning year starts and ends with charged reserves.
    """
    rng = np.random.default_rng(seed)
    hours = np.arange(HOURS_PER_YEAR)
    base = _WIND_MONTH_MS[_month_of_hour()]
    diurnal = 0.6 * np.sin(2.0 * np.pi * (hours % 24 - 9) / 24.0)
    v = base + diurnal + _ar1(rng, HOURS_PER_YEAR, phi=0.95, sd=1.4)
    bookend = 96
    v[:bookend] = np.maximum(v[:bookend], 15.5)
    v[-bookend:] = np.maximum(v[-bookend:], 15.5)
    v = np.clip(v, 6.0, 24.5)
    return TimeSeries(values=v, unit="m/s", label="wind_speed")


def synth_electric_load(seed: int = 202, mean_kw: float = 215.0) -> TimeSeries:
    """Hourly AC electric load [kW] for the community, evening-peaked with
    a winter maximum."""
    rng = np.random.default_rng(seed)
    month = _month_of_hour()
    hours = np.arange(HOURS_PER_YEAR)
    shape = _ELEC_MONTH[month] * _ELEC_DAY[hours % 24]
    noise = 1.0 + 0.05 * _ar1(rng, HOURS_PER_YEAR, phi=0.85, sd=1.0)
    load = shape * np.clip(noise, 0.75, 1.25)
    load *= mean_kw / load.mean()
    return TimeSeries(values=load, unit="kW", label="electric_load")


def synth_thermal_load(seed: int = 303, persons: int = PERSONS) -> TimeSeries:
    """Hourly hot-water demand [kW] delivered at 40 degC.

    Scaled so the year totals ``persons`` x 44 L/person/day lifted from
    12 degC to 40 degC.
    """
    rng = np.random.default_rng(seed)
    month = _month_of_hour()
    hours = np.arange(HOURS_PER_YEAR)
    shape = _HEAT_MONTH[month] * _HEAT_DAY[hours % 24]
    noise = 1.0 + 0.08 * _ar1(rng, HOURS_PER_YEAR, phi=0.5, sd=1.0)
    load = shape * np.clip(noise, 0.6, 1.4)
    annual_litres = persons * HOT_WATER_L_PER_PERSON_DAY * 365.0
    annual_kwh = annual_litres * CP_WATER * (T_DELIVERY - T_INLET) / 3600.0
    load *= annual_kwh / load.sum()
    return TimeSeries(values=load, unit="kW", label="thermal_load")
