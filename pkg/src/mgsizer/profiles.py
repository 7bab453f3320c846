"""Hourly profile handling: file I/O, monthly statistics, and the synthetic
hydrogen demand imposed by a fuel-cell vehicle fleet.

All year-long series are hourly over a non-leap year (8760 values).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, LengthError

HOURS_PER_YEAR = 8760
DAYS_PER_YEAR = 365
MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
VALID_UNITS = ("kW", "m/s", "kg/h", "L/h")


@dataclass(eq=False)
class TimeSeries:
    """One year of hourly values with a unit tag.

    Invariants: exactly 8760 values, all finite and non-negative.
    """

    values: np.ndarray
    unit: str
    label: str = ""

    def __post_init__(self):
        if self.unit not in VALID_UNITS:
            raise ConfigError(f"unit must be one of {VALID_UNITS}, got {self.unit!r}")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (HOURS_PER_YEAR,):
            raise LengthError(
                f"series must hold {HOURS_PER_YEAR} hourly values, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("series contains NaN or infinite values")
        if values.min() < 0.0:
            raise ValueError("series contains negative values")
        self.values = values

    def __len__(self):
        return HOURS_PER_YEAR


@dataclass(frozen=True)
class UniformWindow:
    """Refuelling spread equally over the hour slots start..end (inclusive)."""

    start_hour: int
    end_hour: int

    def __post_init__(self):
        if not (0 <= self.start_hour < 24 and 0 <= self.end_hour < 24):
            raise ConfigError("window hours must lie in [0, 24)")
        if self.start_hour >= self.end_hour:
            raise ConfigError(
                f"empty refuel window: start {self.start_hour} >= end {self.end_hour}"
            )

    def hourly_weights(self) -> np.ndarray:
        w = np.zeros(24)
        w[self.start_hour:self.end_hour + 1] = 1.0
        return w / w.sum()


@dataclass(frozen=True)
class NormalWindow:
    """Refuelling following a normal density, truncated to start..end hours
    (inclusive) and renormalised. Weights are the density at hour-slot
    midpoints.
    """

    mean_hour: float
    sd_hours: float
    start_hour: int
    end_hour: int

    def __post_init__(self):
        if not (0 <= self.start_hour < 24 and 0 <= self.end_hour < 24):
            raise ConfigError("window hours must lie in [0, 24)")
        if self.start_hour >= self.end_hour:
            raise ConfigError(
                f"empty refuel window: start {self.start_hour} >= end {self.end_hour}"
            )
        if self.sd_hours <= 0.0:
            raise ConfigError("normal window needs sd_hours > 0")

    def hourly_weights(self) -> np.ndarray:
        w = np.zeros(24)
        hours = np.arange(self.start_hour, self.end_hour + 1)
        z = (hours + 0.5 - self.mean_hour) / self.sd_hours
        w[hours] = np.exp(-0.5 * z ** 2)
        return w / w.sum()


@dataclass(frozen=True)
class VehicleClass:
    """One class of fuel-cell vehicles served by the refuelling station."""

    name: str
    count: int
    tank_capacity_kg: float
    refuel_period_days: int
    window: UniformWindow | NormalWindow
    fill_fraction_low: float = 0.05
    fill_fraction_high: float = 1.0

    def __post_init__(self):
        if self.count < 0 or self.count != int(self.count):
            raise ConfigError(f"vehicle count must be a non-negative integer, got {self.count}")
        if self.tank_capacity_kg <= 0.0:
            raise ConfigError("tank capacity must be positive")
        if self.refuel_period_days < 1 or self.refuel_period_days != int(self.refuel_period_days):
            raise ConfigError("refuel period must be an integer number of days >= 1")
        if not 0.0 <= self.fill_fraction_low < self.fill_fraction_high <= 1.0:
            raise ConfigError(
                f"need 0 <= fill_low < fill_high <= 1, got "
                f"[{self.fill_fraction_low}, {self.fill_fraction_high}]"
            )

    def daily_mass_kg(self) -> float:
        """Average daily hydrogen demand of the class [kg/day]."""
        span = self.fill_fraction_high - self.fill_fraction_low
        return self.count * self.tank_capacity_kg * span / self.refuel_period_days


@dataclass(frozen=True)
class FleetSpec:
    """The whole vehicle fleet fuelled at the station."""

    classes: tuple[VehicleClass, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    def daily_mass_kg(self) -> float:
        return sum(c.daily_mass_kg() for c in self.classes)


def default_fleet() -> FleetSpec:
    """Bundled island fleet: ferries and heavy vehicles refuel in the small
    hours in a valley-filling pattern, light vehicles through the day.
    """
    morning = UniformWindow(1, 6)
    return FleetSpec(classes=(
        VehicleClass("ferries", 5, 31.7, 2, morning),
        VehicleClass("light_vehicles", 30, 1.5, 3, NormalWindow(14.5, 2.5, 9, 20)),
        VehicleClass("tractors", 5, 32.9, 4, morning),
        VehicleClass("trucks", 5, 8.2, 5, morning),
    ))


def _parse_value(token: str) -> float | None:
    try:
        return float(token)
    except ValueError:
        return None


def load_hourly_series(path, unit: str) -> TimeSeries:
    """Read one numeric value per line into a validated TimeSeries.

    A non-numeric first line is treated as a header and skipped. Decimal
    separator is always the dot, independent of locale. Reported row numbers
    are 1-based file line numbers.
    """
    path = Path(path)
    rows = [(i + 1, line.strip()) for i, line in enumerate(path.read_text().splitlines())
            if line.strip()]
    if rows and _parse_value(rows[0][1]) is None:
        rows = rows[1:]
    if len(rows) != HOURS_PER_YEAR:
        raise LengthError(
            f"{path}: expected {HOURS_PER_YEAR} records, found {len(rows)}"
        )
    values = np.empty(HOURS_PER_YEAR)
    for k, (lineno, token) in enumerate(rows):
        x = _parse_value(token)
        if x is None:
            raise ValueError(f"{path}: row {lineno}: not a number: {token!r}")
        if not math.isfinite(x) or x < 0.0:
            raise ValueError(f"{path}: row {lineno}: invalid value {token!r}")
        values[k] = x
    return TimeSeries(values=values, unit=unit, label=path.stem)


def write_hourly_series(series: TimeSeries, path) -> None:
    """Write a series in the same one-value-per-line format (with a header).
    Values use shortest-exact float formatting, so reading the file back
    reproduces the series bit for bit."""
    path = Path(path)
    lines = [f"# {series.label or 'series'} [{series.unit}]"]
    lines += [repr(v) for v in series.values.tolist()]
    path.write_text("\n".join(lines) + "\n")


def monthly_mean_daily_profile(series: TimeSeries) -> np.ndarray:
    """12 x 24 matrix: entry (m, h) is the mean over all days of month m at
    hour-of-day h. Months follow the Gregorian non-leap calendar starting
    1 January, hour 0.
    """
    days = series.values.reshape(DAYS_PER_YEAR, 24)
    out = np.empty((12, 24))
    start = 0
    for m, ndays in enumerate(MONTH_DAYS):
        out[m] = days[start:start + ndays].mean(axis=0)
        start += ndays
    return out


def synthesize_h2_load(fleet: FleetSpec) -> TimeSeries:
    """Hourly hydrogen demand [kg/h] implied by the fleet assumptions.

    Each class contributes its average daily mass, spread over its refuel
    window; the same daily pattern repeats for all 365 days, so the annual
    total equals 365 times the summed daily class demands.
    """
    daily = np.zeros(24)
    for cls in fleet.classes:
        if cls.count == 0:
            continue
        daily += cls.daily_mass_kg() * cls.window.hourly_weights()
    return TimeSeries(values=np.tile(daily, DAYS_PER_YEAR), unit="kg/h",
                      label="h2_fleet_demand")
