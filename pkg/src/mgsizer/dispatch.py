"""Hourly dispatch simulation of the islanded multi-carrier grid.

The operating strategy is cycle-charging driven by a two-stage low-pass
split of the wind/demand mismatch: the slow component goes to the hydrogen
path (electrolyser or fuel cell), the mid band to the battery bank and the
fast remainder to the super-capacitor bank. Infeasible remainders cascade
to the faster stores, then to the inline water heater, then to the dump
resistor; deficits fall back on the other stores and finally load shedding.

The per-hour flows always satisfy the DC-bus balance

    p_wt + p_dch + p_fc_e = dc_served + p_ch + p_electrolyser
                            + p_heater + p_dump

which ``check_power_balance`` verifies after the fact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .components import (CP_WATER, HHV_H2, T_DELIVERY, T_INLET, T_TANK_MAX,
                         EfficiencySpec, WindTurbineSpec)
from .errors import ConfigError

BATTERY_PACK_KWH = 7.5      # energy per battery pack
SC_MODULE_KWH = 3.23e-3     # energy per super-capacitor module (3.23 Wh)

DESIGN_FIELDS = (
    "n_wt", "n_sc_modules", "n_battery_packs", "electrolyser_kw",
    "h2_tank_kg", "fuel_cell_kw", "heat_exchanger_kw", "hot_water_tank_l",
    "inline_heater_kw", "h2_station_kg_per_h", "inverter_kw",
)

_INTEGER_FIELDS = ("n_wt", "n_sc_modules", "n_battery_packs")


@dataclass(frozen=True)
class DesignVector:
    """The eleven sizing decision variables."""

    n_wt: int = 0                     # 100 kW turbine units
    n_sc_modules: int = 0             # 3.23 Wh modules
    n_battery_packs: int = 0          # 7.5 kWh packs
    electrolyser_kw: float = 0.0
    h2_tank_kg: float = 0.0
    fuel_cell_kw: float = 0.0         # electric rating
    heat_exchanger_kw: float = 0.0
    hot_water_tank_l: float = 0.0
    inline_heater_kw: float = 0.0
    h2_station_kg_per_h: float = 0.0  # delivered hydrogen
    inverter_kw: float = 0.0          # AC-side rating

    def __post_init__(self):
        for name in DESIGN_FIELDS:
            value = getattr(self, name)
            if value < 0:
                raise ConfigError(f"{name} must be non-negative, got {value}")
            if name in _INTEGER_FIELDS and value != int(value):
                raise ConfigError(f"{name} must be an integer, got {value}")

    def to_array(self) -> np.ndarray:
        return np.array([float(getattr(self, f)) for f in DESIGN_FIELDS])

    @classmethod
    def from_array(cls, x) -> "DesignVector":
        x = np.asarray(x, dtype=float)
        if x.shape != (len(DESIGN_FIELDS),):
            raise ConfigError(f"design vector needs {len(DESIGN_FIELDS)} entries")
        kwargs = dict(zip(DESIGN_FIELDS, x))
        for name in _INTEGER_FIELDS:
            kwargs[name] = int(round(kwargs[name]))
        return cls(**kwargs)

    def unit_counts(self) -> dict[str, float]:
        """Capacity per cost-catalogue key (unit counts or rated size)."""
        return {
            "wind_turbine": float(self.n_wt),
            "sc_module": float(self.n_sc_modules),
            "battery_pack": float(self.n_battery_packs),
            "electrolyser": self.electrolyser_kw,
            "h2_tank": self.h2_tank_kg,
            "fuel_cell": self.fuel_cell_kw,
            "heat_exchanger": self.heat_exchanger_kw,
            "hot_water_tank": self.hot_water_tank_l,
            "inline_heater": self.inline_heater_kw,
            "h2_station": self.h2_station_kg_per_h,
            "inverter": self.inverter_kw,
        }


@dataclass(frozen=True)
class StrategyParams:
    """Filter windows and initial storage levels for the dispatcher."""

    filter1_window_h: int = 24
    filter2_window_h: int = 4
    initial_soc_battery: float = 0.5   # fraction of the usable SOC range
    initial_soc_sc: float = 0.5
    initial_soc_h2: float = 0.5        # fraction of tank capacity window
    initial_tank_temp_c: float = 40.0

    def __post_init__(self):
        for name in ("filter1_window_h", "filter2_window_h"):
            w = getattr(self, name)
            if w < 1 or w != int(w):
                raise ConfigError(f"{name} must be an integer >= 1, got {w}")
        if self.filter2_window_h >= self.filter1_window_h:
            raise ConfigError("second filter window must be shorter than the first")
        for name in ("initial_soc_battery", "initial_soc_sc", "initial_soc_h2"):
            f = getattr(self, name)
            if not 0.0 <= f <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {f}")
        if not T_INLET <= self.initial_tank_temp_c <= T_TANK_MAX:
            raise ConfigError(
                f"initial tank temperature must lie in [{T_INLET}, {T_TANK_MAX}] degC"
            )


@dataclass(frozen=True)
class SystemSpecs:
    """Device parameters shared by every simulation of one scenario."""

    wind_turbine: WindTurbineSpec = field(default_factory=WindTurbineSpec)
    efficiency: EfficiencySpec = field(default_factory=EfficiencySpec)
    battery_soc: tuple[float, float] = (0.2, 1.0)
    sc_soc: tuple[float, float] = (0.05, 1.0)
    tank_soc: tuple[float, float] = (0.0, 1.0)
    # "discharge" applies the full hybrid round-trip loss on discharge (the
    # storage-balance equation as written); "split" uses sqrt(eta) each way.
    storage_loss_side: str = "discharge"

    def __post_init__(self):
        for name in ("battery_soc", "sc_soc", "tank_soc"):
            lo, hi = getattr(self, name)
            if not 0.0 <= lo <= hi <= 1.0:
                raise ConfigError(f"{name} must satisfy 0 <= lo <= hi <= 1")
        if self.storage_loss_side not in ("discharge", "split"):
            raise ConfigError("storage_loss_side must be 'discharge' or 'split'")


def lowpass_decompose(series, window_h: int) -> tuple[np.ndarray, np.ndarray]:
    """Split a signed sequence into a centred moving average and the rest.

    Edge windows are truncated to the available samples, so low + high
    reconstructs the input exactly for every window width; width 1 is the
    identity filter.
    """
    if window_h < 1 or window_h != int(window_h):
        raise ValueError(f"window must be an integer >= 1, got {window_h}")
    x = np.asarray(series, dtype=float)
    if window_h == 1:
        return x.copy(), np.zeros_like(x)
    n = x.shape[0]
    back = (window_h - 1) // 2
    fwd = window_h // 2
    csum = np.concatenate(([0.0], np.cumsum(x)))
    idx = np.arange(n)
    lo = np.maximum(idx - back, 0)
    hi = np.minimum(idx + fwd + 1, n)
    low = (csum[hi] - csum[lo]) / (hi - lo)
    high = x - low
    return low, high


def lpsp(supplied, demanded, tol: float = 1e-6) -> float:
    """Loss-of-supply probability [%]: share of hours with supply short of
    demand by more than ``tol``."""
    supplied = np.asarray(supplied, dtype=float)
    demanded = np.asarray(demanded, dtype=float)
    if supplied.shape != demanded.shape:
        raise ConfigError(
            f"supplied/demanded lengths differ: {supplied.shape} vs {demanded.shape}"
        )
    n = supplied.shape[0]
    deficient = int(np.count_nonzero(supplied < demanded - tol))
    return 100.0 * deficient / n


def _dispatch_core(p_wt, dc_demand, route_h2, route_b, route_s, thermal_kw,
                   h2_kgph,
                   b_cap, b_lo, b_hi, b_e0, b_eta_c, b_eta_d,
                   s_cap, s_lo, s_hi, s_e0, s_eta_c, s_eta_d,
                   tank_cap, tank_lo, tank_hi, tank_m0,
                   elz_kw, eta_elz, fc_kw, eta_fc, eta_tank,
                   fc_heat_ratio, fc_rec_share, eta_hx, hx_kw,
                   water_mass, temp0, t_in, t_max, t_demand, cp, eta_hw,
                   eta_heater, heater_kw, station_kgph, eta_station, hhv, dt):
    """Hour loop over precomputed routed flows. Plain scalar arithmetic so
    the same source compiles under numba.

    Per-store flows are tracked as one net bus-side value per hour, which
    nets opposing requests (a discharge request against a store that is
    charging first cancels pending charge), so no store both charges and
    discharges within an hour.
    """
    n = p_wt.shape[0]
    o_elz = np.zeros(n)
    o_fc = np.zeros(n)
    o_fc_heater = np.zeros(n)
    o_hx = np.zeros(n)
    o_bch = np.zeros(n)
    o_bdch = np.zeros(n)
    o_sch = np.zeros(n)
    o_sdch = np.zeros(n)
    o_heater = np.zeros(n)
    o_heater_sur = np.zeros(n)
    o_dump = np.zeros(n)
    o_shed = np.zeros(n)
    o_th_served = np.zeros(n)
    o_th_unmet = np.zeros(n)
    o_litres = np.zeros(n)
    o_th_dump = np.zeros(n)
    o_h2_served = np.zeros(n)
    o_station_kw = np.zeros(n)
    o_eb = np.zeros(n)
    o_es = np.zeros(n)
    o_mass = np.zeros(n)
    o_temp = np.zeros(n)

    eb = b_e0
    es = s_e0
    m = tank_m0
    temp = temp0 if water_mass > 0.0 else t_in

    for t in range(n):
        mis = p_wt[t] - dc_demand[t]
        rh = route_h2[t]
        rb = route_b[t]
        rs = route_s[t]

        # per-hour net-flow envelopes [kW on the bus, + = charging]
        b_cmax = (b_hi * b_cap - eb) / (dt * b_eta_c)
        if b_cmax < 0.0:
            b_cmax = 0.0
        b_dmax = (eb - b_lo * b_cap) * b_eta_d / dt
        if b_dmax < 0.0:
            b_dmax = 0.0
        s_cmax = (s_hi * s_cap - es) / (dt * s_eta_c)
        if s_cmax < 0.0:
            s_cmax = 0.0
        s_dmax = (es - s_lo * s_cap) * s_eta_d / dt
        if s_dmax < 0.0:
            s_dmax = 0.0
        fc_fuel_max = (m - tank_lo * tank_cap) * hhv * eta_tank * eta_fc / dt
        if fc_fuel_max < 0.0:
            fc_fuel_max = 0.0
        if fc_fuel_max > fc_kw:
            fc_fuel_max = fc_kw
        elz_space = (tank_hi * tank_cap - m) * hhv / (eta_elz * dt)
        if elz_space < 0.0:
            elz_space = 0.0

        fb = 0.0   # battery net flow
        fs = 0.0   # super-capacitor net flow
        p_elz = 0.0
        p_fc = 0.0
        pool = 0.0   # unabsorbed surplus awaiting heater/dump
        shed = 0.0

        # --- own-device assignment of the three routed flows
        rem_h_sur = 0.0
        rem_h_def = 0.0
        if rh > 0.0:
            wind_sur = mis if mis > 0.0 else 0.0
            p_elz = min(min(rh, elz_kw), min(elz_space, wind_sur))
            rem_h_sur = rh - p_elz
        elif rh < 0.0:
            p_fc = min(-rh, fc_fuel_max)
            rem_h_def = -rh - p_fc

        rem_b_sur = 0.0
        rem_b_def = 0.0
        if rb > 0.0:
            take = min(rb, b_cmax - fb)
            fb += take
            rem_b_sur = rb - take
        elif rb < 0.0:
            take = min(-rb, fb + b_dmax)
            fb -= take
            rem_b_def = -rb - take

        rem_s_sur = 0.0
        rem_s_def = 0.0
        if rs > 0.0:
            take = min(rs, s_cmax - fs)
            fs += take
            rem_s_sur = rs - take
        elif rs < 0.0:
            take = min(-rs, fs + s_dmax)
            fs -= take
            rem_s_def = -rs - take

        # --- surplus cascade: towards the faster stores, then the pool
        if rem_h_sur > 0.0:
            take = min(rem_h_sur, b_cmax - fb)
            fb += take
            rem_h_sur -= take
            take = min(rem_h_sur, s_cmax - fs)
            fs += take
            rem_h_sur -= take
            pool += rem_h_sur
        if rem_b_sur > 0.0:
            take = min(rem_b_sur, s_cmax - fs)
            fs += take
            rem_b_sur -= take
            pool += rem_b_sur
        pool += rem_s_sur

        # --- deficit cascade: other stores' discharge, then shedding.
        # The hydrogen path serves as the last store: pending electrolyser
        # charge is released first (redirecting wind surplus is lossless),
        # then extra fuel-cell dispatch.
        if rem_h_def > 0.0:
            take = min(rem_h_def, fb + b_dmax)
            fb -= take
            rem_h_def -= take
            take = min(rem_h_def, fs + s_dmax)
            fs -= take
            rem_h_def -= take
            shed += rem_h_def
        if rem_b_def > 0.0:
            take = min(rem_b_def, fs + s_dmax)
            fs -= take
            rem_b_def -= take
            take = min(rem_b_def, p_elz)
            p_elz -= take
            rem_b_def -= take
            take = min(rem_b_def, fc_fuel_max - p_fc)
            p_fc += take
            rem_b_def -= take
            shed += rem_b_def
        if rem_s_def > 0.0:
            take = min(rem_s_def, fb + b_dmax)
            fb -= take
            rem_s_def -= take
            take = min(rem_s_def, p_elz)
            p_elz -= take
            rem_s_def -= take
            take = min(rem_s_def, fc_fuel_max - p_fc)
            p_fc += take
            rem_s_def -= take
            shed += rem_s_def

        # --- reconciliation: the signed filter bands can be positive while
        # the bus as a whole is short (and vice versa), which would shed
        # load while charging, or dump while burning fuel. Serving load
        # outranks every storage use, so release surplus uses against any
        # shed; and surplus headed for the dump first displaces fuel-cell
        # output and store discharge.
        if shed > 0.0:
            take = min(shed, pool)
            pool -= take
            shed -= take
            take = min(shed, p_elz)
            p_elz -= take
            shed -= take
            if fs > 0.0:
                take = min(shed, fs)
                fs -= take
                shed -= take
            if fb > 0.0:
                take = min(shed, fb)
                fb -= take
                shed -= take
        if pool > 0.0 and p_fc > 0.0:
            take = min(pool, p_fc)
            p_fc -= take
            pool -= take

        # --- thermal path: recovered fuel-cell heat into the tank first
        rec1 = fc_rec_share * fc_heat_ratio * p_fc
        hx1 = eta_hx * rec1
        if hx1 > hx_kw:
            hx1 = hx_kw
        th_dump = rec1 - hx1 / eta_hx   # recoverable heat beyond exchanger rating
        if water_mass > 0.0:
            temp += hx1 * dt * 3600.0 / (water_mass * cp)
            if temp > t_max:
                th_dump += (temp - t_max) * water_mass * cp / (3600.0 * dt)
                temp = t_max
        else:
            th_dump += hx1

        dem_th = thermal_kw[t]
        tank_del = 0.0
        drawn = 0.0       # tank internal energy removed [kWh]
        need_el = 0.0     # heater electric input to reach delivery temp
        mdot = 0.0
        if dem_th > 0.0:
            mdot = dem_th * 3600.0 / (cp * (t_demand - t_in))   # [kg/h]
            t_eff = t_in + eta_hw * (temp - t_in)
            if t_eff >= t_demand:
                tank_del = dem_th
                drawn = dem_th * dt / eta_hw
            else:
                tank_del = mdot * cp * eta_hw * (temp - t_in) / 3600.0
                drawn = mdot * cp * (temp - t_in) * dt / 3600.0
                need_el = mdot * cp * (t_demand - t_eff) / 3600.0 / eta_heater
            if water_mass > 0.0 and drawn > 0.0:
                temp -= drawn * 3600.0 / (water_mass * cp)
                if temp < t_in:
                    temp = t_in

        # heater supply preference: leftover wind surplus, then the fuel cell
        ph_sur = min(min(need_el, pool), heater_kw)
        if ph_sur < 0.0:
            ph_sur = 0.0
        pool -= ph_sur
        need_rem = need_el - ph_sur
        fc_room = fc_fuel_max - p_fc
        if fc_room < 0.0:
            fc_room = 0.0
        ph_fc = min(min(need_rem, fc_room), heater_kw - ph_sur)
        if ph_fc < 0.0:
            ph_fc = 0.0
        p_fc += ph_fc
        p_heater = ph_sur + ph_fc

        served_th = tank_del + p_heater * eta_heater
        if served_th > dem_th:
            served_th = dem_th

        # heat recovered from the heater-driven fuel-cell output arrives
        # after this hour's draw (stored for the next hours)
        rec2 = fc_rec_share * fc_heat_ratio * ph_fc
        hx2 = eta_hx * rec2
        if hx2 > hx_kw - hx1:
            hx2 = hx_kw - hx1
        th_dump += rec2 - hx2 / eta_hx
        if water_mass > 0.0:
            temp += hx2 * dt * 3600.0 / (water_mass * cp)
            if temp > t_max:
                th_dump += (temp - t_max) * water_mass * cp / (3600.0 * dt)
                temp = t_max
        else:
            th_dump += hx2

        # leftover pool displaces store discharge before hitting the dump
        if pool > 0.0 and fs < 0.0:
            take = min(pool, -fs)
            fs += take
            pool -= take
        if pool > 0.0 and fb < 0.0:
            take = min(pool, -fb)
            fb += take
            pool -= take

        # --- hydrogen refuelling station, after fuel-cell draws commit
        mass_after_fc = m - (p_fc / eta_fc) * dt / (eta_tank * hhv)
        avail = mass_after_fc - tank_lo * tank_cap
        if avail < 0.0:
            avail = 0.0
        d_req = h2_kgph[t]
        d = min(min(d_req, station_kgph), avail * eta_tank * eta_station / dt)
        station_kw = d * hhv / eta_station

        # --- commit states
        if fb >= 0.0:
            eb += b_eta_c * fb * dt
        else:
            eb += fb * dt / b_eta_d
        if fs >= 0.0:
            es += s_eta_c * fs * dt
        else:
            es += fs * dt / s_eta_d
        m += (eta_elz * p_elz - (p_fc / eta_fc + station_kw) / eta_tank) * dt / hhv

        o_elz[t] = p_elz
        o_fc[t] = p_fc
        o_fc_heater[t] = ph_fc
        o_hx[t] = hx1 + hx2
        o_bch[t] = fb if fb > 0.0 else 0.0
        o_bdch[t] = -fb if fb < 0.0 else 0.0
        o_sch[t] = fs if fs > 0.0 else 0.0
        o_sdch[t] = -fs if fs < 0.0 else 0.0
        o_heater[t] = p_heater
        o_heater_sur[t] = ph_sur
        o_dump[t] = pool
        o_shed[t] = shed
        o_th_served[t] = served_th
        o_th_unmet[t] = dem_th - served_th if dem_th > served_th else 0.0
        if dem_th > 0.0:
            o_litres[t] = mdot * dt * (served_th / dem_th)
        o_th_dump[t] = th_dump
        o_h2_served[t] = d
        o_station_kw[t] = station_kw
        o_eb[t] = eb
        o_es[t] = es
        o_mass[t] = m
        o_temp[t] = temp

    return (o_elz, o_fc, o_fc_heater, o_hx, o_bch, o_bdch, o_sch, o_sdch,
            o_heater, o_heater_sur, o_dump, o_shed, o_th_served, o_th_unmet,
            o_litres, o_th_dump, o_h2_served, o_station_kw, o_eb, o_es,
            o_mass, o_temp)


try:  # pragma: no cover - exercised implicitly by every simulation
    from numba import njit

    _dispatch_core_fast = njit(cache=True)(_dispatch_core)
except ImportError:  # pragma: no cover
    _dispatch_core_fast = _dispatch_core


@dataclass
class DispatchResult:
    """All simulated hourly flows, state trajectories and the inputs needed
    to audit them."""

    dt: float
    system: SystemSpecs
    design: DesignVector | None

    # electric bus [kW]
    p_wt: np.ndarray
    electric_demand: np.ndarray      # AC load request
    dc_demand: np.ndarray            # inverter-capped demand seen by the bus
    dc_served: np.ndarray
    ac_served: np.ndarray
    unmet_electric: np.ndarray       # AC side
    p_electrolyser: np.ndarray
    p_fc_e: np.ndarray
    p_fc_heater: np.ndarray          # share of fuel-cell output driving the heater
    battery_charge: np.ndarray
    battery_discharge: np.ndarray
    sc_charge: np.ndarray
    sc_discharge: np.ndarray
    p_heater: np.ndarray
    p_heater_surplus: np.ndarray
    p_dump: np.ndarray
    shed_dc: np.ndarray

    # thermal [kW unless noted]
    fc_heat_recoverable: np.ndarray
    heat_to_tank: np.ndarray
    thermal_demand: np.ndarray
    thermal_served: np.ndarray
    unmet_thermal: np.ndarray
    litres_served: np.ndarray        # [L/h] delivered at 40 degC
    thermal_dump: np.ndarray

    # hydrogen
    h2_demand: np.ndarray            # [kg/h]
    h2_served: np.ndarray            # [kg/h]
    unmet_h2: np.ndarray             # [kg/h]
    p_tank_to_station: np.ndarray    # [kW] at the tank outlet
    p_tank_to_fc: np.ndarray         # [kW]

    # state trajectories (end of hour)
    battery_energy: np.ndarray       # [kWh]
    sc_energy: np.ndarray
    tank_mass: np.ndarray            # [kg]
    tank_temperature: np.ndarray     # [degC]

    # capacities and initial states
    battery_capacity_kwh: float
    sc_capacity_kwh: float
    tank_capacity_kg: float
    battery_initial_kwh: float
    sc_initial_kwh: float
    tank_initial_kg: float
    tank_initial_temp_c: float

    @property
    def n_hours(self) -> int:
        return self.p_wt.shape[0]

    def lpsp_electric(self, tol: float = 1e-6) -> float:
        return lpsp(self.ac_served, self.electric_demand, tol)

    def lpsp_thermal(self, tol: float = 1e-6) -> float:
        return lpsp(self.thermal_served, self.thermal_demand, tol)

    def lpsp_h2(self, tol: float = 1e-6) -> float:
        return lpsp(self.h2_served, self.h2_demand, tol)

    def summary(self) -> dict[str, float]:
        dt = self.dt
        return {
            "hours": float(self.n_hours),
            "wind_kwh": float(self.p_wt.sum() * dt),
            "electric_served_kwh": float(self.ac_served.sum() * dt),
            "electrolyser_kwh": float(self.p_electrolyser.sum() * dt),
            "fuel_cell_kwh": float(self.p_fc_e.sum() * dt),
            "heater_kwh": float(self.p_heater.sum() * dt),
            "dump_kwh": float(self.p_dump.sum() * dt),
            "thermal_served_kwh": float(self.thermal_served.sum() * dt),
            "hot_water_litres": float(self.litres_served.sum()),
            "h2_served_kg": float(self.h2_served.sum() * dt),
            "lpsp_electric_pct": self.lpsp_electric(),
            "lpsp_thermal_pct": self.lpsp_thermal(),
            "lpsp_h2_pct": self.lpsp_h2(),
        }

    _COLUMNS = (
        "p_wt", "electric_demand", "dc_demand", "dc_served", "ac_served",
        "unmet_electric", "p_electrolyser", "p_fc_e", "p_fc_heater",
        "battery_charge", "battery_discharge", "sc_charge", "sc_discharge",
        "p_heater", "p_heater_surplus", "p_dump", "shed_dc",
        "fc_heat_recoverable", "heat_to_tank", "thermal_demand",
        "thermal_served", "unmet_thermal", "litres_served", "thermal_dump",
        "h2_demand", "h2_served", "unmet_h2", "p_tank_to_station",
        "p_tank_to_fc", "battery_energy", "sc_energy", "tank_mass",
        "tank_temperature",
    )

    _META = (
        "dt", "battery_capacity_kwh", "sc_capacity_kwh", "tank_capacity_kg",
        "battery_initial_kwh", "sc_initial_kwh", "tank_initial_kg",
        "tank_initial_temp_c",
    )

    def to_csv(self, path) -> None:
        """Columnar text dump: comment header with the scalar metadata, then
        one labelled row per hour. Floats use shortest-exact formatting so a
        reloaded table reproduces the simulation bit for bit."""
        lines = [f"# {name}={getattr(self, name)!r}" for name in self._META]
        lines.append("hour," + ",".join(self._COLUMNS))
        data = np.column_stack([getattr(self, c) for c in self._COLUMNS])
        for t in range(self.n_hours):
            row = ",".join(repr(v) for v in data[t].tolist())
            lines.append(f"{t},{row}")
        Path(path).write_text("\n".join(lines) + "\n")


def read_dispatch_csv(path, system: SystemSpecs = SystemSpecs(),
                      design: DesignVector | None = None) -> DispatchResult:
    """Rebuild a DispatchResult from ``to_csv`` output."""
    meta: dict[str, float] = {}
    rows = []
    header = None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = float(value)
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    if header is None or not rows:
        raise ConfigError(f"{path}: no dispatch table found")
    data = np.asarray(rows)
    columns = {name: data[:, k] for k, name in enumerate(header)}
    missing = [m for m in DispatchResult._META if m not in meta]
    if missing:
        raise ConfigError(f"{path}: missing metadata {missing}")
    kwargs = {name: columns[name] for name in DispatchResult._COLUMNS}
    kwargs.update({name: meta[name] for name in DispatchResult._META})
    return DispatchResult(system=system, design=design, **kwargs)


def _as_array(profile) -> np.ndarray:
    values = getattr(profile, "values", profile)
    return np.ascontiguousarray(np.asarray(values, dtype=float))


def simulate_year(design: DesignVector, profiles, system: SystemSpecs = SystemSpecs(),
                  strategy: StrategyParams = StrategyParams(),
                  dt: float = 1.0) -> DispatchResult:
    """Run the dispatch over the profiles in ``profiles`` (mapping with keys
    ``wind`` [m/s], ``electric`` [kW AC], ``thermal`` [kW], ``h2`` [kg/h]).

    Profiles must share one length; a full year is 8760 hours but shorter
    horizons are accepted for studies and tests. Pure function of its
    inputs: any number of simulations may run concurrently.
    """
    wind = _as_array(profiles["wind"])
    electric = _as_array(profiles["electric"])
    thermal = _as_array(profiles["thermal"])
    h2 = _as_array(profiles["h2"])
    n = wind.shape[0]
    if n == 0:
        raise ConfigError("profiles are empty")
    for name, arr in (("electric", electric), ("thermal", thermal), ("h2", h2)):
        if arr.shape[0] != n:
            raise ConfigError(
                f"profile length mismatch: wind has {n} hours, {name} has {arr.shape[0]}"
            )

    eff = system.efficiency
    wt = system.wind_turbine
    ramp = ((np.clip(wind, wt.v_cut_in, wt.v_rated) - wt.v_cut_in)
            / (wt.v_rated - wt.v_cut_in)) ** 3
    unit_power = np.where((wind < wt.v_cut_in) | (wind > wt.v_cut_out),
                          0.0, wt.p_rated * np.minimum(ramp, 1.0))
    p_wt = design.n_wt * unit_power

    ac_deliverable = np.minimum(electric, design.inverter_kw)
    inverter_excess = electric - ac_deliverable
    dc_demand = ac_deliverable / eff.inverter

    mismatch = p_wt - dc_demand
    low_a, high_a = lowpass_decompose(mismatch, strategy.filter1_window_h)
    low_b, high_b = lowpass_decompose(high_a, strategy.filter2_window_h)

    b_cap = design.n_battery_packs * BATTERY_PACK_KWH
    s_cap = design.n_sc_modules * SC_MODULE_KWH
    b_lo, b_hi = system.battery_soc
    s_lo, s_hi = system.sc_soc
    t_lo, t_hi = system.tank_soc
    if system.storage_loss_side == "split":
        eta_c = eta_d = math.sqrt(eff.hybrid_storage)
    else:
        eta_c, eta_d = 1.0, eff.hybrid_storage

    b_e0 = (b_lo + strategy.initial_soc_battery * (b_hi - b_lo)) * b_cap
    s_e0 = (s_lo + strategy.initial_soc_sc * (s_hi - s_lo)) * s_cap
    m0 = (t_lo + strategy.initial_soc_h2 * (t_hi - t_lo)) * design.h2_tank_kg
    water_mass = design.hot_water_tank_l  # 1 kg per litre
    temp0 = strategy.initial_tank_temp_c if water_mass > 0.0 else T_INLET

    out = _dispatch_core_fast(
        p_wt, dc_demand, low_a, low_b, high_b, thermal, h2,
        b_cap, b_lo, b_hi, b_e0, eta_c, eta_d,
        s_cap, s_lo, s_hi, s_e0, eta_c, eta_d,
        design.h2_tank_kg, t_lo, t_hi, m0,
        design.electrolyser_kw, eff.electrolyser, design.fuel_cell_kw,
        eff.fuel_cell, eff.h2_tank, eff.fc_thermal_ratio, eff.fc_recoverable,
        eff.heat_exchanger, design.heat_exchanger_kw,
        water_mass, temp0, T_INLET, T_TANK_MAX, T_DELIVERY, CP_WATER,
        eff.hot_water_tank, eff.inline_heater, design.inline_heater_kw,
        design.h2_station_kg_per_h, eff.h2_station, HHV_H2, dt,
    )
    (o_elz, o_fc, o_fc_heater, o_hx, o_bch, o_bdch, o_sch, o_sdch, o_heater,
     o_heater_sur, o_dump, o_shed, o_th_served, o_th_unmet, o_litres,
     o_th_dump, o_h2_served, o_station_kw, o_eb, o_es, o_mass, o_temp) = out

    dc_served = dc_demand - o_shed
    ac_served = eff.inverter * dc_served
    unmet_electric = inverter_excess + o_shed * eff.inverter

    return DispatchResult(
        dt=dt, system=system, design=design,
        p_wt=p_wt, electric_demand=electric, dc_demand=dc_demand,
        dc_served=dc_served, ac_served=ac_served, unmet_electric=unmet_electric,
        p_electrolyser=o_elz, p_fc_e=o_fc, p_fc_heater=o_fc_heater,
        battery_charge=o_bch, battery_discharge=o_bdch,
        sc_charge=o_sch, sc_discharge=o_sdch,
        p_heater=o_heater, p_heater_surplus=o_heater_sur, p_dump=o_dump,
        shed_dc=o_shed,
        fc_heat_recoverable=eff.fc_recoverable * eff.fc_thermal_ratio * o_fc,
        heat_to_tank=o_hx, thermal_demand=thermal, thermal_served=o_th_served,
        unmet_thermal=o_th_unmet, litres_served=o_litres, thermal_dump=o_th_dump,
        h2_demand=h2, h2_served=o_h2_served,
        unmet_h2=h2 - o_h2_served, p_tank_to_station=o_station_kw,
        p_tank_to_fc=o_fc / eff.fuel_cell,
        battery_energy=o_eb, sc_energy=o_es, tank_mass=o_mass,
        tank_temperature=o_temp,
        battery_capacity_kwh=b_cap, sc_capacity_kwh=s_cap,
        tank_capacity_kg=design.h2_tank_kg,
        battery_initial_kwh=b_e0, sc_initial_kwh=s_e0, tank_initial_kg=m0,
        tank_initial_temp_c=temp0,
    )


def check_power_balance(result: DispatchResult, tol: float = 1e-6) -> bool:
    """True iff the DC-bus balance identity holds at every hour within tol [kW]."""
    supply = result.p_wt + result.battery_discharge + result.sc_discharge + result.p_fc_e
    use = (result.dc_served + result.battery_charge + result.sc_charge
           + result.p_electrolyser + result.p_heater + result.p_dump)
    return bool(np.max(np.abs(supply - use)) <= tol)


def cyclical_state_error(result: DispatchResult) -> dict[str, float]:
    """Relative end-versus-start deviation of each store, as a fraction of
    its capacity (zero for absent stores)."""

    def rel(final, initial, capacity):
        return abs(final - initial) / capacity if capacity > 0.0 else 0.0

    return {
        "sc": rel(result.sc_energy[-1], result.sc_initial_kwh,
                  result.sc_capacity_kwh),
        "battery": rel(result.battery_energy[-1], result.battery_initial_kwh,
                       result.battery_capacity_kwh),
        "h2_tank": rel(result.tank_mass[-1], result.tank_initial_kg,
                       result.tank_capacity_kg),
    }


def energy_ledger(result: DispatchResult) -> dict[str, float]:
    """Annual electric-side energy accounting [kWh].

    Wind generation ends up as served demand, storage level change plus
    storage losses, net hydrogen-path consumption, heater input and dump;
    ``residual`` is the closure error of that identity.
    """
    dt = result.dt
    eff = result.system.efficiency
    if result.system.storage_loss_side == "split":
        eta_c = eta_d = math.sqrt(eff.hybrid_storage)
    else:
        eta_c, eta_d = 1.0, eff.hybrid_storage

    def store_terms(charge, discharge, energy, initial):
        delta = float(energy[-1] - initial)
        loss = float(((1.0 - eta_c) * charge + discharge * (1.0 / eta_d - 1.0)).sum() * dt)
        return delta, loss

    b_delta, b_loss = store_terms(result.battery_charge, result.battery_discharge,
                                  result.battery_energy, result.battery_initial_kwh)
    s_delta, s_loss = store_terms(result.sc_charge, result.sc_discharge,
                                  result.sc_energy, result.sc_initial_kwh)
    wind = float(result.p_wt.sum() * dt)
    served = float(result.dc_served.sum() * dt)
    elz = float(result.p_electrolyser.sum() * dt)
    fc = float(result.p_fc_e.sum() * dt)
    heater = float(result.p_heater.sum() * dt)
    dump = float(result.p_dump.sum() * dt)
    residual = wind - (served + b_delta + b_loss + s_delta + s_loss
                       + (elz - fc) + heater + dump)
    return {
        "wind_kwh": wind,
        "dc_served_kwh": served,
        "battery_delta_kwh": b_delta,
        "battery_loss_kwh": b_loss,
        "sc_delta_kwh": s_delta,
        "sc_loss_kwh": s_loss,
        "electrolyser_kwh": elz,
        "fuel_cell_kwh": fc,
        "heater_kwh": heater,
        "dump_kwh": dump,
        "residual_kwh": residual,
    }
