"""Lifetime cost model: per-component net present cost, annualisation,
levelised costs per energy carrier, and standard project-finance metrics.

Component costs follow the usual engineering-economics conventions: capital
at year zero, replacements at every whole lifetime before the horizon,
O&M as a uniform annual series, and a linear-depreciation salvage credit
for life remaining at the end of the horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .components import HHV_H2
from .errors import ConfigError, IRRUndefined

# Component keys, in reporting order. Counts for the first three are unit
# counts; the rest are continuous capacities (kW, kg, L, kg/h).
COMPONENT_ORDER = (
    "wind_turbine", "sc_module", "battery_pack", "electrolyser", "h2_tank",
    "fuel_cell", "heat_exchanger", "hot_water_tank", "inline_heater",
    "h2_station", "inverter",
)


@dataclass(frozen=True)
class ComponentSpec:
    """Techno-economic record for one equipment type.

    Costs are US$ per unit of ``unit_size``; O&M is per unit per year.
    """

    name: str
    unit_size: str                 # e.g. "100 kW unit", "kW", "kg"
    capital_cost: float
    replacement_cost: float
    om_cost: float
    efficiency: float | None
    lifetime_years: int

    def __post_init__(self):
        if min(self.capital_cost, self.replacement_cost, self.om_cost) < 0.0:
            raise ConfigError(f"{self.name}: costs must be non-negative")
        if self.lifetime_years < 1 or self.lifetime_years != int(self.lifetime_years):
            raise ConfigError(f"{self.name}: lifetime must be an integer >= 1")


@dataclass(frozen=True)
class EconomicParams:
    discount_rate: float = 0.06   # real rate per annum
    horizon_years: int = 20       # project life span
    nz_per_us: float = 1.52       # currency conversion for levelised outputs

    def __post_init__(self):
        if self.discount_rate <= 0.0:
            raise ConfigError("discount rate must be positive")
        if self.horizon_years < 1:
            raise ConfigError("horizon must be at least one year")
        if self.nz_per_us <= 0.0:
            raise ConfigError("currency conversion must be positive")


@dataclass
class LevelizedCosts:
    """Levelised costs in NZ$. ``None`` flags an undefined figure (cost
    attributed to a carrier that served nothing)."""

    combined_per_kwh: float | None
    electricity_per_kwh: float | None
    hot_water_per_l: float | None
    hydrogen_per_kg: float | None


@dataclass
class CostReport:
    component_npc: dict[str, float]
    total_npc: float
    annualized: float
    levelized: LevelizedCosts | None = None


def default_component_specs() -> dict[str, ComponentSpec]:
    """Bundled equipment cost catalogue (US$)."""
    rows = {
        "wind_turbine": ComponentSpec("wind_turbine", "100 kW unit",
                                      120_000.0, 100_000.0, 4600.0, None, 20),
        "sc_module": ComponentSpec("sc_module", "3.23 Wh module",
                                   32.0, 32.0, 0.5, 0.95, 10),
        "battery_pack": ComponentSpec("battery_pack", "7.5 kWh pack",
                                      630.0, 600.0, 20.0, 0.90, 12),
        "electrolyser": ComponentSpec("electrolyser", "kW",
                                      1000.0, 1000.0, 20.0, 0.60, 15),
        "h2_tank": ComponentSpec("h2_tank", "kg",
                                 470.0, 470.0, 9.0, 0.98, 20),
        "fuel_cell": ComponentSpec("fuel_cell", "kW",
                                   1100.0, 900.0, 28.0, 0.50, 5),
        "heat_exchanger": ComponentSpec("heat_exchanger", "kW",
                                        100.0, 90.0, 2.0, 0.90, 15),
        "hot_water_tank": ComponentSpec("hot_water_tank", "L",
                                        0.5, 0.3, 0.0, 0.96, 15),
        "inline_heater": ComponentSpec("inline_heater", "kW",
                                       1000.0, 1000.0, 8.0, 0.97, 15),
        "h2_station": ComponentSpec("h2_station", "kg H2/h",
                                    6000.0, 5000.0, 180.0, 0.95, 20),
        "inverter": ComponentSpec("inverter", "kW",
                                  350.0, 300.0, 7.0, 0.90, 15),
    }
    return rows


def crf(d: float, r: int) -> float:
    """Capital recovery factor for rate ``d`` over ``r`` years."""
    if d <= 0.0 or r < 1:
        raise ValueError("need d > 0 and r >= 1")
    g = (1.0 + d) ** r
    return d * g / (g - 1.0)


def sppw(d: float, y: float) -> float:
    """Single payment present worth: discount factor for year ``y``."""
    if d <= 0.0 or y < 0:
        raise ValueError("need d > 0 and y >= 0")
    return (1.0 + d) ** -y


def replacement_years(lifetime: int, horizon: int) -> list[int]:
    """Years at which a component is replaced: whole lifetimes strictly
    before the end of the horizon."""
    if lifetime < 1:
        raise ValueError("lifetime must be >= 1")
    return list(range(lifetime, horizon, lifetime))


def salvage_value(spec: ComponentSpec, horizon: int, d: float) -> float:
    """Present-worth salvage credit per unit at the end of the horizon.

    Linear depreciation of the replacement cost over the life remaining in
    the most recently installed unit.
    """
    repl = replacement_years(spec.lifetime_years, horizon)
    last_install = repl[-1] if repl else 0
    remaining = spec.lifetime_years - (horizon - last_install)
    if remaining <= 0:
        return 0.0
    return spec.replacement_cost * (remaining / spec.lifetime_years) * sppw(d, horizon)


def component_npc(n_units: float, spec: ComponentSpec,
                  econ: EconomicParams = EconomicParams()) -> float:
    """Net present cost [$] of ``n_units`` of one component over the horizon."""
    if n_units < 0.0:
        raise ValueError("capacity must be non-negative")
    d, r = econ.discount_rate, econ.horizon_years
    repl_pw = sum(sppw(d, y) for y in replacement_years(spec.lifetime_years, r))
    per_unit = (spec.capital_cost
                + spec.replacement_cost * repl_pw
                + spec.om_cost / crf(d, r)
                - salvage_value(spec, r, d))
    return n_units * per_unit


def total_npc(design, specs: dict[str, ComponentSpec] | None = None,
              econ: EconomicParams = EconomicParams()) -> CostReport:
    """Sum component NPCs for a design and report the breakdown."""
    if specs is None:
        specs = default_component_specs()
    counts = design.unit_counts()
    per_component = {}
    for key in COMPONENT_ORDER:
        per_component[key] = component_npc(counts[key], specs[key], econ)
    total = sum(per_component.values())
    return CostReport(component_npc=per_component, total_npc=total,
                      annualized=annualize(total, econ))


def annualize(tnpc: float, econ: EconomicParams = EconomicParams()) -> float:
    """Equivalent uniform annual cost [$/yr] of a total NPC."""
    if tnpc < 0.0:
        raise ValueError("total NPC must be non-negative")
    return crf(econ.discount_rate, econ.horizon_years) * tnpc


# carrier index order used by the attribution helpers
_ELEC, _HEAT, _H2 = 0, 1, 2

_SINGLE_CARRIER = {
    "inverter": _ELEC,
    "heat_exchanger": _HEAT,
    "hot_water_tank": _HEAT,
    "inline_heater": _HEAT,
    "h2_station": _H2,
}


def _normalized(weights: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    s = weights.sum()
    if s <= 0.0:
        return fallback.copy()
    return weights / s


def carrier_shares(result) -> dict[str, np.ndarray]:
    """Fraction of each component's cost attributable to (electricity,
    heat, hydrogen), from the annual energy delivered through it.

    Single-carrier components map fully onto their carrier. Shared
    components split by delivered energy: the fuel cell by bus output
    versus heat recovery plus heater support; the tank and electrolyser by
    tank outflow to the station versus the fuel cell (the fuel-cell part
    then splits like the fuel cell itself); the turbines by direct load
    service, storage charging, electrolyser input and heater surplus.
    """
    dt = result.dt
    eta_heater = result.system.efficiency.inline_heater

    e_ac = float(result.ac_served.sum() * dt)
    e_th = float(result.thermal_served.sum() * dt)
    kg = float(result.h2_served.sum() * dt)
    system_fb = _normalized(np.array([e_ac, e_th, kg * HHV_H2]),
                            np.array([1.0, 0.0, 0.0]))

    fc_w = np.zeros(3)
    fc_w[_ELEC] = float((result.p_fc_e - result.p_fc_heater).sum() * dt)
    fc_w[_HEAT] = float((result.p_fc_heater * eta_heater).sum() * dt
                        + result.heat_to_tank.sum() * dt)
    fc_sh = _normalized(fc_w, system_fb)

    fuel_station = float(result.p_tank_to_station.sum() * dt)
    fuel_fc = float(result.p_tank_to_fc.sum() * dt)
    tank_w = fuel_station * np.array([0.0, 0.0, 1.0]) + fuel_fc * fc_sh
    tank_sh = _normalized(tank_w, system_fb)

    e_elz = float(result.p_electrolyser.sum() * dt)
    wt_w = np.zeros(3)
    wt_w[_ELEC] = float(np.minimum(result.p_wt, result.dc_served).sum() * dt
                        + (result.battery_charge + result.sc_charge).sum() * dt)
    wt_w[_HEAT] = float(result.p_heater_surplus.sum() * dt)
    wt_w += e_elz * tank_sh
    wt_sh = _normalized(wt_w, system_fb)

    storage_sh = np.array([1.0, 0.0, 0.0])  # banks serve the electric bus only
    shares = {
        "wind_turbine": wt_sh,
        "sc_module": storage_sh,
        "battery_pack": storage_sh,
        "electrolyser": tank_sh,
        "h2_tank": tank_sh,
        "fuel_cell": fc_sh,
    }
    for key, idx in _SINGLE_CARRIER.items():
        sh = np.zeros(3)
        sh[idx] = 1.0
        shares[key] = sh
    return shares


def levelized_costs(report: CostReport, result,
                    econ: EconomicParams = EconomicParams()) -> LevelizedCosts:
    """Split the annualised NPC across carriers and divide by the annual
    served quantities. Outputs are NZ$ per kWh / litre / kg.

    A carrier with attributed cost but nothing served is flagged undefined
    (``None``) rather than reported as infinite.
    """
    shares = carrier_shares(result)
    attributed = np.zeros(3)
    for key in COMPONENT_ORDER:
        attributed += annualize(report.component_npc[key], econ) * shares[key]

    dt = result.dt
    e_ac = float(result.ac_served.sum() * dt)          # [kWh]
    e_th = float(result.thermal_served.sum() * dt)     # [kWh]
    litres = float(result.litres_served.sum())
    kg = float(result.h2_served.sum() * dt)
    nz = econ.nz_per_us

    def ratio(cost_us, qty):
        if qty > 0.0:
            return nz * cost_us / qty
        return 0.0 if cost_us == 0.0 else None

    total_ann = annualize(report.total_npc, econ)
    lev = LevelizedCosts(
        combined_per_kwh=ratio(total_ann, e_ac + e_th),
        electricity_per_kwh=ratio(attributed[_ELEC], e_ac),
        hot_water_per_l=ratio(attributed[_HEAT], litres),
        hydrogen_per_kg=ratio(attributed[_H2], kg),
    )
    report.levelized = lev
    return lev


@dataclass
class FinancialMetrics:
    dpp_years: float          # math.inf when the investment never pays back
    profitability_index: float
    irr: float | None         # None when NPV has no root in the bracket


def npv(rate: float, cashflows) -> float:
    """Net present value of a cashflow sequence (index = year)."""
    return sum(cf / (1.0 + rate) ** t for t, cf in enumerate(cashflows))


def irr(cashflows, lo: float = -0.99, hi: float = 10.0, tol: float = 1e-9) -> float:
    """Internal rate of return by bisection on [lo, hi].

    Raises IRRUndefined when the NPV does not change sign over the bracket.
    """
    f_lo, f_hi = npv(lo, cashflows), npv(hi, cashflows)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise IRRUndefined(f"no NPV sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = npv(mid, cashflows)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def financial_metrics(cashflows, d: float) -> FinancialMetrics:
    """Discounted payback period, profitability index and IRR.

    The payback year is interpolated linearly inside the crossing year;
    PI is the present value of the year-1+ flows over the initial outlay.
    """
    cashflows = list(cashflows)
    if len(cashflows) < 2:
        raise ValueError("need at least an outlay and one further cashflow")
    if cashflows[0] >= 0.0:
        raise ValueError("cashflows[0] must be a negative initial outlay")

    disc = [cf / (1.0 + d) ** t for t, cf in enumerate(cashflows)]
    cum = np.cumsum(disc)
    dpp = math.inf
    for k in range(1, len(cum)):
        if cum[k] >= 0.0:
            dpp = (k - 1) + (-cum[k - 1]) / disc[k]
            break
    pi = sum(disc[1:]) / abs(cashflows[0])
    try:
        rate = irr(cashflows)
    except IRRUndefined:
        rate = None
    return FinancialMetrics(dpp_years=dpp, profitability_index=pi, irr=rate)
