"""Stateless device models evaluated once per dispatch timestep.

Every function here is pure: it maps a state/spec plus requested flows to a
value or a new state, which keeps the models trivially safe to call from
concurrent simulations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import BoundsError, ConfigError

HHV_H2 = 39.7        # higher heating value of hydrogen [kWh/kg]
CP_WATER = 4.19      # specific heat of water [kJ/(kg*degC)]
T_INLET = 12.0       # mains (cold) water temperature [degC]
T_DELIVERY = 40.0    # hot water delivery temperature [degC]
T_TANK_MAX = 65.0    # hot water tank controller limit [degC]

# Absolute slack used when checking storage limits, to absorb float residue.
_EPS = 1e-9


@dataclass(frozen=True)
class WindTurbineSpec:
    """Power-curve parameters of a single turbine unit."""

    v_cut_in: float = 3.0    # [m/s]
    v_rated: float = 15.0    # [m/s]
    v_cut_out: float = 25.0  # [m/s]
    p_rated: float = 100.0   # [kW]

    def __post_init__(self):
        if not 0.0 < self.v_cut_in < self.v_rated < self.v_cut_out:
            raise ConfigError(
                "wind speeds must satisfy 0 < cut-in < rated < cut-out, got "
                f"{self.v_cut_in}, {self.v_rated}, {self.v_cut_out}"
            )
        if self.p_rated <= 0.0:
            raise ConfigError(f"rated power must be positive, got {self.p_rated}")


@dataclass(frozen=True)
class EfficiencySpec:
    """Converter efficiencies, each a fraction in (0, 1]."""

    fuel_cell: float = 0.50        # electrical efficiency
    fc_thermal_ratio: float = 0.8  # thermal-to-electrical output ratio
    fc_recoverable: float = 0.65   # share of FC heat usable for recovery
    h2_tank: float = 0.98
    hybrid_storage: float = 0.925  # battery / super-capacitor bank
    heat_exchanger: float = 0.90
    inline_heater: float = 0.97
    h2_station: float = 0.95
    electrolyser: float = 0.60
    inverter: float = 0.90
    hot_water_tank: float = 0.96

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"efficiency {name} must be in (0, 1], got {value}")


@dataclass
class StorageState:
    """Electrical store (super-capacitor bank or battery bank)."""

    energy: float              # [kWh]
    capacity: float            # [kWh]
    soc_min: float = 0.0       # fraction of capacity
    soc_max: float = 1.0

    def __post_init__(self):
        if self.capacity < 0.0 or self.energy < -_EPS:
            raise ConfigError("storage energy and capacity must be non-negative")
        if not 0.0 <= self.soc_min <= self.soc_max <= 1.0:
            raise ConfigError(
                f"SOC bounds must satisfy 0 <= min <= max <= 1, got "
                f"[{self.soc_min}, {self.soc_max}]"
            )
        if self.capacity > 0.0:
            soc = self.energy / self.capacity
            if not self.soc_min - _EPS <= soc <= self.soc_max + _EPS:
                raise ConfigError(
                    f"energy {self.energy} kWh outside SOC window "
                    f"[{self.soc_min}, {self.soc_max}] of {self.capacity} kWh"
                )


@dataclass
class HydrogenTankState:
    """Hydrogen reservoir inventory."""

    mass: float         # [kg]
    capacity_kg: float  # [kg]

    def __post_init__(self):
        if not -_EPS <= self.mass <= self.capacity_kg + _EPS:
            raise ConfigError(
                f"tank mass {self.mass} kg outside [0, {self.capacity_kg}] kg"
            )


@dataclass
class ThermalTankState:
    """Lumped-node hot water tank: fixed water mass, uniform temperature."""

    water_mass: float    # [kg], tank litres at 1 kg/L
    temperature: float   # [degC]

    def __post_init__(self):
        if self.water_mass < 0.0:
            raise ConfigError("tank water mass must be non-negative")
        if not T_INLET - _EPS <= self.temperature <= T_TANK_MAX + _EPS:
            raise ConfigError(
                f"tank temperature {self.temperature} degC outside "
                f"[{T_INLET}, {T_TANK_MAX}] degC"
            )


def wt_power(v: float, spec: WindTurbineSpec = WindTurbineSpec()) -> float:
    """Turbine output [kW] at wind speed ``v`` [m/s].

    Zero outside the [cut-in, cut-out] window, cubic ramp up to rated speed,
    flat at rated power beyond it.
    """
    if v < spec.v_cut_in or v > spec.v_cut_out:
        return 0.0
    if v >= spec.v_rated:
        return spec.p_rated
    x = (v - spec.v_cut_in) / (spec.v_rated - spec.v_cut_in)
    return spec.p_rated * x ** 3


def max_charge_power(state: StorageState, dt: float = 1.0,
                     eta_charge: float = 1.0) -> float:
    """Largest charging power [kW] that keeps the store at or below soc_max."""
    return max(0.0, (state.soc_max * state.capacity - state.energy) / (dt * eta_charge))


def max_discharge_power(state: StorageState, eta: float, dt: float = 1.0) -> float:
    """Largest discharging power [kW] that keeps the store at or above soc_min."""
    return max(0.0, (state.energy - state.soc_min * state.capacity) * eta / dt)


def storage_step(state: StorageState, p_ch: float, p_dch: float, eta: float,
                 dt: float = 1.0, eta_charge: float = 1.0) -> StorageState:
    """Advance an electrical store by one step of ``dt`` hours.

    energy' = energy + (eta_charge * p_ch - p_dch / eta) * dt

    The loss model charges at ``eta_charge`` (1.0 by default, so the full
    round-trip loss lands on discharge) and divides by ``eta`` on discharge.

    Raises:
        ValueError: negative flows, or both flows nonzero in the same step.
        BoundsError: the request would leave the SOC window; carries the
            maximum feasible power for the violating direction.
    """
    if p_ch < 0.0 or p_dch < 0.0:
        raise ValueError("charge/discharge powers must be non-negative")
    if p_ch > 0.0 and p_dch > 0.0:
        raise ValueError("at most one of charge and discharge may be nonzero")
    energy = state.energy + (eta_charge * p_ch - p_dch / eta) * dt
    hi = state.soc_max * state.capacity
    lo = state.soc_min * state.capacity
    if energy > hi + _EPS:
        raise BoundsError(
            f"charging {p_ch} kW overfills store ({energy:.6f} > {hi:.6f} kWh)",
            max_feasible=max_charge_power(state, dt, eta_charge),
        )
    if energy < lo - _EPS:
        raise BoundsError(
            f"discharging {p_dch} kW empties store ({energy:.6f} < {lo:.6f} kWh)",
            max_feasible=max_discharge_power(state, eta, dt),
        )
    return replace(state, energy=min(max(energy, lo), hi))


def fc_outputs(p_ht_fc: float,
               spec: EfficiencySpec = EfficiencySpec()) -> tuple[float, float]:
    """Fuel cell electric output and recoverable heat [kW].

    ``p_ht_fc`` is the hydrogen power drawn from the tank outlet. Electric
    output is ``eta * p_ht_fc``; the heat by-product scales with the
    thermal-to-electric ratio, of which only the recoverable share can be
    captured by the heat exchanger.
    """
    if p_ht_fc < 0.0:
        raise ValueError("fuel cell input power must be non-negative")
    p_e = spec.fuel_cell * p_ht_fc
    p_heat = spec.fc_recoverable * spec.fc_thermal_ratio * p_e
    return p_e, p_heat


def max_tank_outflow(state: HydrogenTankState, spec: EfficiencySpec = EfficiencySpec(),
                     dt: float = 1.0) -> float:
    """Largest combined outlet power [kW] the tank can sustain for ``dt`` hours."""
    return max(0.0, state.mass * HHV_H2 * spec.h2_tank / dt)


def max_tank_inflow(state: HydrogenTankState, spec: EfficiencySpec = EfficiencySpec(),
                    dt: float = 1.0) -> float:
    """Largest inlet power [kW] that fits under the tank capacity for ``dt`` hours."""
    return max(0.0, (state.capacity_kg - state.mass) * HHV_H2 / dt)


def h2_tank_step(state: HydrogenTankState, p_in: float, p_out_fc: float,
                 p_out_station: float, spec: EfficiencySpec = EfficiencySpec(),
                 dt: float = 1.0) -> HydrogenTankState:
    """Advance the hydrogen reservoir by one step of ``dt`` hours.

    mass' = mass + (p_in - (p_out_fc + p_out_station) / eta_tank) * dt / HHV

    Outflows pay the tank round-trip efficiency; flows are powers [kW] at
    the tank boundary. Simultaneous inflow and outflow is allowed.
    """
    if min(p_in, p_out_fc, p_out_station) < 0.0:
        raise ValueError("tank flows must be non-negative")
    p_out = p_out_fc + p_out_station
    mass = state.mass + (p_in - p_out / spec.h2_tank) * dt / HHV_H2
    if mass > state.capacity_kg + _EPS:
        raise BoundsError(
            f"inflow {p_in} kW overfills tank ({mass:.6f} > {state.capacity_kg} kg)",
            max_feasible=max_tank_inflow(state, spec, dt) + p_out / spec.h2_tank,
        )
    if mass < -_EPS:
        raise BoundsError(
            f"outflow {p_out} kW empties tank ({mass:.6f} kg < 0)",
            max_feasible=max_tank_outflow(state, spec, dt) + p_in * spec.h2_tank,
        )
    return replace(state, mass=min(max(mass, 0.0), state.capacity_kg))


def hot_water_power(m_dot: float, t_out: float, t_in: float = T_INLET,
                    spec: EfficiencySpec = EfficiencySpec()) -> float:
    """Thermal power [kW] delivered by the tank at outlet flow ``m_dot`` [kg/h]."""
    if m_dot < 0.0:
        raise ValueError("mass flow must be non-negative")
    if t_out < t_in:
        raise ValueError(f"outlet temperature {t_out} below inlet {t_in}")
    return m_dot * CP_WATER * spec.hot_water_tank * (t_out - t_in) / 3600.0


def heater_boost_power(m_dot: float, t_tank_out: float, t_demand: float = T_DELIVERY,
                       spec: EfficiencySpec = EfficiencySpec()) -> float:
    """Electric input [kW] the inline heater needs to lift ``m_dot`` [kg/h]
    from the tank outlet temperature to the demand temperature.

    Zero when the outlet is already hot enough.
    """
    if m_dot < 0.0:
        raise ValueError("mass flow must be non-negative")
    if t_tank_out >= t_demand:
        return 0.0
    return m_dot * CP_WATER * (t_demand - t_tank_out) / 3600.0 / spec.inline_heater


def apply_efficiency(p: float, eta: float) -> float:
    """Single-efficiency converter model: output = eta * input."""
    if p < 0.0:
        raise ValueError("power must be non-negative")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"efficiency must be in (0, 1], got {eta}")
    return eta * p
