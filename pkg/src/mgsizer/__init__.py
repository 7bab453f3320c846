"""Capacity planning for an islanded wind / hydrogen / hybrid-storage
multi-carrier microgrid: hourly dispatch simulation, lifetime costing and
particle-swarm sizing."""

__version__ = "0.1.0"

from .components import EfficiencySpec, WindTurbineSpec
from .dispatch import (DesignVector, DispatchResult, StrategyParams, SystemSpecs,
                       check_power_balance, cyclical_state_error, lpsp,
                       lowpass_decompose, simulate_year)
from .economics import (ComponentSpec, CostReport, EconomicParams,
                        component_npc, crf, default_component_specs,
                        financial_metrics, levelized_costs, total_npc)
from .errors import BoundsError, ConfigError, IRRUndefined, LengthError
from .optimizer import (Bounds, FitnessBreakdown, PsoParams, Scenario, Targets,
                        default_bounds, evaluate_fitness, grid_search_oracle,
                        pso_optimize)
from .profiles import (FleetSpec, TimeSeries, UniformWindow, NormalWindow,
                       VehicleClass, default_fleet, load_hourly_series,
                       monthly_mean_daily_profile, synthesize_h2_load,
                       write_hourly_series)
