"""Scenario configuration: a YAML file tying together profile paths, the
vehicle fleet, device parameters, cost catalogue, optimiser settings and
constraint targets.

``stewart-island`` names the bundled example scenario shipped with the
package (synthetic profiles, see ``synth``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from importlib import resources
from pathlib import Path

import yaml

from .components import EfficiencySpec, WindTurbineSpec
from .dispatch import DESIGN_FIELDS, DesignVector, StrategyParams, SystemSpecs
from .economics import ComponentSpec, EconomicParams, default_component_specs
from .errors import ConfigError
from .optimizer import (DEFAULT_UPPER, Bounds, PsoParams, Scenario, Targets,
                        default_bounds)
from .profiles import (FleetSpec, NormalWindow, UniformWindow, VehicleClass,
                       default_fleet, load_hourly_series, synthesize_h2_load)

SCHEMA_VERSION = 1
BUNDLED_NAME = "stewart-island"


@dataclass
class ScenarioConfig:
    """Everything a batch run needs, loadable from one YAML file."""

    profile_paths: dict[str, str]            # wind / electric / thermal
    schema_version: int = SCHEMA_VERSION
    fleet: FleetSpec = field(default_factory=default_fleet)
    system: SystemSpecs = field(default_factory=SystemSpecs)
    strategy: StrategyParams = field(default_factory=StrategyParams)
    econ: EconomicParams = field(default_factory=EconomicParams)
    component_specs: dict[str, ComponentSpec] = field(
        default_factory=default_component_specs)
    pso: PsoParams = field(default_factory=PsoParams)
    bounds_upper: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_UPPER))
    targets: Targets = field(default_factory=Targets)

    def __post_init__(self):
        missing = {"wind", "electric", "thermal"} - set(self.profile_paths)
        if missing:
            raise ConfigError(f"profile paths missing entries: {sorted(missing)}")
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(
                f"unsupported schema_version {self.schema_version}, "
                f"expected {SCHEMA_VERSION}"
            )

    def bounds(self) -> Bounds:
        return default_bounds(self.bounds_upper)

    def to_scenario(self, base_dir) -> Scenario:
        """Load the profile files (relative to ``base_dir``), synthesise the
        fleet hydrogen demand and bundle everything for evaluation."""
        base = Path(base_dir)

        def load(key, unit):
            path = Path(self.profile_paths[key])
            if not path.is_absolute():
                path = base / path
            if not path.exists():
                raise ConfigError(f"profile file not found: {path}")
            return load_hourly_series(path, unit)

        wind = load("wind", "m/s")
        electric = load("electric", "kW")
        thermal = load("thermal", "kW")
        h2 = synthesize_h2_load(self.fleet)
        return Scenario(wind=wind.values, electric=electric.values,
                        thermal=thermal.values, h2=h2.values,
                        system=self.system, strategy=self.strategy,
                        component_specs=self.component_specs, econ=self.econ)


def _window_to_dict(window) -> dict:
    if isinstance(window, UniformWindow):
        return {"kind": "uniform", "start_hour": window.start_hour,
                "end_hour": window.end_hour}
    return {"kind": "normal", "mean_hour": window.mean_hour,
            "sd_hours": window.sd_hours, "start_hour": window.start_hour,
            "end_hour": window.end_hour}


def _window_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "uniform":
        return UniformWindow(start_hour=data["start_hour"], end_hour=data["end_hour"])
    if kind == "normal":
        return NormalWindow(mean_hour=data["mean_hour"], sd_hours=data["sd_hours"],
                            start_hour=data["start_hour"], end_hour=data["end_hour"])
    raise ConfigError(f"unknown refuel window kind: {kind!r}")


def config_to_dict(cfg: ScenarioConfig) -> dict:
    return {
        "schema_version": cfg.schema_version,
        "profiles": dict(cfg.profile_paths),
        "fleet": [
            {**{k: v for k, v in asdict(c).items() if k != "window"},
             "window": _window_to_dict(c.window)}
            for c in cfg.fleet.classes
        ],
        "wind_turbine": asdict(cfg.system.wind_turbine),
        "efficiency": asdict(cfg.system.efficiency),
        "storage": {
            "battery_soc": list(cfg.system.battery_soc),
            "sc_soc": list(cfg.system.sc_soc),
            "tank_soc": list(cfg.system.tank_soc),
            "loss_side": cfg.system.storage_loss_side,
        },
        "strategy": asdict(cfg.strategy),
        "economics": asdict(cfg.econ),
        "component_costs": {k: asdict(v) for k, v in cfg.component_specs.items()},
        "pso": asdict(cfg.pso),
        "bounds_upper": dict(cfg.bounds_upper),
        "targets": asdict(cfg.targets),
    }


def config_from_dict(data: dict) -> ScenarioConfig:
    fleet = FleetSpec(classes=tuple(
        VehicleClass(**{**{k: v for k, v in row.items() if k != "window"},
                        "window": _window_from_dict(row["window"])})
        for row in data.get("fleet", [])
    )) if "fleet" in data else default_fleet()

    storage = data.get("storage", {})
    system = SystemSpecs(
        wind_turbine=WindTurbineSpec(**data.get("wind_turbine", {})),
        efficiency=EfficiencySpec(**data.get("efficiency", {})),
        battery_soc=tuple(storage.get("battery_soc", (0.2, 1.0))),
        sc_soc=tuple(storage.get("sc_soc", (0.05, 1.0))),
        tank_soc=tuple(storage.get("tank_soc", (0.0, 1.0))),
        storage_loss_side=storage.get("loss_side", "discharge"),
    )
    costs = data.get("component_costs")
    component_specs = ({k: ComponentSpec(**v) for k, v in costs.items()}
                       if costs else default_component_specs())
    return ScenarioConfig(
        schema_version=data.get("schema_version", SCHEMA_VERSION),
        profile_paths=dict(data["profiles"]),
        fleet=fleet,
        system=system,
        strategy=StrategyParams(**data.get("strategy", {})),
        econ=EconomicParams(**data.get("economics", {})),
        component_specs=component_specs,
        pso=PsoParams(**data.get("pso", {})),
        bounds_upper=dict(data.get("bounds_upper", DEFAULT_UPPER)),
        targets=Targets(**data.get("targets", {})),
    )


def save_config(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(yaml.safe_dump(config_to_dict(cfg), sort_keys=True))


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    data = yaml.safe_load(path.read_text())
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: not a mapping")
    try:
        cfg = config_from_dict(data)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"{path}: malformed config ({exc})") from exc
    for key, value in cfg.profile_paths.items():
        profile = Path(value)
        if not profile.is_absolute():
            profile = path.parent / profile
        if not profile.exists():
            raise ConfigError(f"{path}: {key} profile file not found: {profile}")
    return cfg


def bundled_config_path() -> Path:
    """Location of the shipped example scenario's config file."""
    return Path(resources.files("mgsizer").joinpath("data/stewart_island/scenario.yaml"))


def resolve_config_path(name_or_path: str) -> Path:
    if name_or_path == BUNDLED_NAME:
        return bundled_config_path()
    return Path(name_or_path)


def save_design(design: DesignVector, path) -> None:
    """Write a design as YAML with stable key order and float formatting, so
    identical designs produce byte-identical files."""
    data = {name: getattr(design, name) for name in DESIGN_FIELDS}
    data = {k: (int(v) if k in ("n_wt", "n_sc_modules", "n_battery_packs")
                else float(v)) for k, v in data.items()}
    Path(path).write_text(yaml.safe_dump(data, sort_keys=True))


def load_design(path) -> DesignVector:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"design file not found: {path}")
    data = yaml.safe_load(path.read_text())
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: not a mapping")
    unknown = set(data) - set(DESIGN_FIELDS)
    if unknown:
        raise ConfigError(f"{path}: unknown design fields {sorted(unknown)}")
    try:
        return DesignVector(**data)
    except TypeError as exc:
        raise ConfigError(f"{path}: malformed design ({exc})") from exc


def reference_design() -> DesignVector:
    """Equipment mix used as the scale reference for the bundled scenario."""
    return DesignVector(
        n_wt=31, n_sc_modules=8376, n_battery_packs=18,
        electrolyser_kw=964.0, h2_tank_kg=619.0, fuel_cell_kw=261.0,
        heat_exchanger_kw=213.0, hot_water_tank_l=283_301.0,
        inline_heater_kw=97.0, h2_station_kg_per_h=17.2, inverter_kw=741.0,
    )
