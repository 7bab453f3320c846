"""Batch command-line front end.

Subcommands:
    simulate   run one design through a year and write all report tables
    optimize   run the particle swarm search, then simulate the best design
    synth-h2   emit the fleet hydrogen demand profile
    report     recompute reliability and economics from a saved dispatch table

Exit codes: 0 success, 2 configuration problem, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .dispatch import (DESIGN_FIELDS, DesignVector, cyclical_state_error,
                       read_dispatch_csv, simulate_year)
from .economics import COMPONENT_ORDER, levelized_costs, total_npc
from .errors import ConfigError
from .optimizer import evaluate_fitness, pso_optimize
from .profiles import (TimeSeries, monthly_mean_daily_profile, synthesize_h2_load,
                       write_hourly_series)
from .scenario import (ScenarioConfig, load_config, load_design,
                       resolve_config_path, save_design)


def _write_matrix(path: Path, matrix: np.ndarray, row_label: str) -> None:
    lines = [row_label + "," + ",".join(f"h{h}" for h in range(matrix.shape[1]))]
    for i, row in enumerate(matrix):
        lines.append(str(i + 1) + "," + ",".join(f"{v:.10g}" for v in row))
    path.write_text("\n".join(lines) + "\n")


def _write_kv(path: Path, pairs) -> None:
    lines = [f"{key},{'' if value is None else format(value, '.10g')}"
             for key, value in pairs]
    path.write_text("\n".join(lines) + "\n")


def _check_bounds(design: DesignVector, cfg: ScenarioConfig) -> None:
    bounds = cfg.bounds()
    x = design.to_array()
    for name, value, lo, hi in zip(DESIGN_FIELDS, x, bounds.lower, bounds.upper):
        if not lo <= value <= hi:
            raise ConfigError(
                f"design variable {name}={value} outside bounds [{lo}, {hi}]"
            )


def _load_scenario(config_arg: str):
    config_path = resolve_config_path(config_arg)
    cfg = load_config(config_path)
    scenario = cfg.to_scenario(config_path.parent)
    return cfg, scenario


def _report_files(outdir: Path, cfg: ScenarioConfig, scenario, design, result) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    result.to_csv(outdir / "dispatch.csv")

    _write_kv(outdir / "lpsp_summary.csv", [
        ("lpsp_electric_pct", result.lpsp_electric()),
        ("lpsp_thermal_pct", result.lpsp_thermal()),
        ("lpsp_h2_pct", result.lpsp_h2()),
        *((f"cyclical_{k}", v) for k, v in cyclical_state_error(result).items()),
    ])

    report = total_npc(design, cfg.component_specs, cfg.econ)
    lev = levelized_costs(report, result, cfg.econ)
    _write_kv(outdir / "cost_report.csv", [
        *((f"npc_{key}_usd", report.component_npc[key]) for key in COMPONENT_ORDER),
        ("total_npc_usd", report.total_npc),
        ("annualized_usd_per_yr", report.annualized),
        ("lcoe_combined_nzd_per_kwh", lev.combined_per_kwh),
        ("lcoe_electricity_nzd_per_kwh", lev.electricity_per_kwh),
        ("lcoe_hot_water_nzd_per_l", lev.hot_water_per_l),
        ("lcoe_hydrogen_nzd_per_kg", lev.hydrogen_per_kg),
    ])

    if scenario is not None and scenario.wind.shape[0] == 8760:
        for key, values, unit in (("wind", scenario.wind, "m/s"),
                                  ("electric", scenario.electric, "kW"),
                                  ("thermal", scenario.thermal, "kW")):
            series = TimeSeries(values=values, unit=unit, label=key)
            _write_matrix(outdir / f"monthly_mean_{key}.csv",
                          monthly_mean_daily_profile(series), "month")

    summary = result.summary()
    print(f"lpsp electric/thermal/h2 [%]: {summary['lpsp_electric_pct']:.4f} "
          f"{summary['lpsp_thermal_pct']:.4f} {summary['lpsp_h2_pct']:.4f}")
    print(f"total NPC: US$ {report.total_npc:,.0f}  "
          f"(annualized US$ {report.annualized:,.0f}/yr)")


def cmd_simulate(args) -> int:
    cfg, scenario = _load_scenario(args.config)
    design = load_design(args.design)
    _check_bounds(design, cfg)
    result = simulate_year(design, scenario.profiles(), scenario.system,
                           scenario.strategy)
    _report_files(Path(args.out), cfg, scenario, design, result)
    return 0


def cmd_optimize(args) -> int:
    cfg, scenario = _load_scenario(args.config)
    pso = cfg.pso if args.seed is None else replace(cfg.pso, seed=args.seed)
    targets = cfg.targets

    res = pso_optimize(cfg.bounds(), pso,
                       lambda x: evaluate_fitness(x, scenario, targets))
    best = DesignVector.from_array(res.best_position)
    breakdown = res.best_evaluation

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    save_design(best, outdir / "best_design.yaml")
    _write_kv(outdir / "fitness.csv", [
        ("npc_usd", breakdown.npc),
        ("lpsp_electric_pct", breakdown.lpsp_electric),
        ("lpsp_thermal_pct", breakdown.lpsp_thermal),
        ("lpsp_h2_pct", breakdown.lpsp_h2),
        ("cyclical_pct", breakdown.cyclical_pct),
        ("penalized_usd", breakdown.penalized),
    ])
    trace_lines = ["iteration,best_penalized"]
    trace_lines += [f"{i},{v:.10g}" for i, v in enumerate(res.trace)]
    (outdir / "convergence_trace.csv").write_text("\n".join(trace_lines) + "\n")

    result = simulate_year(best, scenario.profiles(), scenario.system,
                           scenario.strategy)
    _report_files(outdir, cfg, scenario, best, result)
    print(f"best penalized fitness: US$ {breakdown.penalized:,.0f}")
    return 0


def cmd_synth_h2(args) -> int:
    cfg = load_config(resolve_config_path(args.config))
    series = synthesize_h2_load(cfg.fleet)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_hourly_series(series, out)
    print(f"wrote {out} (annual total {series.values.sum():,.1f} kg)")
    return 0


def cmd_report(args) -> int:
    cfg, scenario = _load_scenario(args.config)
    design = load_design(args.design)
    dispatch_path = Path(args.dispatch)
    if not dispatch_path.exists():
        raise ConfigError(f"dispatch table not found: {dispatch_path}")
    result = read_dispatch_csv(dispatch_path, system=cfg.system, design=design)
    _report_files(Path(args.out), cfg, scenario, design, result)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mgsizer",
        description="Microgrid capacity planning: dispatch simulation, "
                    "costing and sizing optimisation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="simulate one design for a year")
    sim.add_argument("--config", required=True,
                     help="scenario YAML path, or 'stewart-island' for the bundled one")
    sim.add_argument("--design", required=True, help="design YAML path")
    sim.add_argument("--out", required=True, help="output directory")
    sim.set_defaults(func=cmd_simulate)

    opt = sub.add_parser("optimize", help="search for the minimum-cost design")
    opt.add_argument("--config", required=True)
    opt.add_argument("--seed", type=int, default=None,
                     help="override the configured random seed")
    opt.add_argument("--out", required=True)
    opt.set_defaults(func=cmd_optimize)

    syn = sub.add_parser("synth-h2", help="emit the fleet hydrogen demand profile")
    syn.add_argument("--config", required=True)
    syn.add_argument("--out", required=True, help="output profile file")
    syn.set_defaults(func=cmd_synth_h2)

    rep = sub.add_parser("report", help="recompute reports from a saved dispatch table")
    rep.add_argument("--config", required=True)
    rep.add_argument("--design", required=True)
    rep.add_argument("--dispatch", required=True, help="dispatch.csv from 'simulate'")
    rep.add_argument("--out", required=True)
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
