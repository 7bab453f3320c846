"""Penalty-based particle swarm search over the equipment sizes, plus an
exhaustive grid oracle used to validate it.

Fitness is the design's lifetime cost inflated multiplicatively by any
reliability or cyclical-state violations, so a feasible design always beats
an infeasible one at realistic cost scales.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .dispatch import (DESIGN_FIELDS, DesignVector, StrategyParams, SystemSpecs,
                       cyclical_state_error, simulate_year)
from .economics import EconomicParams, total_npc
from .errors import ConfigError


@dataclass
class Scenario:
    """Everything a fitness evaluation needs besides the design itself."""

    wind: np.ndarray       # [m/s]
    electric: np.ndarray   # [kW AC]
    thermal: np.ndarray    # [kW]
    h2: np.ndarray         # [kg/h]
    system: SystemSpecs = field(default_factory=SystemSpecs)
    strategy: StrategyParams = field(default_factory=StrategyParams)
    component_specs: dict | None = None
    econ: EconomicParams = field(default_factory=EconomicParams)

    def profiles(self) -> dict:
        return {"wind": self.wind, "electric": self.electric,
                "thermal": self.thermal, "h2": self.h2}


@dataclass(frozen=True)
class Targets:
    """Constraint targets: LPSP limits [%] per carrier and the tolerated
    cyclical state deviation [% of capacity]."""

    lpsp_electric: float = 0.0
    lpsp_thermal: float = 0.0
    lpsp_h2: float = 0.0
    cyclical_tol_pct: float = 1.0
    penalty_scale: float = 10.0   # per percentage point of violation


@dataclass
class FitnessBreakdown:
    npc: float                    # raw lifetime cost [$]
    lpsp_electric: float          # measured indices [%]
    lpsp_thermal: float
    lpsp_h2: float
    cyclical_pct: float           # summed store deviations [% of capacity]
    penalty_lpsp_electric: float  # multiplicative penalty terms
    penalty_lpsp_thermal: float
    penalty_lpsp_h2: float
    penalty_cyclical: float
    penalized: float

    @property
    def feasible(self) -> bool:
        return (self.penalty_lpsp_electric + self.penalty_lpsp_thermal
                + self.penalty_lpsp_h2 + self.penalty_cyclical) == 0.0


@dataclass(frozen=True)
class PsoParams:
    population: int = 45
    max_iterations: int = 300
    inertia: float = 0.7
    cognitive: float = 2.0
    social: float = 2.0
    velocity_clamp: float = 0.2   # fraction of each variable's range
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ConfigError(f"population must be >= 2, got {self.population}")
        if not 0.0 < self.inertia < 1.0:
            raise ConfigError("inertia weight must lie in (0, 1)")
        if self.cognitive <= 0.0 or self.social <= 0.0:
            raise ConfigError("learning factors must be positive")
        if not 0.0 < self.velocity_clamp <= 1.0:
            raise ConfigError("velocity clamp must lie in (0, 1]")
        if self.max_iterations < 1:
            raise ConfigError("need at least one iteration")


@dataclass
class Bounds:
    """Per-variable search box with integrality flags."""

    lower: np.ndarray
    upper: np.ndarray
    integer_mask: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.integer_mask = np.asarray(self.integer_mask, dtype=bool)
        if not self.lower.shape == self.upper.shape == self.integer_mask.shape:
            raise ConfigError("bounds arrays must share one shape")
        if np.any(self.upper <= self.lower):
            raise ConfigError("every upper bound must exceed its lower bound")

    @property
    def dimensions(self) -> int:
        return self.lower.shape[0]


# Upper bounds bracketing the plausible island-scale solutions at three
# times a reference equipment mix.
DEFAULT_UPPER = {
    "n_wt": 93, "n_sc_modules": 25128, "n_battery_packs": 54,
    "electrolyser_kw": 2892.0, "h2_tank_kg": 1857.0, "fuel_cell_kw": 783.0,
    "heat_exchanger_kw": 639.0, "hot_water_tank_l": 849903.0,
    "inline_heater_kw": 291.0, "h2_station_kg_per_h": 51.6,
    "inverter_kw": 2223.0,
}


def default_bounds(upper: dict | None = None) -> Bounds:
    """Search box [0, upper] over the eleven design variables."""
    merged = dict(DEFAULT_UPPER)
    if upper:
        merged.update(upper)
    ub = np.array([float(merged[name]) for name in DESIGN_FIELDS])
    integer = np.array([name in ("n_wt", "n_sc_modules", "n_battery_packs")
                        for name in DESIGN_FIELDS])
    return Bounds(lower=np.zeros(len(DESIGN_FIELDS)), upper=ub, integer_mask=integer)


def evaluate_fitness(design, scenario: Scenario,
                     targets: Targets = Targets()) -> FitnessBreakdown:
    """Simulate one design and score it.

    penalized = NPC * (1 + sum(scale * max(0, violation)))
    with violations measured in percentage points over the targets.
    """
    if not isinstance(design, DesignVector):
        design = DesignVector.from_array(design)
    result = simulate_year(design, scenario.profiles(), scenario.system,
                           scenario.strategy)
    report = total_npc(design, scenario.component_specs, scenario.econ)

    le = result.lpsp_electric()
    lt = result.lpsp_thermal()
    lh = result.lpsp_h2()
    cyc = 100.0 * sum(cyclical_state_error(result).values())

    lam = targets.penalty_scale
    pe = lam * max(0.0, le - targets.lpsp_electric)
    pt = lam * max(0.0, lt - targets.lpsp_thermal)
    ph = lam * max(0.0, lh - targets.lpsp_h2)
    pc = lam * max(0.0, cyc - targets.cyclical_tol_pct)
    penalized = report.total_npc * (1.0 + pe + pt + ph + pc)
    return FitnessBreakdown(
        npc=report.total_npc, lpsp_electric=le, lpsp_thermal=lt, lpsp_h2=lh,
        cyclical_pct=cyc, penalty_lpsp_electric=pe, penalty_lpsp_thermal=pt,
        penalty_lpsp_h2=ph, penalty_cyclical=pc, penalized=penalized,
    )


def _fitness_value(evaluation) -> float:
    return float(getattr(evaluation, "penalized", evaluation))


@dataclass
class PsoResult:
    best_position: np.ndarray    # integer variables already rounded
    best_value: float
    best_evaluation: object      # whatever the fitness callable returned
    trace: np.ndarray            # best penalized value after init + each iteration


def _rounded(x: np.ndarray, integer_mask: np.ndarray) -> np.ndarray:
    out = x.copy()
    out[integer_mask] = np.rint(out[integer_mask])
    return out


def pso_optimize(bounds: Bounds, params: PsoParams, fitness) -> PsoResult:
    """Global-best particle swarm minimisation of ``fitness``.

    The swarm moves in a continuous box; integer variables are rounded only
    when a position is evaluated. Positions leaving the box are clamped with
    the offending velocity component negated and halved. Runs are
    reproducible: all randomness comes from one PCG64 stream seeded with
    ``params.seed``, and ties are broken by particle index.
    """
    rng = np.random.Generator(np.random.PCG64(params.seed))
    dims = bounds.dimensions
    pop = params.population
    span = bounds.upper - bounds.lower
    vmax = params.velocity_clamp * span

    x = bounds.lower + rng.random((pop, dims)) * span
    v = (2.0 * rng.random((pop, dims)) - 1.0) * vmax

    def evaluate(position):
        return fitness(_rounded(position, bounds.integer_mask))

    evals = [evaluate(x[i]) for i in range(pop)]
    values = np.array([_fitness_value(e) for e in evals])
    pbest_x = x.copy()
    pbest_f = values.copy()
    g = int(np.argmin(pbest_f))
    gbest_x = pbest_x[g].copy()
    gbest_f = float(pbest_f[g])
    gbest_eval = evals[g]

    trace = [gbest_f]
    for _ in range(params.max_iterations):
        r1 = rng.random((pop, dims))
        r2 = rng.random((pop, dims))
        v = (params.inertia * v
             + params.cognitive * r1 * (pbest_x - x)
             + params.social * r2 * (gbest_x[None, :] - x))
        np.clip(v, -vmax, vmax, out=v)
        x = x + v
        below = x < bounds.lower
        above = x > bounds.upper
        x = np.clip(x, bounds.lower, bounds.upper)
        v[below | above] *= -0.5

        for i in range(pop):
            e = evaluate(x[i])
            f = _fitness_value(e)
            if f < pbest_f[i]:
                pbest_f[i] = f
                pbest_x[i] = x[i]
                if f < gbest_f:
                    gbest_f = f
                    gbest_x = x[i].copy()
                    gbest_eval = e
        trace.append(gbest_f)

    return PsoResult(best_position=_rounded(gbest_x, bounds.integer_mask),
                     best_value=gbest_f, best_evaluation=gbest_eval,
                     trace=np.array(trace))


MAX_GRID_POINTS = 1_000_000


def grid_search_oracle(bounds: Bounds, steps, fitness):
    """Exhaustive argmin of ``fitness`` over a Cartesian grid.

    ``steps`` is one step size per dimension; grid points run from the lower
    bound to the upper bound inclusive. Ties go to the lexicographically
    smallest design (the iteration order).
    """
    steps = np.asarray(steps, dtype=float)
    if steps.shape != bounds.lower.shape or np.any(steps <= 0.0):
        raise ConfigError("need one positive step size per dimension")
    axes = []
    total = 1
    for lo, hi, step in zip(bounds.lower, bounds.upper, steps):
        axis = np.arange(lo, hi + 0.5 * step, step)
        axes.append(axis)
        total *= len(axis)
        if total > MAX_GRID_POINTS:
            raise ConfigError(f"grid exceeds {MAX_GRID_POINTS} points")

    best_x = None
    best_f = math.inf
    best_eval = None
    for point in itertools.product(*axes):
        candidate = _rounded(np.array(point), bounds.integer_mask)
        e = fitness(candidate)
        f = _fitness_value(e)
        if f < best_f:
            best_f = f
            best_x = candidate
            best_eval = e
    return best_x, best_f, best_eval
