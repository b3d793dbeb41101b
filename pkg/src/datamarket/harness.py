"""Parameter-sweep runner: strategies x pricing x cost level, with pairing.

Every (cell, repetition) derives its randomness from a stable hash of the
cell coordinates, so each strategy inside a repetition sees bit-identical
prices and volumes, results do not depend on worker count or on unrelated
grid points, and two runs of the same grid agree byte for byte.

Profits are averaged over repetitions; when the exhaustive optimum is
strictly positive in every repetition of a cell, profits are also reported
relative to that run's optimum (paired per run, which keeps the variance of
the ratio low).
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .catalog import EXHAUSTIVE_LIMIT, Catalog, ValueFunction, load_catalog, make_catalog
from .errors import ConfigError, SizeLimitError
from .oracles import AccuracyOracle, SyntheticOracle, TableOracle
from .pricing import PricingScheme, apply_pricing, generate_volumes
from .seeding import derive_seed
from .shapley import EXACT_LIMIT, ShapleyResult, shapley_exact, shapley_monte_carlo
from .strategies import STRATEGY_KINDS, StrategyConfig, run_optimal, run_strategy

#: Optimal profits at or below this are treated as zero when normalizing.
RELATIVE_PROFIT_FLOOR = 1e-9


@dataclass(frozen=True)
class OracleSpec:
    """Which accuracy oracle a sweep runs against."""

    kind: str  # "synthetic" | "table"
    n: int
    table_path: str | None = None
    catalog_path: str | None = None

    def build(self, mup: float | None, di: float | None) -> AccuracyOracle:
        if self.kind == "synthetic":
            return SyntheticOracle(self.n, mup=mup if mup is not None else 1.0,
                                   di=di if di is not None else 1.0)
        return TableOracle.from_file(self.table_path, self.n)

    def base_catalog(self) -> Catalog:
        """Unpriced catalog carrying any file-provided volumes."""
        if self.kind == "table" and self.catalog_path:
            return load_catalog(self.catalog_path)
        return make_catalog([0.0] * self.n)


@dataclass(frozen=True)
class VolumeSpec:
    """How synthetic volumes are drawn (file-backed catalogs keep their own)."""

    kind: str = "uniform"  # "uniform" | "importance" | "catalog"
    sigma: float = 0.5


@dataclass(frozen=True)
class StrategySpec:
    """One strategy to sweep, with its non-swept options.

    ``lam``, when set, pins this strategy's risk level regardless of the
    cell's swept lambda (rows are still labelled with the cell value).
    """

    kind: str
    query_budget: int | None = None
    a_star_override: float | None = None
    lam: float | None = None


@dataclass(frozen=True)
class ExperimentGrid:
    """Full sweep specification."""

    oracle: OracleSpec
    tcod_values: tuple[float, ...]
    pricing_kinds: tuple[str, ...]
    lambda_values: tuple[float, ...]
    strategies: tuple[StrategySpec, ...]
    mup_values: tuple[float, ...] | tuple[None, ...] = (None,)
    di_values: tuple[float, ...] | tuple[None, ...] = (None,)
    repetitions: int = 50
    base_seed: int = 0
    volumes: VolumeSpec = field(default_factory=VolumeSpec)
    shapley_samples: int | None = None

    def cells(self) -> list[tuple]:
        return [(tcod, mup, di, pricing, lam)
                for tcod in self.tcod_values
                for mup in self.mup_values
                for di in self.di_values
                for pricing in self.pricing_kinds
                for lam in self.lambda_values]


@dataclass(frozen=True)
class ResultRow:
    """Aggregated measurement for one strategy in one grid cell."""

    strategy: str
    tcod: float
    mup: float | None
    di: float | None
    pricing: str
    lam: float
    mean_profit: float
    std_profit: float
    mean_relative_profit: float | None
    n_runs: int


@dataclass(frozen=True)
class SequencePoint:
    round: int
    strategy: str
    cum_profit: float


@dataclass
class GridResult:
    rows: list[ResultRow]
    cell_errors: list[str]


def _instance_catalog(grid: ExperimentGrid, oracle: AccuracyOracle, base: Catalog,
                      tcod: float, pricing: str, run_seed: int,
                      vf: ValueFunction, shapley_cache: ShapleyResult | None) -> Catalog:
    """Volumes then prices for one repetition; identical for every strategy in it."""
    catalog = base
    if grid.oracle.kind == "synthetic" and grid.volumes.kind != "catalog":
        weights = getattr(oracle, "weights", None)
        vols = generate_volumes(grid.oracle.n, grid.volumes.kind,
                                seed=derive_seed("volumes", run_seed),
                                sigma=grid.volumes.sigma, weights=weights)
        catalog = catalog.with_volumes(vols)
    scheme = PricingScheme(kind=pricing, tcod=tcod, seed=derive_seed("pricing", run_seed),
                           shapley_samples=grid.shapley_samples)
    return apply_pricing(catalog, scheme, oracle=oracle, vf=vf, shapley_values=shapley_cache)


def _cell_shapley(grid: ExperimentGrid, oracle: AccuracyOracle, vf: ValueFunction,
                  cell_seed: int) -> ShapleyResult:
    """Shapley attribution is price-independent, so one computation serves all reps."""
    if oracle.n <= EXACT_LIMIT:
        return shapley_exact(oracle, vf)
    if not grid.shapley_samples:
        raise SizeLimitError(
            f"shapley pricing with n={oracle.n} > {EXACT_LIMIT} needs shapley_samples")
    return shapley_monte_carlo(oracle, vf, samples=grid.shapley_samples, seed=cell_seed)


def _needs_optimal(grid: ExperimentGrid) -> bool:
    return grid.oracle.n <= EXHAUSTIVE_LIMIT


def run_cell(grid: ExperimentGrid, cell: tuple, vf: ValueFunction | None = None) -> list[ResultRow]:
    """All repetitions of one (tcod, mup, di, pricing, lambda) cell."""
    tcod, mup, di, pricing, lam = cell
    vf = vf or ValueFunction.identity()
    oracle = grid.oracle.build(mup, di)
    base = grid.oracle.base_catalog()
    if any(s.kind == "optimal" for s in grid.strategies) and oracle.n > EXHAUSTIVE_LIMIT:
        raise SizeLimitError(f"optimal strategy needs n <= {EXHAUSTIVE_LIMIT}, got {oracle.n}")

    shapley_cache = None
    if pricing == "shapley":
        shapley_cache = _cell_shapley(grid, oracle, vf,
                                      derive_seed("shapley-pricing", grid.base_seed, cell))

    with_optimal = _needs_optimal(grid)
    profits: dict[str, list[float]] = {s.kind: [] for s in grid.strategies}
    optimal_profits: list[float] = []

    for rep in range(grid.repetitions):
        run_seed = derive_seed("run", grid.base_seed, tcod, mup, di, pricing, lam, rep)
        catalog = _instance_catalog(grid, oracle, base, tcod, pricing, run_seed,
                                    vf, shapley_cache)
        opt_profit = None
        if with_optimal:
            opt_profit = run_optimal(catalog, oracle, vf).final_profit
            optimal_profits.append(opt_profit)
        for spec in grid.strategies:
            if spec.kind == "optimal":
                profits[spec.kind].append(opt_profit)
                continue
            cfg = StrategyConfig(kind=spec.kind,
                                 lam=lam if spec.lam is None else spec.lam,
                                 a_star_override=spec.a_star_override,
                                 query_budget=spec.query_budget,
                                 seed=derive_seed("strategy", run_seed, spec.kind))
            profits[spec.kind].append(run_strategy(catalog, oracle, vf, cfg).final_profit)

    relative_defined = (with_optimal and len(optimal_profits) == grid.repetitions
                        and min(optimal_profits) > RELATIVE_PROFIT_FLOOR)
    rows = []
    for spec in grid.strategies:
        vals = np.array(profits[spec.kind])
        rel = None
        if relative_defined:
            rel = float(np.mean(vals / np.array(optimal_profits)))
        rows.append(ResultRow(strategy=spec.kind, tcod=tcod, mup=mup, di=di,
                              pricing=pricing, lam=lam,
                              mean_profit=float(np.mean(vals)),
                              std_profit=float(np.std(vals)),
                              mean_relative_profit=rel, n_runs=grid.repetitions))
    return rows


def _run_cell_task(args: tuple) -> tuple[list[ResultRow], str | None]:
    grid, cell, vf = args
    try:
        return run_cell(grid, cell, vf), None
    except SizeLimitError as exc:
        return [], f"cell {cell}: {exc}"


def run_grid(grid: ExperimentGrid, vf: ValueFunction | None = None,
             workers: int = 1) -> GridResult:
    """Run every cell; cells failing a size limit are reported, the rest proceed.

    Cells are independent, so ``workers > 1`` fans them out to processes;
    results are merged in grid order either way.
    """
    _validate_grid(grid)
    vf = vf or ValueFunction.identity()
    tasks = [(grid, cell, vf) for cell in grid.cells()]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_cell_task, tasks))
    else:
        outcomes = [_run_cell_task(t) for t in tasks]
    rows: list[ResultRow] = []
    errors: list[str] = []
    for cell_rows, err in outcomes:
        rows.extend(cell_rows)
        if err:
            errors.append(err)
    return GridResult(rows=rows, cell_errors=errors)


def _validate_grid(grid: ExperimentGrid) -> None:
    if grid.repetitions < 1:
        raise ConfigError(f"repetitions must be >= 1, got {grid.repetitions}")
    for name, values in [("tcod_values", grid.tcod_values),
                         ("pricing_kinds", grid.pricing_kinds),
                         ("lambda_values", grid.lambda_values),
                         ("mup_values", grid.mup_values),
                         ("di_values", grid.di_values)]:
        if len(values) == 0:
            raise ConfigError(f"{name} must be non-empty")
    if not grid.strategies:
        raise ConfigError("at least one strategy is required")
    kinds = [s.kind for s in grid.strategies]
    if len(set(kinds)) != len(kinds):
        raise ConfigError(f"duplicate strategy kinds in {kinds}")
    for spec in grid.strategies:
        if spec.kind not in STRATEGY_KINDS:
            raise ConfigError(f"unknown strategy kind {spec.kind!r}")


def run_sequence(grid: ExperimentGrid, vf: ValueFunction | None = None) -> list[SequencePoint]:
    """Per-round cumulative profit for a single fully-specified instance.

    Requires every grid list to be a singleton.  Sequential strategies emit
    one point per purchase, padded with their final profit out to the
    longest run; the exhaustive optimum contributes a single terminal point
    at its chosen coalition size.
    """
    for name, values in [("tcod_values", grid.tcod_values), ("mup_values", grid.mup_values),
                         ("di_values", grid.di_values), ("pricing_kinds", grid.pricing_kinds),
                         ("lambda_values", grid.lambda_values)]:
        if len(values) != 1:
            raise ConfigError(f"sequence runs need exactly one value in {name}, got {len(values)}")
    vf = vf or ValueFunction.identity()
    cell = grid.cells()[0]
    tcod, mup, di, pricing, lam = cell
    oracle = grid.oracle.build(mup, di)
    base = grid.oracle.base_catalog()
    shapley_cache = None
    if pricing == "shapley":
        shapley_cache = _cell_shapley(grid, oracle, vf,
                                      derive_seed("shapley-pricing", grid.base_seed, cell))
    run_seed = derive_seed("run", grid.base_seed, tcod, mup, di, pricing, lam, 0)
    catalog = _instance_catalog(grid, oracle, base, tcod, pricing, run_seed, vf,
                                shapley_cache)

    traces = {}
    for spec in grid.strategies:
        if spec.kind == "optimal":
            traces[spec.kind] = run_optimal(catalog, oracle, vf)
        else:
            cfg = StrategyConfig(kind=spec.kind,
                                 lam=lam if spec.lam is None else spec.lam,
                                 a_star_override=spec.a_star_override,
                                 query_budget=spec.query_budget,
                                 seed=derive_seed("strategy", run_seed, spec.kind))
            traces[spec.kind] = run_strategy(catalog, oracle, vf, cfg)

    sequential = [s.kind for s in grid.strategies if s.kind != "optimal"]
    max_rounds = max((len(traces[k].rounds) for k in sequential), default=0)
    points: list[SequencePoint] = []
    for spec in grid.strategies:
        trace = traces[spec.kind]
        if spec.kind == "optimal":
            points.append(SequencePoint(round=len(trace.rounds), strategy="optimal",
                                        cum_profit=trace.final_profit))
            continue
        for r in trace.rounds:
            points.append(SequencePoint(round=r.round, strategy=spec.kind,
                                        cum_profit=r.cum_profit_after))
        for k in range(len(trace.rounds) + 1, max_rounds + 1):
            points.append(SequencePoint(round=k, strategy=spec.kind,
                                        cum_profit=trace.final_profit))
    return points


def _fmt(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


EXPERIMENT_COLUMNS = ["strategy", "tcod", "mup", "di", "pricing", "lambda",
                      "mean_profit", "std_profit", "mean_relative_profit", "n_runs"]


def write_experiment_csv(rows: Iterable[ResultRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EXPERIMENT_COLUMNS)
        for row in rows:
            writer.writerow([row.strategy, _fmt(row.tcod), _fmt(row.mup), _fmt(row.di),
                             row.pricing, _fmt(row.lam), _fmt(row.mean_profit),
                             _fmt(row.std_profit), _fmt(row.mean_relative_profit),
                             row.n_runs])


def write_sequence_csv(points: Iterable[SequencePoint], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "strategy", "cum_profit"])
        for p in points:
            writer.writerow([p.round, p.strategy, _fmt(p.cum_profit)])
