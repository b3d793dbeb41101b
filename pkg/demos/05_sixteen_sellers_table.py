"""
A file-backed marketplace: sixteen sellers, measured accuracies
===============================================================

Instead of a formula, accuracy comes from a coalition table: one measured
accuracy per subset of sellers, monotonized so that a coalition is always
worth at least as much as its best subset.  The bundled fixture mimics a
real forecasting marketplace: sixteen sellers, best attainable accuracy
0.896294, strongly dispersed per-seller Shapley values, and dataset volumes
only weakly correlated with usefulness.

With volumes that only loosely track value, buying by volume beats buying
by price alone when data is cheap, and the advantage evaporates once the
catalog gets expensive.
"""

import os

import numpy as np

from datamarket import (
    ExperimentGrid,
    OracleSpec,
    StrategySpec,
    TableOracle,
    VolumeSpec,
    load_catalog,
    run_grid,
    run_sequence,
    shapley_exact,
)

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "datamarket", "data")
ACCURACY = os.path.join(DATA, "sellers16_accuracy.csv")
CATALOG = os.path.join(DATA, "sellers16_catalog.csv")

oracle = TableOracle.from_file(ACCURACY, 16)
catalog = load_catalog(CATALOG)
print(f"sellers: {oracle.n}, best attainable accuracy: {oracle.max_accuracy():.6f}")

values = shapley_exact(oracle).values
print(f"Shapley dispersion: std/mean = {np.std(values) / np.mean(values):.2f}")
print(f"volume-value correlation R^2 = "
      f"{np.corrcoef(catalog.volumes(), values)[0, 1] ** 2:.2f}")

grid = ExperimentGrid(
    oracle=OracleSpec(kind="table", n=16, table_path=ACCURACY, catalog_path=CATALOG),
    tcod_values=(1.0, 2.0, 3.0, 8.0, 10.0),
    pricing_kinds=("uniform",),
    lambda_values=(0.25,),
    strategies=(StrategySpec("volume_heuristic"), StrategySpec("price_heuristic")),
    repetitions=50,
    base_seed=1,
    volumes=VolumeSpec(kind="catalog"),
)
rows = run_grid(grid).rows
print("\nmean profit, buying by volume vs buying by price:")
print("  tcod   volume    price    advantage")
for tcod in grid.tcod_values:
    cell = {r.strategy: r.mean_profit for r in rows if r.tcod == tcod}
    vol, pr = cell["volume_heuristic"], cell["price_heuristic"]
    print(f"  {tcod:4.1f}  {vol:+.4f}  {pr:+.4f}  {vol - pr:+.4f}")

# One instance in detail: the per-round profit trajectory.
seq_grid = ExperimentGrid(
    oracle=grid.oracle, tcod_values=(3.0,), pricing_kinds=("uniform",),
    lambda_values=(0.25,),
    strategies=tuple(StrategySpec(k) for k in
                     ("optimal", "s_tbyb", "a_tbyb", "volume_heuristic", "price_heuristic")),
    repetitions=1, base_seed=1, volumes=VolumeSpec(kind="catalog"))
print("\npurchase sequence at total cost 3.0 (cumulative profit per round):")
for p in run_sequence(seq_grid):
    print(f"  round {p.round}: {p.strategy:18s} {p.cum_profit:+.4f}")
