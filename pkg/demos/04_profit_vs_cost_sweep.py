"""
Sweeping total cost: when does smart buying matter?
===================================================

Runs every strategy across a range of total catalog costs, averaged over
repetitions with paired randomness (each repetition prices the catalog once
and lets every strategy buy from the identical instance), then renders the
profit curves to an SVG.

The same sweep is available from the command line:

    datamarket sweep config.json --out out/
    datamarket plot out/experiment.csv --x tcod --y mean_profit --facet mup --out chart.svg
"""

import os

from datamarket import (
    ExperimentGrid,
    OracleSpec,
    StrategySpec,
    run_grid,
    write_experiment_csv,
)
from datamarket.svgplot import PlotSpec, render_chart

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

grid = ExperimentGrid(
    oracle=OracleSpec(kind="synthetic", n=10),
    tcod_values=(0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0),
    mup_values=(0.5, 1.0, 3.0),
    di_values=(2.0,),
    pricing_kinds=("random",),
    lambda_values=(0.1,),
    strategies=tuple(StrategySpec(k) for k in
                     ("optimal", "s_tbyb", "a_tbyb", "volume_heuristic", "price_heuristic")),
    repetitions=50,
    base_seed=1,
)

result = run_grid(grid, workers=4)
csv_path = os.path.join(OUT, "experiment.csv")
write_experiment_csv(result.rows, csv_path)
print(f"wrote {csv_path} ({len(result.rows)} rows)")

for mup in (0.5, 1.0, 3.0):
    print(f"\nmean profit vs total cost, mup={mup}:")
    print("  tcod   optimal  s_tbyb   a_tbyb   volume   price")
    for tcod in grid.tcod_values:
        cell = {r.strategy: r.mean_profit for r in result.rows
                if r.tcod == tcod and r.mup == mup}
        print(f"  {tcod:4.1f}  {cell['optimal']:+.4f}  {cell['s_tbyb']:+.4f}  "
              f"{cell['a_tbyb']:+.4f}  {cell['volume_heuristic']:+.4f}  "
              f"{cell['price_heuristic']:+.4f}")

import csv
with open(csv_path, newline="") as fh:
    rows = list(csv.DictReader(fh))
svg = render_chart(rows, PlotSpec(x="tcod", y="mean_profit", series="strategy",
                                  facet="mup", title="profit"))
svg_path = os.path.join(OUT, "profit_vs_cost.svg")
with open(svg_path, "w") as fh:
    fh.write(svg)
print(f"\nwrote {svg_path}")
