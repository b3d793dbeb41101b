"""Command-line front end.

Subcommands: ``sweep`` (grid experiment to experiment.csv + manifest),
``sequence`` (per-round profit trace to sequence.csv), ``shapley``
(per-dataset attribution to CSV), ``plot`` (CSV to SVG chart) and
``validate-config``.  All commands are pure functions of their arguments
and input files; nothing depends on clocks or the environment, so repeated
runs produce identical bytes.

Exit codes: 0 success, 2 configuration/input error, 3 size-limit
violation, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import __version__
from .catalog import ValueFunction, load_catalog
from .config import load_config
from .errors import ConfigError, DataMarketError, PricingError, SizeLimitError, TableLoadError
from .harness import run_grid, run_sequence, write_experiment_csv, write_sequence_csv
from .oracles import SyntheticOracle, TableOracle
from .shapley import shapley_exact, shapley_monte_carlo
from .svgplot import PlotSpec, render_chart

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SIZE = 3
EXIT_IO = 4


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="override the base seed")
    parser.add_argument("--workers", type=int, default=1, help="parallel worker count")
    parser.add_argument("--out", default=None, help="output directory or file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="datamarket",
                                     description="Data-marketplace purchase simulations")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run an experiment grid from a JSON config")
    p.add_argument("config")
    _common_flags(p)

    p = sub.add_parser("sequence", help="per-round purchase sequence for a single instance")
    p.add_argument("config")
    _common_flags(p)

    p = sub.add_parser("shapley", help="per-dataset Shapley attribution")
    p.add_argument("--oracle", choices=["synthetic", "table"], default="synthetic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mup", type=float, default=1.0)
    p.add_argument("--di", type=float, default=1.0)
    p.add_argument("--table", help="coalition-accuracy CSV (table oracle)")
    p.add_argument("--method", choices=["exact", "monte_carlo"], default="exact")
    p.add_argument("--samples", type=int, default=10000)
    _common_flags(p)

    p = sub.add_parser("plot", help="render an SVG line chart from a results CSV")
    p.add_argument("input")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--series", default="strategy")
    p.add_argument("--facet", default=None)
    p.add_argument("--title", default=None)
    _common_flags(p)

    p = sub.add_parser("validate-config", help="check a config file without running it")
    p.add_argument("config")
    _common_flags(p)
    return parser


def _write_manifest(path: str, cfg, rows: int, errors: list[str]) -> None:
    manifest = {
        "config_sha256": cfg.source_sha256,
        "base_seed": cfg.grid.base_seed,
        "version": __version__,
        "rows": rows,
        "cell_errors": errors,
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_sweep(args) -> int:
    cfg = load_config(args.config, seed_override=args.seed, out_override=args.out)
    os.makedirs(cfg.output_dir, exist_ok=True)
    result = run_grid(cfg.grid, workers=args.workers)
    for err in result.cell_errors:
        print(f"warning: {err}", file=sys.stderr)
    out_csv = os.path.join(cfg.output_dir, "experiment.csv")
    write_experiment_csv(result.rows, out_csv)
    _write_manifest(os.path.join(cfg.output_dir, "manifest.json"), cfg,
                    len(result.rows), result.cell_errors)
    print(f"wrote {out_csv} ({len(result.rows)} rows)")
    return EXIT_OK


def cmd_sequence(args) -> int:
    cfg = load_config(args.config, seed_override=args.seed, out_override=args.out)
    os.makedirs(cfg.output_dir, exist_ok=True)
    points = run_sequence(cfg.grid)
    out_csv = os.path.join(cfg.output_dir, "sequence.csv")
    write_sequence_csv(points, out_csv)
    print(f"wrote {out_csv} ({len(points)} rows)")
    return EXIT_OK


def cmd_shapley(args) -> int:
    if args.oracle == "table":
        if not args.table:
            raise ConfigError("--table is required with --oracle table")
        oracle = TableOracle.from_file(args.table, args.n)
    else:
        oracle = SyntheticOracle(args.n, mup=args.mup, di=args.di)
    vf = ValueFunction.identity()
    if args.method == "exact":
        result = shapley_exact(oracle, vf)
    else:
        result = shapley_monte_carlo(oracle, vf, samples=args.samples,
                                     seed=args.seed or 0, workers=args.workers)
    out_path = args.out or "shapley.csv"
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "shapley", "std_error"])
        for i, v in enumerate(result.values):
            se = "" if result.std_error is None else repr(float(result.std_error[i]))
            writer.writerow([i, repr(float(v)), se])
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        with open(args.input, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input}: {exc}") from exc
    spec = PlotSpec(x=args.x, y=args.y, series=args.series, facet=args.facet,
                    title=args.title)
    svg = render_chart(rows, spec)
    out_path = args.out or "chart.svg"
    with open(out_path, "w") as fh:
        fh.write(svg)
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_validate_config(args) -> int:
    cfg = load_config(args.config, seed_override=args.seed, out_override=args.out)
    if cfg.grid.oracle.kind == "table":
        TableOracle.from_file(cfg.grid.oracle.table_path, cfg.grid.oracle.n)
        if cfg.grid.oracle.catalog_path:
            load_catalog(cfg.grid.oracle.catalog_path)
    cells = len(cfg.grid.cells())
    print(f"OK: {cells} cells x {cfg.grid.repetitions} repetitions, "
          f"{len(cfg.grid.strategies)} strategies")
    return EXIT_OK


_COMMANDS = {
    "sweep": cmd_sweep,
    "sequence": cmd_sequence,
    "shapley": cmd_shapley,
    "plot": cmd_plot,
    "validate-config": cmd_validate_config,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ConfigError, TableLoadError, PricingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DataMarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
