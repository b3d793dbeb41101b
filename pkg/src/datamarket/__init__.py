"""Simulation library for data-marketplace purchase strategies.

Compares an exhaustive full-information buyer, two try-before-you-buy
strategies driven by marketplace accuracy measurements, and two
value-agnostic heuristics, over a parametric synthetic accuracy model or
file-backed coalition-accuracy tables, with Shapley-based pricing and a
reproducible parameter-sweep harness.
"""

__version__ = "0.1.0"

from .catalog import (
    EXHAUSTIVE_LIMIT,
    Catalog,
    Coalition,
    Dataset,
    PurchaseState,
    PurchaseTrace,
    StopReason,
    TraceRound,
    ValueFunction,
    coalition_of,
    load_catalog,
    make_catalog,
    members,
    profit,
    save_catalog,
    tcod,
)
from .errors import (
    CatalogError,
    ConfigError,
    DataMarketError,
    PricingError,
    SizeLimitError,
    TableLoadError,
)
from .harness import (
    ExperimentGrid,
    GridResult,
    OracleSpec,
    ResultRow,
    SequencePoint,
    StrategySpec,
    VolumeSpec,
    run_grid,
    run_sequence,
    write_experiment_csv,
    write_sequence_csv,
)
from .oracles import (
    AccuracyOracle,
    CoalitionTable,
    FunctionOracle,
    OracleSession,
    SyntheticOracle,
    TableOracle,
    load_table,
    monotonize,
    table_from_rows,
)
from .pricing import PricingScheme, apply_pricing, generate_volumes
from .seeding import derive_seed
from .shapley import ShapleyResult, shapley_exact, shapley_monte_carlo
from .strategies import (
    StrategyConfig,
    run_a_tbyb,
    run_optimal,
    run_price_heuristic,
    run_s_tbyb,
    run_strategy,
    run_volume_heuristic,
)

__all__ = [name for name in dir() if not name.startswith("_")]
