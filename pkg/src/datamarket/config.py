"""JSON experiment configuration: parsing, validation, hashing.

A config document has sections ``oracle``, ``pricing``, ``volumes``,
``strategies``, ``grid`` and ``output``; see the README for the field
reference.  Loading produces an :class:`~datamarket.harness.ExperimentGrid`
plus the output directory, and applies the static size checks so oversized
exhaustive paths fail before any work starts.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, replace

from .catalog import EXHAUSTIVE_LIMIT
from .errors import ConfigError, SizeLimitError
from .harness import ExperimentGrid, OracleSpec, StrategySpec, VolumeSpec
from .oracles import TABLE_LIMIT
from .pricing import PRICING_KINDS, VOLUME_KINDS
from .shapley import EXACT_LIMIT
from .strategies import STRATEGY_KINDS


@dataclass(frozen=True)
class ExperimentConfig:
    grid: ExperimentGrid
    output_dir: str
    source_sha256: str


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing required key {where}.{key}")
    return section[key]


def _floats(values, where: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where} must be a list of numbers, got {values!r}") from exc


def config_sha256(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def load_config(path: str, seed_override: int | None = None,
                out_override: str | None = None) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")

    grid = parse_grid(doc, base_dir=os.path.dirname(os.path.abspath(path)))
    if seed_override is not None:
        grid = replace(grid, base_seed=seed_override)
    output = doc.get("output", {})
    out_dir = out_override or output.get("dir", "out")
    check_size_limits(grid)
    return ExperimentConfig(grid=grid, output_dir=out_dir, source_sha256=config_sha256(raw))


def parse_grid(doc: dict, base_dir: str = ".") -> ExperimentGrid:
    oracle_sec = _require(doc, "oracle", "")
    kind = _require(oracle_sec, "kind", "oracle")
    if kind not in ("synthetic", "table"):
        raise ConfigError(f"oracle.kind must be 'synthetic' or 'table', got {kind!r}")
    if kind == "synthetic":
        n = int(oracle_sec.get("n", 10))
    else:
        n = int(_require(oracle_sec, "n", "oracle"))
    if n < 1:
        raise ConfigError(f"oracle.n must be >= 1, got {n}")

    def _resolve(p: str | None) -> str | None:
        if p is None:
            return None
        return p if os.path.isabs(p) else os.path.join(base_dir, p)

    oracle = OracleSpec(kind=kind, n=n,
                        table_path=_resolve(oracle_sec.get("path")),
                        catalog_path=_resolve(oracle_sec.get("catalog")))
    if kind == "table":
        if oracle.table_path is None:
            raise ConfigError("oracle.path is required for table oracles")
        if n > TABLE_LIMIT:
            raise SizeLimitError(f"table oracle supports n <= {TABLE_LIMIT}, got {n}")

    grid_sec = _require(doc, "grid", "")
    pricing_sec = doc.get("pricing", {})

    # Singleton list fallbacks: a fixed oracle.mup / pricing.tcod etc. stands
    # in for a one-value sweep list, which keeps single-instance configs
    # (e.g. for sequence runs) free of boilerplate.
    def _values(grid_key: str, fallback_sec: dict, fallback_key: str):
        if grid_key in grid_sec:
            return grid_sec[grid_key]
        if fallback_key in fallback_sec:
            return [fallback_sec[fallback_key]]
        raise ConfigError(f"missing grid.{grid_key}")

    tcods = _floats(_values("tcod_values", pricing_sec, "tcod"), "grid.tcod_values")
    if any(t <= 0 for t in tcods):
        raise ConfigError("grid.tcod_values must all be > 0")
    lambdas = _floats(_require(grid_sec, "lambda_values", "grid"), "grid.lambda_values")
    if any(l < 0 for l in lambdas):
        raise ConfigError("grid.lambda_values must all be >= 0")
    pricing_kinds = tuple(_values("pricing_kinds", pricing_sec, "kind"))
    for p in pricing_kinds:
        if p not in PRICING_KINDS:
            raise ConfigError(f"unknown pricing kind {p!r}; expected one of {PRICING_KINDS}")

    if kind == "synthetic":
        mups = _floats(_values("mup_values", oracle_sec, "mup"), "grid.mup_values")
        dis = _floats(_values("di_values", oracle_sec, "di"), "grid.di_values")
        if any(m <= 0 for m in mups):
            raise ConfigError("grid.mup_values must all be > 0")
        if any(d < 1 for d in dis):
            raise ConfigError("grid.di_values must all be >= 1")
    else:
        if grid_sec.get("mup_values") or grid_sec.get("di_values"):
            raise ConfigError("mup_values/di_values do not apply to table oracles")
        mups = (None,)
        dis = (None,)

    strategies_sec = _require(doc, "strategies", "")
    if not isinstance(strategies_sec, list) or not strategies_sec:
        raise ConfigError("strategies must be a non-empty list")
    strategies = []
    for i, s in enumerate(strategies_sec):
        skind = _require(s, "kind", f"strategies[{i}]")
        if skind not in STRATEGY_KINDS:
            raise ConfigError(f"strategies[{i}].kind {skind!r} not one of {STRATEGY_KINDS}")
        budget = s.get("query_budget")
        override = s.get("a_star_override")
        lam = s.get("lambda")
        if override is not None and not 0.0 < float(override) <= 1.0:
            raise ConfigError(f"strategies[{i}].a_star_override must be in (0, 1]")
        if lam is not None and float(lam) < 0:
            raise ConfigError(f"strategies[{i}].lambda must be >= 0")
        strategies.append(StrategySpec(kind=skind,
                                       query_budget=None if budget is None else int(budget),
                                       a_star_override=None if override is None else float(override),
                                       lam=None if lam is None else float(lam)))

    volumes_sec = doc.get("volumes", {})
    vol_kind = volumes_sec.get("kind", "uniform")
    if vol_kind not in VOLUME_KINDS + ("catalog",):
        raise ConfigError(f"volumes.kind must be one of {VOLUME_KINDS + ('catalog',)}, got {vol_kind!r}")
    volumes = VolumeSpec(kind=vol_kind, sigma=float(volumes_sec.get("sigma", 0.5)))

    shapley_samples = pricing_sec.get("shapley_samples")

    repetitions = int(grid_sec.get("repetitions", 50))
    base_seed = int(grid_sec.get("base_seed", 0))

    return ExperimentGrid(oracle=oracle, tcod_values=tcods, mup_values=mups, di_values=dis,
                          pricing_kinds=pricing_kinds, lambda_values=lambdas,
                          strategies=tuple(strategies), repetitions=repetitions,
                          base_seed=base_seed, volumes=volumes,
                          shapley_samples=None if shapley_samples is None else int(shapley_samples))


def check_size_limits(grid: ExperimentGrid) -> None:
    """Static checks for exhaustive code paths; raise before running anything."""
    n = grid.oracle.n
    if any(s.kind == "optimal" for s in grid.strategies) and n > EXHAUSTIVE_LIMIT:
        raise SizeLimitError(
            f"optimal strategy enumerates 2^n subsets and supports n <= {EXHAUSTIVE_LIMIT}, "
            f"got n = {n}")
    if "shapley" in grid.pricing_kinds and n > EXACT_LIMIT and not grid.shapley_samples:
        raise SizeLimitError(
            f"shapley pricing with n = {n} > {EXACT_LIMIT} needs pricing.shapley_samples")
    if grid.repetitions < 1:
        raise ConfigError(f"grid.repetitions must be >= 1, got {grid.repetitions}")
