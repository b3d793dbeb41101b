"""Per-dataset price assignment, scaled to a target total cost of data.

Four schemes: every dataset at the same price, seed-deterministic random
prices, prices proportional to exact (or sampled) Shapley value, and prices
proportional to volume.  All schemes produce nonnegative prices that sum to
the requested total within 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import Catalog, ValueFunction
from .errors import PricingError
from .oracles import AccuracyOracle
from .shapley import EXACT_LIMIT, ShapleyResult, shapley_exact, shapley_monte_carlo

PRICING_KINDS = ("uniform", "random", "shapley", "volume")

VOLUME_KINDS = ("uniform", "importance")


@dataclass(frozen=True)
class PricingScheme:
    """How to set prices and what they must add up to."""

    kind: str
    tcod: float
    seed: int = 0
    shapley_samples: int | None = None  # Monte Carlo fallback when n > EXACT_LIMIT

    def __post_init__(self) -> None:
        if self.kind not in PRICING_KINDS:
            raise PricingError(f"unknown pricing kind {self.kind!r}; expected one of {PRICING_KINDS}")
        if self.tcod <= 0:
            raise PricingError(f"tcod must be > 0, got {self.tcod}")


def _scale_shares(shares: np.ndarray, total: float, what: str) -> np.ndarray:
    share_sum = float(np.sum(shares))
    if share_sum <= 0.0:
        raise PricingError(f"degenerate pricing: all {what} are zero")
    return shares / share_sum * total


def apply_pricing(catalog: Catalog, scheme: PricingScheme,
                  oracle: AccuracyOracle | None = None,
                  vf: ValueFunction | None = None,
                  shapley_values: ShapleyResult | None = None) -> Catalog:
    """Return a copy of ``catalog`` repriced under ``scheme``.

    The shapley kind needs ``oracle`` (and optionally a precomputed
    ``shapley_values``, which lets sweep runners price many repetitions
    without recomputing the attribution).
    """
    n = catalog.n
    if scheme.kind == "uniform":
        prices = np.full(n, scheme.tcod / n)
    elif scheme.kind == "random":
        rng = np.random.default_rng(scheme.seed)
        prices = _scale_shares(rng.random(n), scheme.tcod, "random draws")
    elif scheme.kind == "volume":
        prices = _scale_shares(catalog.volumes(), scheme.tcod, "volumes")
    else:  # shapley
        if shapley_values is None:
            if oracle is None:
                raise PricingError("shapley pricing needs an accuracy oracle")
            if oracle.n > EXACT_LIMIT and scheme.shapley_samples:
                shapley_values = shapley_monte_carlo(
                    oracle, vf, samples=scheme.shapley_samples, seed=scheme.seed)
            else:
                shapley_values = shapley_exact(oracle, vf)
        # Monte Carlo estimates can dip below zero; clamp only here.
        prices = _scale_shares(np.maximum(shapley_values.values, 0.0), scheme.tcod,
                               "Shapley shares")
    return catalog.with_prices(prices)


def generate_volumes(n: int, kind: str = "uniform", seed: int = 0, sigma: float = 0.5,
                     weights: np.ndarray | None = None) -> np.ndarray:
    """Draw synthetic dataset volumes.

    ``uniform`` draws volumes independent of anything (value and volume
    uncorrelated); ``importance`` makes volume proportional to the provided
    importance weights times a lognormal factor, for scenarios where size
    loosely tracks worth.
    """
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        return rng.random(n)
    if kind == "importance":
        if weights is None:
            raise PricingError("importance volumes need per-dataset weights")
        if len(weights) != n:
            raise PricingError(f"expected {n} weights, got {len(weights)}")
        return np.asarray(weights, dtype=np.float64) * rng.lognormal(0.0, sigma, n)
    raise PricingError(f"unknown volume kind {kind!r}; expected one of {VOLUME_KINDS}")
