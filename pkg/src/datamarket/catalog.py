"""Core domain types for data-marketplace purchase simulations.

A catalog lists datasets offered by sellers, each with a price and a volume.
A buyer assembles a *coalition* of datasets; coalitions are plain ints used
as bitmasks (bit i set means dataset i is included), which keeps exhaustive
subset search and exact Shapley computation cheap for the sizes handled
here.  Accuracy is turned into money through a :class:`ValueFunction`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CatalogError

Coalition = int

#: Largest catalog for which 2^n enumeration (optimal purchase) is allowed.
EXHAUSTIVE_LIMIT = 24


def coalition_of(ids: Iterable[int]) -> Coalition:
    """Build a coalition bitmask from dataset ids."""
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def members(coalition: Coalition) -> Iterator[int]:
    """Yield dataset ids in a coalition, ascending."""
    i = 0
    while coalition:
        if coalition & 1:
            yield i
        coalition >>= 1
        i += 1


@dataclass(frozen=True)
class Dataset:
    """One seller's offer: a stable index, an asking price and a volume."""

    id: int
    price: float
    volume: float = 0.0

    def __post_init__(self) -> None:
        if self.price < 0:
            raise CatalogError(f"dataset {self.id}: price must be >= 0, got {self.price}")
        if self.volume < 0:
            raise CatalogError(f"dataset {self.id}: volume must be >= 0, got {self.volume}")


@dataclass(frozen=True)
class Catalog:
    """Ordered collection of datasets with ids 0..n-1."""

    datasets: tuple[Dataset, ...]

    def __post_init__(self) -> None:
        if len(self.datasets) < 1:
            raise CatalogError("catalog must contain at least one dataset")
        for pos, ds in enumerate(self.datasets):
            if ds.id != pos:
                raise CatalogError(f"dataset ids must be contiguous from 0; position {pos} has id {ds.id}")

    @property
    def n(self) -> int:
        return len(self.datasets)

    @property
    def full_coalition(self) -> Coalition:
        return (1 << self.n) - 1

    def prices(self) -> np.ndarray:
        return np.array([ds.price for ds in self.datasets], dtype=np.float64)

    def volumes(self) -> np.ndarray:
        return np.array([ds.volume for ds in self.datasets], dtype=np.float64)

    def with_prices(self, prices: Sequence[float]) -> "Catalog":
        if len(prices) != self.n:
            raise CatalogError(f"expected {self.n} prices, got {len(prices)}")
        return Catalog(tuple(
            Dataset(ds.id, float(p), ds.volume) for ds, p in zip(self.datasets, prices)
        ))

    def with_volumes(self, volumes: Sequence[float]) -> "Catalog":
        if len(volumes) != self.n:
            raise CatalogError(f"expected {self.n} volumes, got {len(volumes)}")
        return Catalog(tuple(
            Dataset(ds.id, ds.price, float(v)) for ds, v in zip(self.datasets, volumes)
        ))


def make_catalog(prices: Sequence[float], volumes: Sequence[float] | None = None) -> Catalog:
    """Convenience constructor from parallel price/volume sequences."""
    if volumes is None:
        volumes = [0.0] * len(prices)
    return Catalog(tuple(
        Dataset(i, float(p), float(v)) for i, (p, v) in enumerate(zip(prices, volumes))
    ))


def tcod(catalog: Catalog) -> float:
    """Total cost of data: the sum of all asking prices in the catalog.

    Summed sequentially in id order, matching how purchase traces
    accumulate spend.
    """
    total = 0.0
    for ds in catalog.datasets:
        total += ds.price
    return total


def load_catalog(path: str) -> Catalog:
    """Read a catalog from CSV with header ``id,price,volume``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != ["id", "price", "volume"]:
            raise CatalogError(f"{path}: expected header 'id,price,volume', got {reader.fieldnames}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append(Dataset(int(row["id"]), float(row["price"]), float(row["volume"])))
            except (TypeError, ValueError) as exc:
                raise CatalogError(f"{path}:{lineno}: malformed row {row}") from exc
    return Catalog(tuple(rows))


def save_catalog(catalog: Catalog, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "price", "volume"])
        for ds in catalog.datasets:
            writer.writerow([ds.id, repr(ds.price), repr(ds.volume)])


class ValueFunction:
    """Monotone map from accuracy in [0, 1] to monetary value.

    The default is the identity (value equals accuracy).  A piecewise-linear
    table can express any other monotone nondecreasing profile; breakpoints
    must span [0, 1] and have nondecreasing values.
    """

    def __init__(self, xs: Sequence[float] | None = None, ys: Sequence[float] | None = None):
        if xs is None:
            self.kind = "identity"
            self._xs = None
            self._ys = None
            return
        if ys is None:
            raise CatalogError("value table needs both x and y breakpoints")
        xs = [float(x) for x in xs]
        ys = [float(y) for y in ys]  # type: ignore[union-attr]
        if len(xs) != len(ys) or len(xs) < 2:
            raise CatalogError("value table needs >= 2 breakpoints with matching x/y lengths")
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise CatalogError("value table breakpoints must span [0, 1]")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise CatalogError("value table x-breakpoints must be strictly increasing")
        if any(b < a for a, b in zip(ys, ys[1:])):
            raise CatalogError("value table must be monotone nondecreasing")
        if ys[0] < 0:
            raise CatalogError("value at accuracy 0 must be >= 0")
        self.kind = "table"
        self._xs = np.array(xs)
        self._ys = np.array(ys)

    @staticmethod
    def identity() -> "ValueFunction":
        return ValueFunction()

    @staticmethod
    def from_table(points: Sequence[tuple[float, float]]) -> "ValueFunction":
        xs, ys = zip(*points)
        return ValueFunction(xs, ys)

    def __call__(self, accuracy: float) -> float:
        if self.kind == "identity":
            return accuracy
        return float(np.interp(accuracy, self._xs, self._ys))

    def apply(self, accuracies: np.ndarray) -> np.ndarray:
        """Vectorized evaluation, used by the exhaustive code paths."""
        if self.kind == "identity":
            return accuracies
        return np.interp(accuracies, self._xs, self._ys)

    def __repr__(self) -> str:
        if self.kind == "identity":
            return "ValueFunction(identity)"
        return f"ValueFunction(table, {len(self._xs)} breakpoints)"


@dataclass
class PurchaseState:
    """Mutable per-run buyer state: what is owned, what it cost, what it achieves."""

    n: int
    owned: Coalition = 0
    accuracy_now: float = 0.0
    value_now: float = 0.0
    spent: float = 0.0
    round: int = 0

    @property
    def remaining(self) -> Coalition:
        return ((1 << self.n) - 1) & ~self.owned


def profit(state: PurchaseState, vf: ValueFunction) -> float:
    """Current profit: value of the achieved accuracy minus money spent.  May be negative."""
    return vf(state.accuracy_now) - state.spent


class StopReason(str, Enum):
    NO_CANDIDATE = "no_candidate"
    CONDITION_FAILED = "condition_failed"
    CATALOG_EXHAUSTED = "catalog_exhausted"
    QUERY_BUDGET_EXHAUSTED = "query_budget_exhausted"


@dataclass(frozen=True)
class TraceRound:
    """One purchase: which dataset, at what price, and the buyer's position after."""

    round: int
    dataset: int
    price: float
    accuracy_after: float
    cum_profit_after: float


@dataclass(frozen=True)
class PurchaseTrace:
    """Ordered record of a strategy run.

    ``rounds_attempted`` counts every round in which a candidate was
    evaluated, including a final round whose buy condition failed; it is the
    round count that bounds oracle usage for the marginal-query strategy.
    """

    rounds: tuple[TraceRound, ...]
    final_profit: float
    stop_reason: StopReason
    queries_used: int = 0
    rounds_attempted: int = 0

    def purchased_ids(self) -> list[int]:
        return [r.dataset for r in self.rounds]

    def purchased_coalition(self) -> Coalition:
        return coalition_of(self.purchased_ids())

    @property
    def final_accuracy(self) -> float:
        return self.rounds[-1].accuracy_after if self.rounds else 0.0
