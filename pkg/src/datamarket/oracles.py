"""Accuracy oracles: the map from coalitions of datasets to model accuracy.

Two implementations are provided.  :class:`SyntheticOracle` is a two-knob
parametric model: a geometric importance ratio between consecutive datasets
(``di``) and an exponent shaping marginal returns (``mup``; below 1 concave,
above 1 convex).  :class:`TableOracle` serves precomputed coalition
accuracies from a file, monotonized so that adding data never hurts --
"accuracy of a coalition" always means the best achievable over its subsets.

Coalitions are int bitmasks, as everywhere in this package.  Oracles are
immutable after construction and safe to share across runs; per-run query
accounting is done by wrapping an oracle in :class:`OracleSession`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .catalog import Coalition
from .errors import TableLoadError

#: Largest table for which a dense 2^n accuracy array is built.
TABLE_LIMIT = 20


class AccuracyOracle:
    """Base contract: coalition -> accuracy in [0, 1], with accuracy(empty) = 0."""

    n: int

    def accuracy(self, coalition: Coalition) -> float:
        raise NotImplementedError

    def max_accuracy(self) -> float:
        """Best accuracy attainable from the full catalog."""
        return self.accuracy((1 << self.n) - 1)

    def dense_accuracies(self) -> np.ndarray:
        """Accuracy for every coalition, indexed by bitmask.

        The generic implementation queries one coalition at a time;
        subclasses override with vectorized versions.
        """
        return np.array([self.accuracy(mask) for mask in range(1 << self.n)], dtype=np.float64)

    @property
    def full_coalition(self) -> Coalition:
        return (1 << self.n) - 1


class SyntheticOracle(AccuracyOracle):
    """Parametric accuracy model over ``n`` datasets.

    Dataset k carries weight ``di ** (k + 1)``; the accuracy of a coalition
    is its weight fraction of the whole catalog raised to ``mup``:

        accuracy(S) = (sum of weights in S / total weight) ** mup

    By construction accuracy(empty) = 0 and accuracy(full) = 1.  Shifting
    the exponent convention (``di**k`` instead of ``di**(k+1)``) cancels in
    the ratio and changes nothing observable.
    """

    def __init__(self, n: int, mup: float = 1.0, di: float = 1.0):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if mup <= 0:
            raise ValueError(f"mup must be > 0, got {mup}")
        if di < 1:
            raise ValueError(f"di must be >= 1, got {di}")
        self.n = n
        self.mup = float(mup)
        self.di = float(di)
        self.weights = [float(di) ** (k + 1) for k in range(n)]
        # Sequential sum in id order: keeps the scalar and dense paths
        # bit-identical and accuracy(full) exactly 1.0.
        self.weight_total = 0.0
        for w in self.weights:
            self.weight_total += w

    def accuracy(self, coalition: Coalition) -> float:
        total = 0.0
        k = 0
        while coalition:
            if coalition & 1:
                total += self.weights[k]
            coalition >>= 1
            k += 1
        if total == 0.0:
            return 0.0
        return (total / self.weight_total) ** self.mup

    def max_accuracy(self) -> float:
        return 1.0

    def dense_accuracies(self) -> np.ndarray:
        sums = np.zeros(1, dtype=np.float64)
        for w in self.weights:
            sums = np.concatenate([sums, sums + w])
        acc = (sums / self.weight_total) ** self.mup
        acc[0] = 0.0
        return acc


@dataclass(frozen=True)
class CoalitionTable:
    """Dense, monotonized coalition-accuracy table."""

    n: int
    raw: dict[int, float]
    monotone: np.ndarray
    a_star: float


def monotonize(raw_dense: np.ndarray, n: int) -> np.ndarray:
    """Replace each coalition's accuracy with the max over all its subsets.

    Running max along each bit axis of the subset lattice; O(n * 2^n).
    """
    arr = raw_dense.astype(np.float64).reshape((2,) * n)
    for axis in range(n):
        np.maximum.accumulate(arr, axis=axis, out=arr)
    return arr.reshape(-1)


def table_from_rows(rows: dict[int, float], n: int) -> CoalitionTable:
    """Build a monotonized table from ``{bitmask: accuracy}`` measurements.

    Coalitions missing from ``rows`` default to accuracy 0 before
    monotonization.  Note this understates mid-size coalitions in partial
    tables where only singletons and the grand coalition were measured.
    """
    if n < 1:
        raise TableLoadError(f"table size must be >= 1, got {n}")
    if n > TABLE_LIMIT:
        raise TableLoadError(f"table size {n} exceeds the dense-table limit of {TABLE_LIMIT}")
    size = 1 << n
    dense = np.zeros(size, dtype=np.float64)
    for mask, acc in rows.items():
        if not 0 <= mask < size:
            raise TableLoadError(f"coalition bitmask {mask} out of range for n={n}")
        if not 0.0 <= acc <= 1.0:
            raise TableLoadError(f"coalition {mask}: accuracy {acc} outside [0, 1]")
        dense[mask] = acc
    if dense[0] != 0.0:
        raise TableLoadError("empty coalition must have accuracy 0")
    monotone = monotonize(dense, n)
    return CoalitionTable(n=n, raw=dict(rows), monotone=monotone, a_star=float(monotone[size - 1]))


def load_table(path: str, n: int) -> CoalitionTable:
    """Read measurements from CSV with header ``coalition,accuracy``.

    ``coalition`` is the decimal bitmask with bit i = dataset id i.
    """
    rows: dict[int, float] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != ["coalition", "accuracy"]:
            raise TableLoadError(f"{path}: expected header 'coalition,accuracy', got {reader.fieldnames}")
        for lineno, row in enumerate(reader, start=2):
            try:
                mask = int(row["coalition"])
                acc = float(row["accuracy"])
            except (TypeError, ValueError) as exc:
                raise TableLoadError(f"{path}:{lineno}: malformed row {row}") from exc
            if mask in rows:
                raise TableLoadError(f"{path}:{lineno}: duplicate coalition bitmask {mask}")
            rows[mask] = acc
    try:
        return table_from_rows(rows, n)
    except TableLoadError as exc:
        raise TableLoadError(f"{path}: {exc}") from exc


class TableOracle(AccuracyOracle):
    """Serves accuracies from a monotonized :class:`CoalitionTable`."""

    def __init__(self, table: CoalitionTable):
        self.n = table.n
        self.table = table

    @staticmethod
    def from_file(path: str, n: int) -> "TableOracle":
        return TableOracle(load_table(path, n))

    def accuracy(self, coalition: Coalition) -> float:
        return float(self.table.monotone[coalition])

    def max_accuracy(self) -> float:
        return self.table.a_star

    def dense_accuracies(self) -> np.ndarray:
        return self.table.monotone


class FunctionOracle(AccuracyOracle):
    """Wraps an arbitrary ``coalition -> accuracy`` callable. Handy in tests."""

    def __init__(self, n: int, fn, a_star: float | None = None):
        self.n = n
        self._fn = fn
        self._a_star = a_star

    def accuracy(self, coalition: Coalition) -> float:
        return float(self._fn(coalition))

    def max_accuracy(self) -> float:
        if self._a_star is not None:
            return self._a_star
        return self.accuracy(self.full_coalition)


class OracleSession:
    """Per-run view of a shared oracle that counts queries.

    Strategies create one session per run, so concurrent runs over the same
    oracle keep independent counters.
    """

    def __init__(self, oracle: AccuracyOracle):
        self.oracle = oracle
        self.queries = 0

    def accuracy(self, coalition: Coalition) -> float:
        self.queries += 1
        return self.oracle.accuracy(coalition)
