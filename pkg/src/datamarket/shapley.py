"""Shapley values of datasets for the game "value of the coalition's accuracy".

The characteristic function composes the buyer's value function with the
accuracy oracle, so with the identity value function this attributes
accuracy itself.  Exact computation enumerates all 2^n coalitions with
precomputed factorial weights; the Monte Carlo estimator averages marginal
contributions over uniformly random orderings and reports a standard error
per player.

Monte Carlo sampling is organized in fixed-size chunks whose seeds derive
from (seed, chunk index) and whose results are merged in chunk order, so a
given seed yields bit-identical values no matter how many workers evaluate
the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .catalog import ValueFunction
from .errors import SizeLimitError
from .oracles import AccuracyOracle
from .seeding import derive_seed

#: Exact enumeration bound: 2^20 coalition evaluations is the most we allow.
EXACT_LIMIT = 20

_MC_CHUNK = 256


@dataclass(frozen=True)
class ShapleyResult:
    """Per-dataset attribution of the grand coalition's value."""

    values: np.ndarray
    method: str  # "exact" | "monte_carlo"
    samples: int | None = None
    seed: int | None = None
    std_error: np.ndarray | None = None


def popcounts(size_bits: int) -> np.ndarray:
    """Bit-count of every mask below 2^size_bits."""
    counts = np.zeros(1, dtype=np.int64)
    for _ in range(size_bits):
        counts = np.concatenate([counts, counts + 1])
    return counts


def shapley_exact(oracle: AccuracyOracle, vf: ValueFunction | None = None) -> ShapleyResult:
    """Exact Shapley values by subset enumeration.

    values[i] = sum over S not containing i of
                |S|! (n-|S|-1)! / n! * (phi(S + i) - phi(S))
    """
    n = oracle.n
    if n > EXACT_LIMIT:
        raise SizeLimitError(
            f"exact Shapley enumeration supports n <= {EXACT_LIMIT}, got {n}; "
            f"use shapley_monte_carlo instead"
        )
    vf = vf or ValueFunction.identity()
    phi = vf.apply(oracle.dense_accuracies())
    counts = popcounts(n)
    fact = [math.factorial(k) for k in range(n + 1)]
    weights = np.array([fact[s] * fact[n - s - 1] / fact[n] for s in range(n)])

    masks = np.arange(1 << n, dtype=np.int64)
    values = np.zeros(n, dtype=np.float64)
    for i in range(n):
        bit = 1 << i
        without = masks[(masks & bit) == 0]
        marginal = phi[without | bit] - phi[without]
        values[i] = float(np.sum(weights[counts[without]] * marginal))
    return ShapleyResult(values=values, method="exact")


def _mc_chunk(oracle: AccuracyOracle, vf: ValueFunction, seed: int, chunk_index: int,
              chunk_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Sum and sum-of-squares of marginal contributions over one chunk of permutations."""
    n = oracle.n
    rng = np.random.default_rng(derive_seed("shapley-mc", seed, chunk_index))
    total = np.zeros(n, dtype=np.float64)
    total_sq = np.zeros(n, dtype=np.float64)
    for _ in range(chunk_size):
        perm = rng.permutation(n)
        mask = 0
        prev = vf(oracle.accuracy(0))
        for player in perm:
            mask |= 1 << int(player)
            cur = vf(oracle.accuracy(mask))
            contrib = cur - prev
            total[player] += contrib
            total_sq[player] += contrib * contrib
            prev = cur
    return total, total_sq


def shapley_monte_carlo(oracle: AccuracyOracle, vf: ValueFunction | None = None, *,
                        samples: int, seed: int = 0, workers: int = 1) -> ShapleyResult:
    """Permutation-sampling Shapley estimate with per-player standard errors.

    Each of ``samples`` random orderings contributes one marginal-contribution
    observation per player; the estimate is their mean.  ``workers`` only
    parallelizes chunk evaluation and never changes the result.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    vf = vf or ValueFunction.identity()
    n = oracle.n
    chunk_sizes = [_MC_CHUNK] * (samples // _MC_CHUNK)
    if samples % _MC_CHUNK:
        chunk_sizes.append(samples % _MC_CHUNK)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda ic: _mc_chunk(oracle, vf, seed, ic[0], ic[1]),
                enumerate(chunk_sizes),
            ))
    else:
        results = [_mc_chunk(oracle, vf, seed, ci, cs) for ci, cs in enumerate(chunk_sizes)]

    total = np.zeros(n, dtype=np.float64)
    total_sq = np.zeros(n, dtype=np.float64)
    for t, tsq in results:  # fixed chunk order: reduction is deterministic
        total += t
        total_sq += tsq

    values = total / samples
    if samples > 1:
        variance = np.maximum(total_sq / samples - values ** 2, 0.0) * samples / (samples - 1)
        std_error = np.sqrt(variance / samples)
    else:
        std_error = np.zeros(n, dtype=np.float64)
    return ShapleyResult(values=values, method="monte_carlo", samples=samples, seed=seed,
                         std_error=std_error)
