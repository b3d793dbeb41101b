"""The five purchase strategies, from full information down to price-only.

* ``optimal``          -- exhaustive search over all 2^n coalitions.
* ``s_tbyb``           -- try-before-you-buy on individual accuracies only:
                          the marketplace reveals each dataset's stand-alone
                          accuracy once, and marginal gains are estimated
                          from the dilution observed so far.
* ``a_tbyb``           -- assisted try-before-you-buy: every round the
                          marketplace answers marginal-accuracy queries for
                          each remaining dataset.
* ``volume_heuristic`` -- buy the best volume-per-price dataset while its
                          price stays within the admissible loss.
* ``price_heuristic``  -- buy uniformly at random among datasets cheap
                          enough for the admissible loss.

Every strategy returns a :class:`PurchaseTrace` and is deterministic given
(catalog, oracle, config); randomized strategies draw from a generator
seeded by the config.  The risk appetite ``lam`` bounds the loss the buyer
accepts per purchase as a fraction of the value still on the table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import (
    EXHAUSTIVE_LIMIT,
    Catalog,
    PurchaseState,
    PurchaseTrace,
    StopReason,
    TraceRound,
    ValueFunction,
    members,
)
from .errors import SizeLimitError
from .oracles import AccuracyOracle, OracleSession
from .shapley import popcounts

STRATEGY_KINDS = ("optimal", "s_tbyb", "a_tbyb", "volume_heuristic", "price_heuristic")

#: Guard for the gain estimator's denominator; below this the ratio is left neutral.
_RHO_EPS = 1e-12


@dataclass(frozen=True)
class StrategyConfig:
    """Strategy selection plus the knobs shared across strategies.

    ``lam`` is the maximum relative admissible loss per purchase.
    ``a_star_override`` replaces the oracle's advertised best accuracy with
    the buyer's own guess.  ``query_budget`` caps total marginal-accuracy
    queries for ``a_tbyb``.  ``seed`` drives the price heuristic's choices.
    """

    kind: str
    lam: float = 0.1
    a_star_override: float | None = None
    query_budget: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}; expected one of {STRATEGY_KINDS}")
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.a_star_override is not None and not 0.0 < self.a_star_override <= 1.0:
            raise ValueError(f"a_star_override must be in (0, 1], got {self.a_star_override}")


def _a_star(oracle: AccuracyOracle, cfg: StrategyConfig) -> float:
    return cfg.a_star_override if cfg.a_star_override is not None else oracle.max_accuracy()


def _finish(state: PurchaseState, rounds: list[TraceRound], vf: ValueFunction,
            reason: StopReason, session: OracleSession | None, attempts: int,
            extra_queries: int = 0) -> PurchaseTrace:
    final = vf(state.accuracy_now) - state.spent
    queries = (session.queries if session is not None else 0) + extra_queries
    return PurchaseTrace(rounds=tuple(rounds), final_profit=final, stop_reason=reason,
                         queries_used=queries, rounds_attempted=attempts)


def _buy(state: PurchaseState, rounds: list[TraceRound], vf: ValueFunction,
         dataset: int, price: float, accuracy_after: float) -> None:
    state.owned |= 1 << dataset
    state.spent += price
    state.accuracy_now = accuracy_after
    state.value_now = vf(accuracy_after)
    state.round += 1
    rounds.append(TraceRound(round=state.round, dataset=dataset, price=price,
                             accuracy_after=accuracy_after,
                             cum_profit_after=state.value_now - state.spent))


def run_optimal(catalog: Catalog, oracle: AccuracyOracle,
                vf: ValueFunction | None = None) -> PurchaseTrace:
    """Profit-maximizing coalition under full information.

    Enumerates every subset; the empty set is eligible, so the result never
    loses money.  Equal-profit ties go to fewer datasets, then to the
    smaller bitmask.  The trace lists the chosen datasets in ascending id
    order.
    """
    n = catalog.n
    if n > EXHAUSTIVE_LIMIT:
        raise SizeLimitError(f"optimal search enumerates 2^n subsets and supports "
                             f"n <= {EXHAUSTIVE_LIMIT}, got {n}")
    vf = vf or ValueFunction.identity()

    accuracies = oracle.dense_accuracies()
    costs = np.zeros(1, dtype=np.float64)
    for ds in catalog.datasets:  # ascending-bit order matches sequential spend
        costs = np.concatenate([costs, costs + ds.price])
    profits = vf.apply(accuracies) - costs

    best = float(np.max(profits))
    candidates = np.flatnonzero(profits == best)
    counts = popcounts(n)
    chosen = int(min(candidates, key=lambda m: (counts[m], m)))

    state = PurchaseState(n=n)
    rounds: list[TraceRound] = []
    for ds_id in members(chosen):
        acc = oracle.accuracy(state.owned | (1 << ds_id))
        _buy(state, rounds, vf, ds_id, catalog.datasets[ds_id].price, acc)
    return _finish(state, rounds, vf, StopReason.CATALOG_EXHAUSTED, None,
                   attempts=len(rounds), extra_queries=1 << n)


def run_s_tbyb(catalog: Catalog, oracle: AccuracyOracle, vf: ValueFunction | None = None,
               cfg: StrategyConfig | None = None) -> PurchaseTrace:
    """Stand-alone try-before-you-buy.

    The marketplace reveals the accuracy of each dataset on its own (n
    queries up front).  Candidates are ranked by stand-alone expected profit
    every round.  From the second purchase on, the expected gain of the best
    candidate is its stand-alone accuracy, diluted by the ratio that the
    previous purchase realized, and scaled by the accuracy still missing:

        gain = rho * a(best alone) * (a_star - a_now),
        rho  = (a_now - a_prev) / a(last purchase alone).

    The predicted post-purchase accuracy is clamped to [a_now, a_star].  A
    purchase happens while predicted value minus price does not lose more
    than ``lam`` times the value still attainable.
    """
    vf = vf or ValueFunction.identity()
    cfg = cfg or StrategyConfig(kind="s_tbyb")
    session = OracleSession(oracle)
    n = catalog.n
    prices = [ds.price for ds in catalog.datasets]

    singles = [session.accuracy(1 << i) for i in range(n)]
    a_star = _a_star(oracle, cfg)
    v_star = vf(a_star)

    state = PurchaseState(n=n, value_now=vf(0.0))
    rounds: list[TraceRound] = []
    attempts = 0
    a_prev = 0.0
    last_single = 0.0

    while True:
        if state.remaining == 0:
            return _finish(state, rounds, vf, StopReason.CATALOG_EXHAUSTED, session, attempts)
        attempts += 1
        best = min(members(state.remaining),
                   key=lambda s: (-(vf(singles[s]) - prices[s]), prices[s], s))

        if state.round == 0:
            buy = vf(singles[best]) - prices[best] >= -cfg.lam * v_star
        else:
            rho = 1.0 if last_single < _RHO_EPS else (state.accuracy_now - a_prev) / last_single
            gain = rho * singles[best] * (a_star - state.accuracy_now)
            predicted = min(a_star, state.accuracy_now + max(gain, 0.0))
            buy = (vf(predicted) - state.value_now - prices[best]
                   >= -cfg.lam * (v_star - state.value_now))
        if not buy:
            return _finish(state, rounds, vf, StopReason.CONDITION_FAILED, session, attempts)

        a_prev = state.accuracy_now
        last_single = singles[best]
        acc = session.accuracy(state.owned | (1 << best))
        _buy(state, rounds, vf, best, prices[best], acc)


def run_a_tbyb(catalog: Catalog, oracle: AccuracyOracle, vf: ValueFunction | None = None,
               cfg: StrategyConfig | None = None) -> PurchaseTrace:
    """Assisted try-before-you-buy with per-round marginal-accuracy queries.

    Every round queries the accuracy of (owned + s) for each remaining s,
    picks the candidate with the best exact marginal profit, and buys while
    the marginal loss stays within ``lam`` times the value still attainable.
    A run of r rounds issues at most sum_{i=0}^{r-1} (n - i) queries; an
    optional ``query_budget`` stops the run before a round that could not be
    fully answered.
    """
    vf = vf or ValueFunction.identity()
    cfg = cfg or StrategyConfig(kind="a_tbyb")
    session = OracleSession(oracle)
    n = catalog.n
    prices = [ds.price for ds in catalog.datasets]
    a_star = _a_star(oracle, cfg)
    v_star = vf(a_star)

    state = PurchaseState(n=n, value_now=vf(0.0))
    rounds: list[TraceRound] = []
    attempts = 0

    while True:
        remaining = list(members(state.remaining))
        if not remaining:
            return _finish(state, rounds, vf, StopReason.CATALOG_EXHAUSTED, session, attempts)
        if cfg.query_budget is not None and session.queries + len(remaining) > cfg.query_budget:
            return _finish(state, rounds, vf, StopReason.QUERY_BUDGET_EXHAUSTED, session, attempts)
        attempts += 1

        acc_with = {s: session.accuracy(state.owned | (1 << s)) for s in remaining}
        best = min(remaining,
                   key=lambda s: (-(vf(acc_with[s]) - prices[s]), prices[s], s))

        if (vf(acc_with[best]) - state.value_now - prices[best]
                < -cfg.lam * (v_star - state.value_now)):
            return _finish(state, rounds, vf, StopReason.CONDITION_FAILED, session, attempts)
        _buy(state, rounds, vf, best, prices[best], acc_with[best])


def run_volume_heuristic(catalog: Catalog, oracle: AccuracyOracle,
                         vf: ValueFunction | None = None,
                         cfg: StrategyConfig | None = None) -> PurchaseTrace:
    """Value-agnostic purchasing by volume-per-price.

    Each round targets the remaining dataset with the highest volume/price
    ratio (a free dataset counts as infinite; ties prefer larger volume,
    then lower id) and buys it only if its price alone stays within the
    admissible loss, i.e. even a purchase that adds no accuracy cannot lose
    more than ``lam`` times the value still attainable.
    """
    vf = vf or ValueFunction.identity()
    cfg = cfg or StrategyConfig(kind="volume_heuristic")
    session = OracleSession(oracle)
    n = catalog.n
    prices = [ds.price for ds in catalog.datasets]
    volumes = [ds.volume for ds in catalog.datasets]
    a_star = _a_star(oracle, cfg)
    v_star = vf(a_star)

    state = PurchaseState(n=n, value_now=vf(0.0))
    rounds: list[TraceRound] = []
    attempts = 0

    while True:
        if state.remaining == 0:
            return _finish(state, rounds, vf, StopReason.CATALOG_EXHAUSTED, session, attempts)
        attempts += 1

        def ratio(s: int) -> float:
            return math.inf if prices[s] == 0.0 else volumes[s] / prices[s]

        best = min(members(state.remaining), key=lambda s: (-ratio(s), -volumes[s], s))
        if prices[best] > cfg.lam * (v_star - state.value_now):
            return _finish(state, rounds, vf, StopReason.CONDITION_FAILED, session, attempts)
        acc = session.accuracy(state.owned | (1 << best))
        _buy(state, rounds, vf, best, prices[best], acc)


def run_price_heuristic(catalog: Catalog, oracle: AccuracyOracle,
                        vf: ValueFunction | None = None,
                        cfg: StrategyConfig | None = None) -> PurchaseTrace:
    """Value-agnostic purchasing among affordable datasets, uniformly at random.

    Each round collects the remaining datasets whose price is within the
    admissible loss and buys one of them uniformly at random from the
    seeded generator; the run stops once nothing is affordable.
    """
    vf = vf or ValueFunction.identity()
    cfg = cfg or StrategyConfig(kind="price_heuristic")
    session = OracleSession(oracle)
    n = catalog.n
    prices = [ds.price for ds in catalog.datasets]
    a_star = _a_star(oracle, cfg)
    v_star = vf(a_star)
    rng = np.random.default_rng(cfg.seed)

    state = PurchaseState(n=n, value_now=vf(0.0))
    rounds: list[TraceRound] = []
    attempts = 0

    while True:
        if state.remaining == 0:
            return _finish(state, rounds, vf, StopReason.CATALOG_EXHAUSTED, session, attempts)
        attempts += 1
        eligible = [s for s in members(state.remaining)
                    if prices[s] <= cfg.lam * (v_star - state.value_now)]
        if not eligible:
            return _finish(state, rounds, vf, StopReason.NO_CANDIDATE, session, attempts)
        pick = eligible[int(rng.integers(len(eligible)))]
        acc = session.accuracy(state.owned | (1 << pick))
        _buy(state, rounds, vf, pick, prices[pick], acc)


_RUNNERS = {
    "optimal": lambda cat, orc, vf, cfg: run_optimal(cat, orc, vf),
    "s_tbyb": run_s_tbyb,
    "a_tbyb": run_a_tbyb,
    "volume_heuristic": run_volume_heuristic,
    "price_heuristic": run_price_heuristic,
}


def run_strategy(catalog: Catalog, oracle: AccuracyOracle, vf: ValueFunction | None,
                 cfg: StrategyConfig) -> PurchaseTrace:
    """Dispatch on ``cfg.kind``."""
    return _RUNNERS[cfg.kind](catalog, oracle, vf, cfg)
