"""
Five ways to buy data
=====================

One marketplace instance, five buyers:

* ``optimal``           knows the accuracy of every coalition in advance and
                        picks the best-profit subset outright.
* ``s_tbyb``            sees each dataset's stand-alone accuracy once, then
                        buys greedily, estimating marginal gains.
* ``a_tbyb``            may ask for the marginal accuracy of every remaining
                        dataset each round.
* ``volume_heuristic``  chases volume per unit price, blind to accuracy.
* ``price_heuristic``   buys anything affordable, at random.

Profit = value of the accuracy achieved minus money spent; the risk knob
``lam`` caps how much a single purchase may lose relative to the value still
on the table.
"""

from datamarket import (
    PricingScheme,
    StrategyConfig,
    SyntheticOracle,
    apply_pricing,
    generate_volumes,
    make_catalog,
    run_strategy,
)

N = 10
oracle = SyntheticOracle(N, mup=1.0, di=2.0)
catalog = make_catalog([0.0] * N, generate_volumes(N, seed=42))
catalog = apply_pricing(catalog, PricingScheme("random", tcod=2.0, seed=7))

print("prices: ", [round(ds.price, 3) for ds in catalog.datasets])
print("volumes:", [round(ds.volume, 2) for ds in catalog.datasets])
print()

for kind in ("optimal", "s_tbyb", "a_tbyb", "volume_heuristic", "price_heuristic"):
    cfg = StrategyConfig(kind, lam=0.1, seed=1)
    trace = run_strategy(catalog, oracle, None, cfg)
    print(f"{kind}: bought {trace.purchased_ids()} "
          f"profit {trace.final_profit:+.4f} "
          f"({trace.stop_reason.value}, {trace.queries_used} oracle queries)")
    for r in trace.rounds:
        print(f"    round {r.round}: dataset {r.dataset} at {r.price:.3f} "
              f"-> accuracy {r.accuracy_after:.4f}, cum profit {r.cum_profit_after:+.4f}")
