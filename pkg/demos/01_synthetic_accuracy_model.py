"""
The synthetic accuracy model
============================

Accuracy of a coalition of datasets is its share of total importance weight
raised to a power.  Two knobs:

* ``di`` -- the importance ratio between consecutive datasets.  At 1 every
  dataset is interchangeable and only the count matters; at 2 each dataset
  matters twice as much as the previous one.
* ``mup`` -- the exponent.  Below 1, extra data shows diminishing returns
  (concave); above 1, data only pays off once you own a lot of it (convex).
"""

import numpy as np

from datamarket import SyntheticOracle, coalition_of

# Interchangeable, linear: accuracy is simply the fraction of datasets owned.
oracle = SyntheticOracle(10, mup=1.0, di=1.0)
print("interchangeable, linear:")
for k in (0, 3, 5, 10):
    print(f"  {k:2d} datasets -> accuracy {oracle.accuracy(coalition_of(range(k))):.2f}")

# Geometric importance: owning dataset 9 alone already gives half the weight.
oracle = SyntheticOracle(10, mup=1.0, di=2.0)
print("\nimportance ratio 2, singletons:")
for i in (0, 5, 9):
    print(f"  dataset {i} alone -> accuracy {oracle.accuracy(1 << i):.4f}")

# The exponent bends the same weight fractions into concave or convex curves.
print("\naccuracy vs datasets owned (interchangeable):")
print("  owned | mup=0.5 | mup=1 | mup=3")
for k in range(0, 11, 2):
    row = [SyntheticOracle(10, mup=m, di=1.0).accuracy(coalition_of(range(k)))
           for m in (0.5, 1.0, 3.0)]
    print(f"  {k:5d} |  {row[0]:.3f}  | {row[1]:.3f} | {row[2]:.3f}")

# Monotone by construction: more data never hurts.
oracle = SyntheticOracle(8, mup=0.7, di=1.5)
acc = oracle.dense_accuracies()
supersets_ok = all(acc[m] <= acc[m | (1 << i)]
                   for m in range(256) for i in range(8) if not m & (1 << i))
print(f"\nmonotone over all 2^8 coalitions: {supersets_ok}")
print(f"empty -> {acc[0]}, full -> {acc[-1]}")
