#!/usr/bin/env python3
"""Regenerate the bundled 16-seller coalition-accuracy fixture.

The fixture stands in for a real forecasting use case where model accuracy
was measured per coalition of sellers.  Construction targets two empirical
properties of that kind of data: per-seller Shapley values are highly
dispersed (std about 0.8 of the mean) and dataset volume is only weakly
correlated with value (R^2 about 0.55).  Accuracies are a mildly concave
function of latent importance weights, perturbed coalition-by-coalition,
and scaled so the best attainable accuracy is 0.896294.

Writes src/datamarket/data/sellers16_accuracy.csv (raw, pre-monotonization)
and src/datamarket/data/sellers16_catalog.csv.  Deterministic: rerunning
reproduces the committed files byte for byte.
"""

import csv
import os

import numpy as np

from datamarket import FunctionOracle, monotonize, shapley_exact

SEED = 8
N = 16
CONCAVITY = 0.7
NOISE = 0.08
WEIGHT_SIGMA = 0.9
VOLUME_ALPHA = 0.55
VOLUME_SIGMA = 0.45
A_STAR = 0.896294

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "datamarket", "data")


def build() -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(SEED)
    weights = rng.lognormal(0.0, WEIGHT_SIGMA, N)
    total = weights.sum()

    sums = np.zeros(1)
    for w in weights:
        sums = np.concatenate([sums, sums + w])
    base = (sums / total) ** CONCAVITY

    noise = 1.0 + NOISE * (rng.random(1 << N) * 2 - 1)
    raw = np.clip(base * noise, 0.0, 1.0)
    raw[0] = 0.0
    # Scale so the post-monotonization maximum lands exactly on A_STAR
    # (max and positive scaling commute).
    raw = raw / monotonize(raw, N)[-1] * A_STAR

    volumes = (weights ** VOLUME_ALPHA) * rng.lognormal(0.0, VOLUME_SIGMA, N)
    return raw, volumes


def main() -> None:
    raw, volumes = build()
    os.makedirs(OUT_DIR, exist_ok=True)

    acc_path = os.path.join(OUT_DIR, "sellers16_accuracy.csv")
    with open(acc_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["coalition", "accuracy"])
        for mask in range(1 << N):
            writer.writerow([mask, f"{raw[mask]:.9f}"])

    cat_path = os.path.join(OUT_DIR, "sellers16_catalog.csv")
    with open(cat_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "price", "volume"])
        for i in range(N):
            writer.writerow([i, repr(1.0 / N), repr(float(volumes[i]))])

    mono = monotonize(raw, N)
    oracle = FunctionOracle(N, lambda m: float(mono[m]))
    oracle.dense_accuracies = lambda: mono
    sv = shapley_exact(oracle).values
    disp = float(np.std(sv) / np.mean(sv))
    r2 = float(np.corrcoef(volumes, sv)[0, 1] ** 2)
    print(f"wrote {acc_path} and {cat_path}")
    print(f"a_star={mono[-1]:.6f} shapley dispersion={disp:.3f} volume-value R^2={r2:.3f}")


if __name__ == "__main__":
    main()
