import itertools
import math

import numpy as np
import pytest

from datamarket import (
    FunctionOracle,
    SizeLimitError,
    SyntheticOracle,
    ValueFunction,
    shapley_exact,
    shapley_monte_carlo,
    table_from_rows,
    TableOracle,
)


def shapley_by_permutations(oracle, vf=None) -> np.ndarray:
    """Independent reference: average marginal contribution over all n! orderings."""
    vf = vf or ValueFunction.identity()
    n = oracle.n
    values = np.zeros(n)
    count = 0
    for perm in itertools.permutations(range(n)):
        mask = 0
        prev = vf(oracle.accuracy(0))
        for player in perm:
            mask |= 1 << player
            cur = vf(oracle.accuracy(mask))
            values[player] += cur - prev
            prev = cur
        count += 1
    return values / count


def test_symmetric_game_splits_evenly():
    oracle = SyntheticOracle(4, mup=0.8, di=1.0)
    result = shapley_exact(oracle)
    assert result.values == pytest.approx([0.25] * 4, abs=1e-12)


def test_dummy_player_gets_zero():
    # phi({0})=0.2, phi({1})=0.2, phi({0,1})=0.6; player 2 never adds anything
    base = {0: 0.0, 0b001: 0.2, 0b010: 0.2, 0b011: 0.6}

    def phi(mask):
        return base[mask & 0b011]

    oracle = FunctionOracle(3, phi, a_star=0.6)
    result = shapley_exact(oracle)
    assert result.values[2] == pytest.approx(0.0, abs=1e-12)
    assert result.values[0] == pytest.approx(result.values[1], abs=1e-12)
    assert np.sum(result.values) == pytest.approx(0.6, abs=1e-9)


def test_exact_matches_permutation_average():
    oracle = SyntheticOracle(5, mup=1.0, di=2.0)
    result = shapley_exact(oracle)
    reference = shapley_by_permutations(oracle)
    assert result.values == pytest.approx(reference, abs=1e-9)


def test_exact_matches_permutation_average_on_rough_table():
    rng = np.random.default_rng(5)
    raw = {int(m): float(rng.random() * 0.9) for m in range(1, 1 << 4)}
    raw[0] = 0.0
    oracle = TableOracle(table_from_rows(raw, 4))
    assert shapley_exact(oracle).values == pytest.approx(
        shapley_by_permutations(oracle), abs=1e-9)


def test_efficiency_on_random_games():
    rng = np.random.default_rng(42)
    for _ in range(25):
        n = int(rng.integers(2, 9))
        oracle = SyntheticOracle(n, mup=float(rng.uniform(0.3, 3.0)),
                                 di=float(rng.uniform(1.0, 3.0)))
        values = shapley_exact(oracle).values
        assert float(np.sum(values)) == pytest.approx(1.0, abs=1e-9)


def test_exact_respects_value_function():
    oracle = SyntheticOracle(4, mup=1.0, di=1.0)
    vf = ValueFunction.from_table([(0.0, 0.0), (0.5, 0.9), (1.0, 1.0)])
    values = shapley_exact(oracle, vf).values
    assert float(np.sum(values)) == pytest.approx(vf(1.0), abs=1e-9)
    assert values == pytest.approx([0.25] * 4, abs=1e-12)


def test_exact_size_limit_points_to_monte_carlo():
    oracle = SyntheticOracle(21, mup=1.0, di=1.0)
    with pytest.raises(SizeLimitError, match="monte_carlo"):
        shapley_exact(oracle)


def test_monte_carlo_within_three_standard_errors_of_exact():
    oracle = SyntheticOracle(8, mup=1.0, di=2.0)
    exact = shapley_exact(oracle).values
    est = shapley_monte_carlo(oracle, samples=20000, seed=11)
    for i in range(8):
        band = 3 * max(est.std_error[i], 1e-12)
        assert abs(est.values[i] - exact[i]) <= band, (
            f"player {i}: estimate {est.values[i]} vs exact {exact[i]}, band {band}")


def test_single_permutation_contributions_sum_to_grand_value():
    oracle = SyntheticOracle(2, mup=1.0, di=2.0)
    est = shapley_monte_carlo(oracle, samples=1, seed=0)
    # one ordering: the two marginal contributions telescope to phi(full)
    assert float(np.sum(est.values)) == pytest.approx(1.0, abs=1e-12)


def test_permutation_contributions_telescope():
    # every sampled ordering's contributions account exactly for the grand value
    oracle = SyntheticOracle(7, mup=0.5, di=2.0)
    grand = oracle.accuracy(oracle.full_coalition)
    rng = np.random.default_rng(123)
    for _ in range(200):
        perm = rng.permutation(7)
        mask, prev, contribs = 0, 0.0, []
        for p in perm:
            mask |= 1 << int(p)
            cur = oracle.accuracy(mask)
            contribs.append(cur - prev)
            prev = cur
        assert math.fsum(contribs) == pytest.approx(grand, abs=1e-12)


def test_monte_carlo_seed_determinism():
    oracle = SyntheticOracle(6, mup=1.5, di=1.5)
    a = shapley_monte_carlo(oracle, samples=600, seed=9)
    b = shapley_monte_carlo(oracle, samples=600, seed=9)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.std_error, b.std_error)
    c = shapley_monte_carlo(oracle, samples=600, seed=10)
    assert not np.array_equal(a.values, c.values)


def test_monte_carlo_worker_count_does_not_change_bits():
    oracle = SyntheticOracle(6, mup=0.5, di=2.0)
    one = shapley_monte_carlo(oracle, samples=1000, seed=3, workers=1)
    four = shapley_monte_carlo(oracle, samples=1000, seed=3, workers=4)
    assert np.array_equal(one.values, four.values)
    assert np.array_equal(one.std_error, four.std_error)


def test_monte_carlo_rejects_no_samples():
    with pytest.raises(ValueError):
        shapley_monte_carlo(SyntheticOracle(3), samples=0, seed=0)
