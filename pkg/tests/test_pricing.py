import numpy as np
import pytest

from datamarket import (
    PricingError,
    PricingScheme,
    SyntheticOracle,
    apply_pricing,
    generate_volumes,
    make_catalog,
    shapley_exact,
    tcod,
)


def test_uniform_pricing_definition():
    cat = apply_pricing(make_catalog([0.0] * 10), PricingScheme("uniform", tcod=1.5))
    assert cat.prices() == pytest.approx([0.15] * 10)


def test_volume_pricing_proportionality():
    cat = make_catalog([0.0] * 3, [1.0, 1.0, 2.0])
    priced = apply_pricing(cat, PricingScheme("volume", tcod=4.0))
    assert priced.prices() == pytest.approx([1.0, 1.0, 2.0])


def test_shapley_pricing_symmetric_model():
    oracle = SyntheticOracle(4, mup=1.0, di=1.0)
    cat = apply_pricing(make_catalog([0.0] * 4), PricingScheme("shapley", tcod=2.0),
                        oracle=oracle)
    # symmetry: exact Shapley splits evenly, verified against enumeration
    expected = shapley_exact(oracle).values / shapley_exact(oracle).values.sum() * 2.0
    assert cat.prices() == pytest.approx([0.5] * 4)
    assert cat.prices() == pytest.approx(expected)


def test_all_schemes_sum_to_tcod():
    oracle = SyntheticOracle(7, mup=0.6, di=2.0)
    cat = make_catalog([0.0] * 7, list(range(1, 8)))
    for kind in ("uniform", "random", "shapley", "volume"):
        for seed in (0, 1, 2, 3):
            priced = apply_pricing(cat, PricingScheme(kind, tcod=2.7, seed=seed),
                                   oracle=oracle)
            assert tcod(priced) == pytest.approx(2.7, abs=1e-9), kind
            assert np.all(priced.prices() >= 0)


def test_random_pricing_is_seed_deterministic():
    cat = make_catalog([0.0] * 5)
    a = apply_pricing(cat, PricingScheme("random", tcod=1.0, seed=7))
    b = apply_pricing(cat, PricingScheme("random", tcod=1.0, seed=7))
    c = apply_pricing(cat, PricingScheme("random", tcod=1.0, seed=8))
    assert np.array_equal(a.prices(), b.prices())
    assert not np.array_equal(a.prices(), c.prices())


def test_uniform_and_volume_are_deterministic():
    cat = make_catalog([0.0] * 4, [3.0, 1.0, 2.0, 4.0])
    for kind in ("uniform", "volume"):
        a = apply_pricing(cat, PricingScheme(kind, tcod=1.0, seed=1))
        b = apply_pricing(cat, PricingScheme(kind, tcod=1.0, seed=99))
        assert np.array_equal(a.prices(), b.prices())


def test_degenerate_volumes_rejected():
    cat = make_catalog([0.0] * 3, [0.0, 0.0, 0.0])
    with pytest.raises(PricingError, match="volume"):
        apply_pricing(cat, PricingScheme("volume", tcod=1.0))


def test_shapley_pricing_needs_oracle():
    with pytest.raises(PricingError, match="oracle"):
        apply_pricing(make_catalog([0.0] * 3), PricingScheme("shapley", tcod=1.0))


def test_precomputed_shapley_shares_match_inline():
    oracle = SyntheticOracle(5, mup=1.0, di=2.0)
    cat = make_catalog([0.0] * 5)
    scheme = PricingScheme("shapley", tcod=3.0)
    inline = apply_pricing(cat, scheme, oracle=oracle)
    cached = apply_pricing(cat, scheme, shapley_values=shapley_exact(oracle))
    assert np.array_equal(inline.prices(), cached.prices())


def test_scheme_validation():
    with pytest.raises(PricingError):
        PricingScheme("fancy", tcod=1.0)
    with pytest.raises(PricingError):
        PricingScheme("uniform", tcod=0.0)


def test_generate_volumes_uniform_and_importance():
    vols = generate_volumes(6, "uniform", seed=4)
    assert vols.shape == (6,)
    assert np.array_equal(vols, generate_volumes(6, "uniform", seed=4))
    weights = np.array([2.0 ** (k + 1) for k in range(6)])
    imp = generate_volumes(6, "importance", seed=4, sigma=0.3, weights=weights)
    assert np.all(imp > 0)
    # importance volumes track the weights up to the lognormal factor
    assert np.corrcoef(np.log(imp), np.log(weights))[0, 1] > 0.9
    with pytest.raises(PricingError):
        generate_volumes(6, "importance", seed=4)
    with pytest.raises(PricingError):
        generate_volumes(6, "weird", seed=4)


def test_shapley_pricing_falls_back_to_sampling_for_large_catalogs():
    oracle = SyntheticOracle(21, mup=1.0, di=1.2)
    cat = make_catalog([0.0] * 21)
    with pytest.raises(Exception):
        apply_pricing(cat, PricingScheme("shapley", tcod=2.0), oracle=oracle)
    priced = apply_pricing(cat, PricingScheme("shapley", tcod=2.0, seed=3,
                                              shapley_samples=200), oracle=oracle)
    assert tcod(priced) == pytest.approx(2.0, abs=1e-9)
    assert np.all(priced.prices() >= 0)
