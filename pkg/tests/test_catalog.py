import numpy as np
import pytest

from datamarket import (
    Catalog,
    CatalogError,
    Dataset,
    PurchaseState,
    SyntheticOracle,
    ValueFunction,
    coalition_of,
    load_catalog,
    make_catalog,
    members,
    profit,
    save_catalog,
    tcod,
)


def test_profit_empty_purchase_is_zero():
    state = PurchaseState(n=3)
    assert profit(state, ValueFunction.identity()) == 0.0


def test_profit_identity_arithmetic():
    state = PurchaseState(n=3, owned=0b111, accuracy_now=1.0, value_now=1.0, spent=0.4)
    assert profit(state, ValueFunction.identity()) == pytest.approx(0.6)


def test_profit_synthetic_instance_matches_hand_evaluation():
    # n=3, di=2, owned={0,1}: weights 2,4,8 -> (2+4)/14, prices 0.2+0.3
    oracle = SyntheticOracle(3, mup=1.0, di=2.0)
    owned = coalition_of([0, 1])
    acc = oracle.accuracy(owned)
    assert acc == pytest.approx(6.0 / 14.0)
    state = PurchaseState(n=3, owned=owned, accuracy_now=acc, value_now=acc, spent=0.5)
    assert profit(state, ValueFunction.identity()) == pytest.approx(6.0 / 14.0 - 0.5)


def test_tcod_zero_prices():
    assert tcod(make_catalog([0.0, 0.0, 0.0])) == 0.0


def test_tcod_uniform_pricing_postcondition():
    cat = make_catalog([1.5 / 10] * 10)
    assert tcod(cat) == pytest.approx(1.5, abs=1e-12)


def test_tcod_arithmetic():
    assert tcod(make_catalog([0.2, 0.3, 0.7])) == pytest.approx(1.2)


def test_catalog_requires_contiguous_ids():
    with pytest.raises(CatalogError):
        Catalog((Dataset(0, 0.1), Dataset(2, 0.1)))


def test_catalog_rejects_negative_price_and_volume():
    with pytest.raises(CatalogError):
        Dataset(0, -0.1)
    with pytest.raises(CatalogError):
        Dataset(0, 0.1, volume=-1.0)


def test_catalog_rejects_empty():
    with pytest.raises(CatalogError):
        Catalog(())


def test_coalition_helpers_roundtrip():
    ids = [0, 3, 5]
    assert list(members(coalition_of(ids))) == ids
    assert coalition_of([]) == 0
    assert list(members(0)) == []


def test_catalog_csv_roundtrip(tmp_path):
    cat = make_catalog([0.25, 0.5, 0.125], [1.0, 2.5, 0.0])
    path = tmp_path / "catalog.csv"
    save_catalog(cat, str(path))
    loaded = load_catalog(str(path))
    assert loaded == cat


def test_catalog_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("id,cost,volume\n0,0.1,1.0\n")
    with pytest.raises(CatalogError):
        load_catalog(str(path))


def test_catalog_csv_rejects_malformed_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("id,price,volume\n0,abc,1.0\n")
    with pytest.raises(CatalogError):
        load_catalog(str(path))


def test_value_function_identity():
    vf = ValueFunction.identity()
    assert vf(0.37) == 0.37
    arr = np.linspace(0, 1, 5)
    assert vf.apply(arr) is arr


def test_value_function_table_interpolates():
    vf = ValueFunction.from_table([(0.0, 0.0), (0.5, 0.8), (1.0, 1.0)])
    assert vf(0.0) == 0.0
    assert vf(0.25) == pytest.approx(0.4)
    assert vf(0.75) == pytest.approx(0.9)
    assert vf(1.0) == 1.0
    out = vf.apply(np.array([0.25, 0.75]))
    assert out == pytest.approx([0.4, 0.9])


def test_value_function_rejects_decreasing_values():
    with pytest.raises(CatalogError):
        ValueFunction.from_table([(0.0, 0.5), (1.0, 0.2)])


def test_value_function_rejects_partial_domain():
    with pytest.raises(CatalogError):
        ValueFunction.from_table([(0.1, 0.0), (1.0, 1.0)])


def test_value_function_rejects_negative_origin():
    with pytest.raises(CatalogError):
        ValueFunction.from_table([(0.0, -0.1), (1.0, 1.0)])


def test_purchase_state_remaining_partition():
    state = PurchaseState(n=4, owned=0b0101)
    assert state.remaining == 0b1010
    assert state.owned & state.remaining == 0
    assert state.owned | state.remaining == 0b1111
