import numpy as np
import pytest

from datamarket import (
    ConfigError,
    ExperimentGrid,
    OracleSpec,
    PricingScheme,
    StrategyConfig,
    StrategySpec,
    SyntheticOracle,
    VolumeSpec,
    apply_pricing,
    derive_seed,
    generate_volumes,
    make_catalog,
    run_grid,
    run_sequence,
    run_strategy,
    write_experiment_csv,
)
from datamarket.harness import run_cell

ALL = tuple(StrategySpec(k) for k in
            ("optimal", "s_tbyb", "a_tbyb", "volume_heuristic", "price_heuristic"))


def small_grid(**kw):
    base = dict(oracle=OracleSpec(kind="synthetic", n=6),
                tcod_values=(1.0,), mup_values=(1.0,), di_values=(2.0,),
                pricing_kinds=("random",), lambda_values=(0.1,),
                strategies=ALL, repetitions=4, base_seed=11)
    base.update(kw)
    return ExperimentGrid(**base)


def test_seed_derivation_is_stable_across_runs():
    # frozen: changing these would silently re-randomize every experiment
    assert derive_seed("run", 11, 1.0, 1.0, 2.0, "random", 0.1, 0) == 15449904240840203843
    assert derive_seed("x") != derive_seed("y")


def test_grid_results_are_deterministic():
    a = run_grid(small_grid())
    b = run_grid(small_grid())
    assert a.rows == b.rows
    assert not a.cell_errors


def test_worker_count_does_not_change_rows():
    grid = small_grid(tcod_values=(0.5, 1.0, 2.0))
    seq = run_grid(grid, workers=1)
    par = run_grid(grid, workers=3)
    assert seq.rows == par.rows


def test_strategy_list_order_does_not_change_per_strategy_results():
    fwd = run_grid(small_grid(strategies=ALL)).rows
    rev = run_grid(small_grid(strategies=tuple(reversed(ALL)))).rows
    by_kind_fwd = {r.strategy: r for r in fwd}
    by_kind_rev = {r.strategy: r for r in rev}
    assert by_kind_fwd == by_kind_rev


def test_paired_instances_are_bit_identical_across_strategies():
    # replicate the harness seed derivation and check both strategies saw the
    # same prices by reconstructing each run's catalog
    grid = small_grid(pricing_kinds=("random",))
    oracle = SyntheticOracle(6, mup=1.0, di=2.0)
    for rep in range(grid.repetitions):
        run_seed = derive_seed("run", 11, 1.0, 1.0, 2.0, "random", 0.1, rep)
        cat1 = apply_pricing(make_catalog([0.0] * 6),
                             PricingScheme("random", tcod=1.0,
                                           seed=derive_seed("pricing", run_seed)))
        cat2 = apply_pricing(make_catalog([0.0] * 6),
                             PricingScheme("random", tcod=1.0,
                                           seed=derive_seed("pricing", run_seed)))
        assert np.array_equal(cat1.prices(), cat2.prices())


def test_optimal_relative_profit_is_exactly_one():
    rows = run_grid(small_grid()).rows
    opt = [r for r in rows if r.strategy == "optimal"]
    assert opt and all(r.mean_relative_profit == 1.0 for r in opt)


def test_relative_profit_bounded_by_optimal():
    rows = run_grid(small_grid(tcod_values=(0.5, 1.0, 1.5))).rows
    for r in rows:
        if r.mean_relative_profit is not None:
            assert r.mean_relative_profit <= 1.0 + 1e-9


def test_relative_profit_null_when_nothing_is_worth_buying():
    # uniform pricing, interchangeable data, tcod 3: optimal profit is exactly 0
    rows = run_grid(small_grid(pricing_kinds=("uniform",), di_values=(1.0,),
                               tcod_values=(3.0,))).rows
    assert all(r.mean_relative_profit is None for r in rows)
    assert all(r.mean_profit <= 0.0 for r in rows)


def test_single_repetition_deterministic_scheme_has_zero_std():
    rows = run_grid(small_grid(pricing_kinds=("uniform",), repetitions=1)).rows
    assert all(r.std_profit == 0.0 for r in rows)


def test_cell_means_match_direct_single_runs():
    # deterministic cell (uniform pricing): the mean equals one direct run
    grid = small_grid(oracle=OracleSpec(kind="synthetic", n=10),
                      pricing_kinds=("uniform",), tcod_values=(1.5,), repetitions=1,
                      volumes=VolumeSpec(kind="uniform"))
    rows = {r.strategy: r for r in run_grid(grid).rows}
    oracle = SyntheticOracle(10, mup=1.0, di=2.0)
    run_seed = derive_seed("run", 11, 1.5, 1.0, 2.0, "uniform", 0.1, 0)
    cat = make_catalog([0.0] * 10,
                       generate_volumes(10, "uniform", seed=derive_seed("volumes", run_seed)))
    cat = apply_pricing(cat, PricingScheme("uniform", tcod=1.5))
    for kind in ("s_tbyb", "a_tbyb", "volume_heuristic", "price_heuristic"):
        cfg = StrategyConfig(kind, lam=0.1, seed=derive_seed("strategy", run_seed, kind))
        assert rows[kind].mean_profit == run_strategy(cat, oracle, None, cfg).final_profit


def test_oversized_cells_are_reported_not_raised():
    grid = small_grid(oracle=OracleSpec(kind="synthetic", n=21),
                      strategies=(StrategySpec("s_tbyb"),),
                      pricing_kinds=("uniform", "shapley"), repetitions=1)
    result = run_grid(grid)
    assert len(result.cell_errors) == 1
    assert "shapley" in result.cell_errors[0]
    assert {r.pricing for r in result.rows} == {"uniform"}


def test_grid_validation_errors():
    with pytest.raises(ConfigError):
        run_grid(small_grid(repetitions=0))
    with pytest.raises(ConfigError):
        run_grid(small_grid(tcod_values=()))
    with pytest.raises(ConfigError):
        run_grid(small_grid(strategies=(StrategySpec("s_tbyb"), StrategySpec("s_tbyb"))))


def test_sequence_requires_singleton_instance():
    with pytest.raises(ConfigError):
        run_sequence(small_grid(tcod_values=(1.0, 2.0)))


def test_sequence_shapes():
    grid = small_grid(oracle=OracleSpec(kind="synthetic", n=5),
                      pricing_kinds=("uniform",), tcod_values=(0.5,),
                      lambda_values=(0.5,))
    points = run_sequence(grid)
    by_strategy = {}
    for p in points:
        by_strategy.setdefault(p.strategy, []).append(p)
    # the price heuristic keeps buying while everything stays affordable
    assert [p.round for p in by_strategy["price_heuristic"]] == [1, 2, 3, 4, 5]
    # the exhaustive optimum is a single terminal point at its coalition size
    assert len(by_strategy["optimal"]) == 1
    assert by_strategy["optimal"][0].round == 3
    # every sequential strategy covers the same round range
    for kind in ("s_tbyb", "a_tbyb", "volume_heuristic"):
        assert [p.round for p in by_strategy[kind]] == [1, 2, 3, 4, 5]
    # this instance stops the stand-alone strategy after 3 purchases; rounds
    # 4 and 5 are padding that repeats its final profit
    s = {p.round: p.cum_profit for p in by_strategy["s_tbyb"]}
    assert s[4] == s[3] and s[5] == s[3]
    assert s[2] != s[3]


def test_experiment_csv_layout(tmp_path):
    rows = run_grid(small_grid(repetitions=2)).rows
    path = tmp_path / "experiment.csv"
    write_experiment_csv(rows, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == ("strategy,tcod,mup,di,pricing,lambda,mean_profit,std_profit,"
                        "mean_relative_profit,n_runs")
    assert len(lines) == 1 + len(rows)
    assert lines[1].startswith("optimal,1.0,1.0,2.0,random,0.1,")


def test_table_cells_leave_mup_di_blank(tmp_path):
    acc = tmp_path / "acc.csv"
    acc.write_text("coalition,accuracy\n0,0.0\n1,0.5\n2,0.4\n3,0.9\n")
    cat = tmp_path / "cat.csv"
    cat.write_text("id,price,volume\n0,0.5,1.0\n1,0.5,2.0\n")
    grid = ExperimentGrid(
        oracle=OracleSpec(kind="table", n=2, table_path=str(acc), catalog_path=str(cat)),
        tcod_values=(0.5,), pricing_kinds=("uniform",), lambda_values=(0.5,),
        strategies=(StrategySpec("s_tbyb"), StrategySpec("volume_heuristic")),
        repetitions=2, base_seed=3, volumes=VolumeSpec(kind="catalog"))
    rows = run_grid(grid).rows
    assert all(r.mup is None and r.di is None for r in rows)
    out = tmp_path / "experiment.csv"
    write_experiment_csv(rows, str(out))
    assert ",,," in out.read_text().splitlines()[1].replace("uniform", "")
