"""Zero-communication game: exact evaluator, labels, witnesses, product games."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from colorcomm.zecgame import (
    CASE1_BOUND,
    CASE2_BOUND,
    INPUT_PAIRS,
    WIN_BOUND,
    FailureWitness,
    StrategyError,
    ZecStrategy,
    build_label_table,
    find_failure_witness,
    product_game_estimate,
    zec_win_probability,
    zec_win_probability_exact,
)


def brute_force_win_probability(alice: ZecStrategy, bob: ZecStrategy) -> Fraction:
    """Independent oracle: plain 441-pair enumeration with inline properness."""
    total = Fraction(0)
    outcomes = [(a, b) for a in range(3) for b in range(3)]
    for ia, (i, j) in enumerate(INPUT_PAIRS):
        for ib, (k, l) in enumerate(INPUT_PAIRS):
            for oa, (a1, a2) in enumerate(outcomes):
                pa = alice.table[ia][oa]
                if not pa:
                    continue
                for ob, (b1, b2) in enumerate(outcomes):
                    pb = bob.table[ib][ob]
                    if not pb:
                        continue
                    ok = a1 != a2 and b1 != b2
                    if i == k and a1 == b1:
                        ok = False
                    if i == l and a1 == b2:
                        ok = False
                    if j == k and a2 == b1:
                        ok = False
                    if j == l and a2 == b2:
                        ok = False
                    if ok:
                        total += pa * pb
    return total / (21 * 21)


def test_always_same_color_never_wins():
    clash = ZecStrategy.constant_pair(0, 0)  # both edges c1: clash at the hub
    other = ZecStrategy.uniform()
    assert zec_win_probability(clash, other) == 0.0
    assert zec_win_probability_exact(clash, other) == 0


def test_deterministic_pair_regression_constant():
    s = ZecStrategy.constant_pair(0, 1)
    exact = zec_win_probability_exact(s, s)
    assert exact == Fraction(40, 63)  # frozen from the enumeration oracle
    assert exact == brute_force_win_probability(s, s)
    assert zec_win_probability(s, s) == pytest.approx(float(exact), abs=1e-12)


def test_uniform_pair_regression_constant():
    u = ZecStrategy.uniform()
    exact = zec_win_probability_exact(u, u)
    assert exact == Fraction(206, 567)  # frozen from the enumeration oracle
    assert exact == brute_force_win_probability(u, u)


def test_evaluator_matches_oracle_on_random_strategies():
    rng = np.random.default_rng(7)
    for _ in range(5):
        a = ZecStrategy.random_dirichlet(rng)
        b = ZecStrategy.random_dirichlet(rng)
        assert zec_win_probability(a, b) == pytest.approx(
            float(brute_force_win_probability(a, b)), abs=1e-9)


def test_win_probability_color_relabeling_symmetry():
    rng = np.random.default_rng(13)
    for _ in range(3):
        a = ZecStrategy.random_dirichlet(rng)
        b = ZecStrategy.random_dirichlet(rng)
        base = zec_win_probability(a, b)
        # swap colors 0 and 2 consistently in both strategies
        swap = {0: 2, 1: 1, 2: 0}
        outcomes = [(x, y) for x in range(3) for y in range(3)]
        remap = [outcomes.index((swap[x], swap[y])) for (x, y) in outcomes]

        def relabel(s: ZecStrategy) -> ZecStrategy:
            rows = []
            for row in s.table:
                new = [Fraction(0)] * 9
                for o, p in enumerate(row):
                    new[remap[o]] = p
                rows.append(tuple(new))
            return ZecStrategy(tuple(rows))

        assert zec_win_probability(relabel(a), relabel(b)) == pytest.approx(base, abs=1e-12)


def test_strategy_validation():
    with pytest.raises(StrategyError):
        ZecStrategy(tuple(tuple(Fraction(0) for _ in range(9)) for _ in range(21)))
    bad = [[1.0 / 9] * 9] * 20
    with pytest.raises(StrategyError):
        ZecStrategy.from_rows(bad)


def test_labels_always_c1_strategy():
    a = ZecStrategy.constant_pair(0, 0)
    table = build_label_table(a, ZecStrategy.uniform())
    assert all(lab == frozenset({0}) for lab in table.alice)


def test_labels_uniform_strategy_full():
    # Marginal of each color on each edge is 1/3 >= 1/5.
    table = build_label_table(ZecStrategy.uniform(), ZecStrategy.uniform())
    assert all(lab == frozenset({0, 1, 2}) for lab in table.alice)
    assert all(lab == frozenset({0, 1, 2}) for lab in table.bob)


def test_witness_case1_for_constant_strategies():
    a = ZecStrategy.constant_pair(0, 0)  # every label {c1}: case 1 on Alice
    b = ZecStrategy.constant_pair(1, 1)
    w = find_failure_witness(a, b)
    assert w.case == 1 and w.side == "A"
    assert w.bound == CASE1_BOUND
    assert w.event_probability >= w.bound
    assert 1 - zec_win_probability_exact(a, b) >= w.bound


def test_witness_case2_for_uniform_strategies():
    u = ZecStrategy.uniform()
    w = find_failure_witness(u, u)
    assert w.case == 2
    assert w.bound == CASE2_BOUND == Fraction(1, 11025)
    assert w.alice_input is not None and w.bob_input is not None
    assert w.event_probability >= w.bound
    assert 1 - zec_win_probability_exact(u, u) >= w.bound


def test_random_strategies_respect_bound_and_witness():
    rng = np.random.default_rng(99)
    for _ in range(40):
        a = ZecStrategy.random_dirichlet(rng)
        b = ZecStrategy.random_dirichlet(rng)
        win = zec_win_probability(a, b)
        assert win <= float(WIN_BOUND) + 1e-12
        w = find_failure_witness(a, b)
        assert w.event_probability >= w.bound
        assert 1 - win >= float(w.bound) - 1e-12
        # Case-1 availability implies either few singletons or a witness.
        table = build_label_table(a, b)
        for side in ("A", "B"):
            singles = table.singleton_spokes(side)
            labels = [table.labels(side)[s] for s in singles]
            if len(singles) > 3:
                flat = [next(iter(lab)) for lab in labels]
                assert len(flat) != len(set(flat))  # pigeonhole pair exists


def test_product_game_single_copy_matches_exact():
    a = ZecStrategy.constant_pair(0, 1)
    p = zec_win_probability(a, a)
    est, (lo, hi) = product_game_estimate(a, a, copies=1, trials=40_000, seed=3)
    assert lo <= p <= hi


def test_product_game_ten_copies_product_law():
    a = ZecStrategy.constant_pair(0, 1)
    p = zec_win_probability(a, a)
    est, (lo, hi) = product_game_estimate(a, a, copies=10, trials=40_000, seed=4)
    assert lo <= p**10 <= hi
    assert est <= p + 0.05


def test_product_game_zero_probability_strategy():
    clash = ZecStrategy.constant_pair(2, 2)
    est, _ = product_game_estimate(clash, ZecStrategy.uniform(), copies=3,
                                   trials=5_000, seed=5)
    assert est == 0.0
