from fractions import Fraction

import pytest

from smallfrac.errors import BudgetExceeded
from smallfrac.meanvalue import (
    conjecture_bound,
    mean_value_table,
    pairwise_oracle,
    power_sums,
    vinogradov_count,
)


def test_examples():
    assert vinogradov_count(1, 2, 10).count == 10
    assert vinogradov_count(2, 1, 2).count == 6
    assert vinogradov_count(2, 2, 2).count == 6


def test_conjecture_bound_examples():
    assert conjecture_bound(3, 2, 10) == (1000, 1000)
    assert conjecture_bound(1, 3, 10) == (10, Fraction(1, 10**4))
    assert conjecture_bound(6, 3, 10) == (10**6, 10**6)


def test_table_examples():
    (row,) = mean_value_table([1], [1], [1])
    assert row.count == 1 and row.ratio == 1
    (row,) = mean_value_table([2], [1], [2])
    assert (row.count, row.bound_main, row.bound_secondary, row.ratio) == (6, 4, 8, Fraction(3, 4))
    (row,) = mean_value_table([2], [2], [2])
    assert (row.count, row.bound_main, row.bound_secondary, row.ratio) == (6, 4, 2, Fraction(3, 2))


def test_table_continues_after_refusal():
    rows = mean_value_table([1, 5], [1], [10], budget=1000)
    assert rows[0].count == 10
    assert rows[1].count is None and "budget" in rows[1].error


@pytest.mark.parametrize("s,k,N", [(2, 1, 6), (2, 2, 7), (3, 2, 5), (3, 3, 4), (1, 3, 9)])
def test_matches_pairwise_oracle(s, k, N):
    assert vinogradov_count(s, k, N).count == pairwise_oracle(s, k, N)


def test_power_sum_range():
    v = power_sums((1, 3, 3), 3)
    assert v == (7, 19, 55)
    for j, e in enumerate(v, start=1):
        assert 3 <= e <= 3 * 3**j


def test_permutation_closure():
    # diagonal and its permutations: s! * #(distinct-entry tuples) solutions at least
    import math
    s, k, N = 3, 3, 6
    distinct = math.perm(N, s)
    assert vinogradov_count(s, k, N).count >= math.factorial(s) * distinct


def test_invariants_small_grid():
    for s in (1, 2, 3):
        prev_N = {}
        for N in range(1, 8):
            per_k = [vinogradov_count(s, k, N).count for k in (1, 2, 3, 4)]
            for c in per_k:
                assert N**s <= c <= N ** (2 * s)
            assert all(a >= b for a, b in zip(per_k, per_k[1:]))
            for k, c in zip((1, 2, 3, 4), per_k):
                assert c >= prev_N.get(k, 0)
                prev_N[k] = c


def test_workers_do_not_change_result():
    assert vinogradov_count(3, 2, 9, workers=2) == vinogradov_count(3, 2, 9, workers=1)


def test_budget_refusal():
    with pytest.raises(BudgetExceeded) as exc:
        vinogradov_count(4, 2, 200, budget=10**6)
    assert exc.value.cost == 200**4
