"""Vinogradov mean values ``J_{s,k}(N)`` by exact solution counting.

By orthogonality the 2s-th moment of the Weyl sum over the k-torus counts
pairs of s-tuples in [1, N]^s with equal power sums of degrees 1..k.  We
accumulate the multiplicity m(v) of every power-sum vector v and return
``sum m(v)^2``.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterable

from .errors import BudgetExceeded, DomainError

__all__ = [
    "DEFAULT_BUDGET",
    "MeanValueCount",
    "conjecture_bound",
    "mean_value_table",
    "pairwise_oracle",
    "power_sums",
    "vinogradov_count",
]

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class MeanValueCount:
    s: int
    k: int
    N: int
    count: int
    bound_main: int
    bound_secondary: Fraction

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count) / max(Fraction(self.bound_main), self.bound_secondary)


def power_sums(t: Iterable[int], k: int) -> tuple[int, ...]:
    t = tuple(t)
    return tuple(sum(n**j for n in t) for j in range(1, k + 1))


def conjecture_bound(s: int, k: int, N: int) -> tuple[int, Fraction]:
    """``(N^s, N^(2s - k(k+1)/2))`` - the conjectured main terms with eps = 0."""
    return N**s, Fraction(N) ** (2 * s - k * (k + 1) // 2)


def _multinomial(t: tuple[int, ...]) -> int:
    """Number of distinct orderings of the sorted tuple ``t``."""
    out = math.factorial(len(t))
    for c in Counter(t).values():
        out //= math.factorial(c)
    return out


def _partial_counts(s: int, k: int, N: int, first: int) -> Counter:
    """Multiplicities over sorted tuples whose smallest entry is ``first``."""
    counts: Counter = Counter()
    base = [first**j for j in range(1, k + 1)]
    for rest in combinations_with_replacement(range(first, N + 1), s - 1):
        v = list(base)
        for n in rest:
            p = n
            for j in range(k):
                v[j] += p
                p *= n
        counts[tuple(v)] += _multinomial((first,) + rest)
    return counts


def vinogradov_count(s: int, k: int, N: int, budget: int = DEFAULT_BUDGET,
                     workers: int = 1) -> MeanValueCount:
    if s < 1 or k < 1 or N < 1:
        raise DomainError("s, k, N must all be positive")
    cost = N**s
    if cost > budget:
        raise BudgetExceeded(f"vinogradov_count(s={s}, k={k}, N={N})", cost, budget)
    args = [(s, k, N, first) for first in range(1, N + 1)]
    if workers > 1 and N > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_partial_counts, *zip(*args)))
    else:
        parts = [_partial_counts(*a) for a in args]
    merged: Counter = Counter()
    for part in parts:
        merged.update(part)
    count = sum(m * m for m in merged.values())
    main, secondary = conjecture_bound(s, k, N)
    return MeanValueCount(s, k, N, count, main, secondary)


def pairwise_oracle(s: int, k: int, N: int) -> int:
    """Count pairs of tuples with equal power sums by direct comparison."""
    tuples = list(product(range(1, N + 1), repeat=s))
    sums = [power_sums(t, k) for t in tuples]
    total = 0
    for a in sums:
        for b in sums:
            if a == b:
                total += 1
    return total


@dataclass(frozen=True)
class TableRow:
    s: int
    k: int
    N: int
    count: int | None
    bound_main: int | None
    bound_secondary: Fraction | None
    ratio: Fraction | None
    error: str | None = None


def mean_value_table(s_range, k_range, N_range, budget: int = DEFAULT_BUDGET,
                     workers: int = 1) -> list[TableRow]:
    """One row per (s, k, N); cells over budget carry an error and no count."""
    rows = []
    for s in s_range:
        for k in k_range:
            for N in N_range:
                try:
                    r = vinogradov_count(s, k, N, budget=budget, workers=workers)
                except BudgetExceeded as exc:
                    rows.append(TableRow(s, k, N, None, None, None, None, str(exc)))
                    continue
                rows.append(TableRow(s, k, N, r.count, r.bound_main, r.bound_secondary, r.ratio))
    return rows
