"""Exponent calculus for small fractional parts.

Every exponent ``x`` stands for a bound of shape ``N^(-x + eps)``, so the
comparison convention is fixed: the larger exponent is the stronger result.

Three problems are tracked:

* ``i``   - full polynomial ``min_n ||alpha_k n^k + ... + alpha_1 n||``
* ``ii``  - binomial ``min_n ||alpha_k n^k + alpha_1 n||``
* ``iii`` - additive form ``min ||beta_1 n_1^k + ... + beta_s n_s^k||``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import OutOfRange
from .exact import fraction_str

__all__ = [
    "ExponentRecord",
    "F",
    "PROBLEMS",
    "VAUGHAN_WOOLEY",
    "exponent_table",
    "mu",
    "new_exponents",
    "prior_exponents",
    "rho_a",
    "rho_b",
    "sigma_small",
    "two_step_exponent",
    "wooley_monomial",
]

PROBLEMS = ("i", "ii", "iii")

# Denominators of the monomial exponents 1/x quoted for 7 <= k <= 20; the
# values for 12..19 are not available and stay absent.
VAUGHAN_WOOLEY = {
    7: Fraction("57.23"),
    8: Fraction("69.66"),
    9: Fraction("82.08"),
    10: Fraction("94.62"),
    11: Fraction("107.27"),
    20: Fraction("222.16"),
}


@dataclass(frozen=True)
class ExponentRecord:
    problem: str
    k: int
    s: int | None
    exponent: Fraction | float
    source: str
    note: str = ""

    @property
    def is_exact(self) -> bool:
        return isinstance(self.exponent, Fraction)

    @property
    def exact_str(self) -> str:
        return fraction_str(self.exponent) if self.is_exact else ""

    @property
    def decimal_str(self) -> str:
        return f"{float(self.exponent):.10g}"


def _K(k: int) -> int:
    return 2 ** (k - 1)


def mu(k: int) -> Fraction:
    if k < 8:
        raise OutOfRange(f"mu_k needs k >= 8, got {k}")
    return Fraction(1, 2 * k * (k - 1))


def rho_a(k: int) -> Fraction:
    if k < 6:
        raise OutOfRange(f"rho_k needs k >= 6, got {k}")
    return Fraction(1, k * (k - 1))


def rho_b(k: int, B: float) -> float:
    """``1 / (k (2 log k + B log log k))`` with natural logs.

    ``B`` is an unspecified absolute constant; ``B = 0`` is accepted as the
    limiting case.
    """
    if k < 6:
        raise OutOfRange(f"rho_k needs k >= 6, got {k}")
    if B < 0:
        raise OutOfRange("B must be nonnegative")
    return 1.0 / (k * (2 * math.log(k) + B * math.log(math.log(k))))


def wooley_monomial(k: int, C: float) -> float:
    """Monomial exponent ``1 / (k (log k + C log log k))``; ``C`` is a parameter."""
    if k < 6:
        raise OutOfRange(f"needs k >= 6, got {k}")
    return 1.0 / (k * (math.log(k) + C * math.log(math.log(k))))


def two_step_exponent(nu):
    """Exponent ``nu / (2 + nu)`` delivered by the two-step construction."""
    return nu / (2 + nu)


def sigma_small(s: int, k: int) -> Fraction:
    if k < 6:
        raise OutOfRange(f"sigma_(s,k) needs k >= 6, got {k}")
    J = k * (k - 1)
    if not 1 <= s <= J:
        raise OutOfRange(f"s={s} outside 1..{J}; use F({J}, s, k) for s > {J}")
    return Fraction(s, J)


def F(J: int, s: int, k: int) -> Fraction:
    """min(s/J, max_{J+1<=h<=s} min(((2h-2)(s-k)+4k-4)/(h(s-k)+4h-4), (s-h+J+1)/J))."""
    if J < 1 or k < 1:
        raise OutOfRange("J and k must be positive")
    if s <= J:
        raise OutOfRange(f"F needs s > J (s={s}, J={J})")
    best = None
    for h in range(J + 1, s + 1):
        first = Fraction((2 * h - 2) * (s - k) + 4 * k - 4, h * (s - k) + 4 * h - 4)
        second = Fraction(s - h + J + 1, J)
        v = min(first, second)
        if best is None or v > best:
            best = v
    return min(Fraction(s, J), best)


def new_exponents(problem: str, k: int, s: int | None = None,
                    B: float | None = None) -> list[ExponentRecord]:
    """Exponents proved by the new method for one (problem, k, s) cell."""
    out = []
    if problem == "i" and k >= 8:
        out.append(ExponentRecord("i", k, None, mu(k), "meanvalue:full"))
    elif problem == "ii" and k >= 6:
        out.append(ExponentRecord("ii", k, None, rho_a(k), "meanvalue:binomial"))
        if B is not None:
            out.append(ExponentRecord("ii", k, None, rho_b(k, B), "meanvalue:binomial-log", f"B={B}"))
    elif problem == "iii" and k >= 6 and s is not None and s >= 1:
        J = k * (k - 1)
        if s <= J:
            out.append(ExponentRecord("iii", k, s, sigma_small(s, k), "meanvalue:form"))
        else:
            out.append(ExponentRecord("iii", k, s, F(J, s, k), "meanvalue:form-many"))
    return out


def prior_exponents(k: int, problem: str | None = None, s: int | None = None,
                    C: float | None = None) -> list[ExponentRecord]:
    """Earlier results quoted for comparison; constants are not re-derived."""
    if k < 2:
        raise OutOfRange("prior exponents are tabulated for k >= 2")
    K = _K(k)
    wanted = PROBLEMS if problem is None else (problem,)
    out = []
    if "i" in wanted:
        if k <= 8:
            out.append(ExponentRecord("i", k, None, Fraction(1, K), "Baker1982", "1/K, K=2^(k-1)"))
        else:
            out.append(ExponentRecord("i", k, None, Fraction(1, 4 * k * (k - 2)), "Wooley2013",
                                      "1/(4k(k-2))"))
    if "ii" in wanted:
        if k == 2:
            out.append(ExponentRecord("ii", k, None, Fraction(4, 7), "Zaharescu", "monomial case"))
        elif 3 <= k <= 6:
            out.append(ExponentRecord("ii", k, None, Fraction(1, K), "Danicic", "monomial case, 1/K"))
        if k in VAUGHAN_WOOLEY:
            out.append(ExponentRecord("ii", k, None, 1 / VAUGHAN_WOOLEY[k], "VaughanWooley",
                                      f"monomial case, 1/{VAUGHAN_WOOLEY[k].__float__():g}"))
        if C is not None and k >= 6:
            out.append(ExponentRecord("ii", k, None, wooley_monomial(k, C), "Wooley1995",
                                      f"monomial case, C={C}"))
    if "iii" in wanted:
        s_values = [s] if s is not None else list(range(1, K + 1))
        for sv in s_values:
            if 1 <= sv <= K:
                out.append(ExponentRecord("iii", k, sv, Fraction(sv, K), "Cook", "s/K"))
            elif k >= 4:
                out.append(ExponentRecord("iii", k, sv, F(K, sv, k), "Baker2000", "F(K,s,k)"))
            elif (k, sv) == (2, 3):
                out.append(ExponentRecord("iii", k, sv, Fraction(9, 8), "Baker", "quoted constant"))
            elif (k, sv) == (3, 5):
                out.append(ExponentRecord("iii", k, sv, Fraction(5, 4), "Baker", "quoted constant"))
    return out


@dataclass(frozen=True)
class TableRow:
    record: ExponentRecord
    winner: bool


def _parse_range(r) -> list[int]:
    if isinstance(r, int):
        return [r]
    if isinstance(r, str):
        out = []
        for part in r.split(","):
            if ".." in part:
                a, b = part.split("..")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
        return out
    return list(r)


def exponent_table(k_range, s_range=None, problems: Iterable[str] = PROBLEMS,
                   B: float | None = None, C: float | None = None) -> list[TableRow]:
    """Comparison rows; within each (problem, k, s) cell the largest exponent wins."""
    ks = _parse_range(k_range)
    ss = _parse_range(s_range) if s_range is not None else [1]
    if not ks or not ss:
        raise OutOfRange("ranges must be nonempty")
    rows = []
    for problem in problems:
        for k in ks:
            for s in (ss if problem == "iii" else [None]):
                cell = new_exponents(problem, k, s, B=B)
                if k >= 2:
                    cell += prior_exponents(k, problem, s, C=C)
                if not cell:
                    continue
                top = max(float(r.exponent) if not r.is_exact else r.exponent for r in cell)
                for r in cell:
                    rows.append(TableRow(r, r.exponent == top))
    return rows
