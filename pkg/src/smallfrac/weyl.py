"""Direct evaluation of Weyl sums ``g_k(alpha; N) = sum_{n<=N} e(alpha_k n^k + ... + alpha_1 n)``.

Phases are exact integers mod ``2**P``; only the final cos/sin carry rounding.
The trigonometric kernel and the accumulation run in double-double arithmetic
and every result carries an explicit absolute ``error_bound``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import _dd
from .arith import Angle, parse_angle
from .errors import BudgetExceeded, DomainError

__all__ = [
    "CoefficientVector",
    "WeylSumValue",
    "DEFAULT_MAX_TERMS",
    "k1_closed_form",
    "monomial_sum",
    "weyl_sum",
]

DEFAULT_MAX_TERMS = 10**7
# fixed partition size; results never depend on the worker count
CHUNK = 1 << 14


@dataclass(frozen=True)
class CoefficientVector:
    """Coefficients ``(alpha_1, ..., alpha_k)``; index 0 holds ``alpha_1``."""

    coeffs: tuple[Angle, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("coefficient vector must have degree k >= 1")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        prec = self.coeffs[0].prec
        if any(c.prec != prec for c in self.coeffs):
            raise DomainError("all coefficients must share one precision")

    @property
    def k(self) -> int:
        return len(self.coeffs)

    @property
    def prec(self) -> int:
        return self.coeffs[0].prec

    def __getitem__(self, j: int) -> Angle:
        """``alpha_j`` for 1 <= j <= k."""
        if not 1 <= j <= self.k:
            raise IndexError(j)
        return self.coeffs[j - 1]

    @classmethod
    def zeros(cls, k: int, prec: int) -> CoefficientVector:
        return cls(tuple(Angle(0, prec) for _ in range(k)))

    @classmethod
    def parse(cls, items: Sequence[str] | str, prec: int) -> CoefficientVector:
        if isinstance(items, str):
            items = [s for s in items.split(",")]
        return cls(tuple(parse_angle(s, prec) for s in items))

    @classmethod
    def monomial(cls, beta: Angle, k: int) -> CoefficientVector:
        zero = Angle(0, beta.prec)
        return cls(tuple([zero] * (k - 1) + [beta]))

    @property
    def is_binomial(self) -> bool:
        """True when only alpha_k and alpha_1 may be nonzero."""
        return all(c.num == 0 for c in self.coeffs[1:-1])

    def scale(self, m: int) -> CoefficientVector:
        return CoefficientVector(tuple(c.scale(m) for c in self.coeffs))

    def __neg__(self) -> CoefficientVector:
        return CoefficientVector(tuple(-c for c in self.coeffs))

    def phase_num(self, n: int) -> int:
        """Numerator of ``sum_j alpha_j n^j`` mod 1 over ``2**prec``."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc + c.num) * n
        return acc & ((1 << self.prec) - 1)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.coeffs]


@dataclass(frozen=True)
class WeylSumValue:
    real_part: Fraction
    imag_part: Fraction
    N: int
    error_bound: float
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def modulus(self) -> float:
        with mpmath.workprec(128):
            re =mpmath.mpf(self.real_part.numerator) / self.real_part.denominator
            im = mpmath.mpf(self.imag_part.numerator) / self.imag_part.denominator
            m = mpmath.sqrt(re * re + im * im)
            return float(m)

    def modulus_bounds(self, bits: int = 80) -> tuple[Fraction, Fraction]:
        """Rational (lower, upper) enclosure of the true |g|."""
        m2 = self.real_part**2 + self.imag_part**2
        scaled = m2 * (1 << (2 * bits))
        lo_root = math.isqrt(scaled.numerator // scaled.denominator)
        lo = Fraction(lo_root, 1 << bits)
        hi = Fraction(lo_root + 1, 1 << bits)
        err = Fraction(self.error_bound)
        return max(Fraction(0), lo - err), hi + err

    def __complex__(self) -> complex:
        return complex(float(self.real_part), float(self.imag_part))

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "real": _decimal_str(self.real_part),
            "imag": _decimal_str(self.imag_part),
            "modulus": repr(self.modulus),
            "error_bound": repr(self.error_bound),
            "meta": self.meta,
        }


def _decimal_str(x: Fraction, digits: int = 30) -> str:
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, digits)


def _error_bound(N: int) -> float:
    # per-term kernel error stays below 2^-96 (tables, Taylor tail, dd ops,
    # phase truncation); each tree-summation level adds at most 2^-104 * N
    levels = max(1, math.ceil(math.log2(N))) + 1
    return N * 2.0**-96 + N * levels * 2.0**-100


def _chunk_sum(nums: tuple[int, ...], prec: int, start: int, stop: int):
    mask = (1 << prec) - 1
    shift = prec - _dd.TOP_BITS
    count = stop - start
    t = np.empty(count, dtype=np.int64)
    rh = np.empty(count, dtype=np.int64)
    rl = np.empty(count, dtype=np.int64)
    rev = nums[::-1]
    split = _dd.split_phase
    for i, n in enumerate(range(start, stop)):
        acc = 0
        for c in rev:
            acc = (acc + c) * n
        p = acc & mask
        top = p >> shift if shift >= 0 else p << -shift
        t[i], rh[i], rl[i] = split(top)
    re_hi, re_lo, im_hi, im_lo = _dd.expi_from_parts(t, rh, rl)
    return _dd.pairwise_sum(re_hi, re_lo) + _dd.pairwise_sum(im_hi, im_lo)


def _chunks(N: int):
    return [(s, min(s + CHUNK, N + 1)) for s in range(1, N + 1, CHUNK)]


def weyl_sum(c: CoefficientVector, N: int, workers: int = 1,
             max_terms: int = DEFAULT_MAX_TERMS) -> WeylSumValue:
    if N < 1:
        raise DomainError("N must be at least 1")
    if N > max_terms:
        raise BudgetExceeded("weyl_sum", N, max_terms)
    nums = tuple(a.num for a in c.coeffs)
    chunks = _chunks(N)
    args = [(nums, c.prec, s, e) for s, e in chunks]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_chunk_sum, *zip(*args)))
    else:
        parts = [_chunk_sum(*a) for a in args]
    re = (0.0, 0.0)
    im = (0.0, 0.0)
    for r_hi, r_lo, i_hi, i_lo in parts:
        re = _dd.add(re[0], re[1], r_hi, r_lo)
        im = _dd.add(im[0], im[1], i_hi, i_lo)
    return WeylSumValue(
        real_part=_dd.to_fraction(*re),
        imag_part=_dd.to_fraction(*im),
        N=N,
        error_bound=_error_bound(N),
        meta={"k": c.k, "precision_bits": c.prec, "kernel": "double-double", "chunk": CHUNK},
    )


def monomial_sum(beta: Angle, k: int, m: int, N: int, **kw) -> WeylSumValue:
    """``S(m) = sum_{n<=N} e(m beta n^k)``."""
    if m < 1:
        raise DomainError("m must be positive")
    return weyl_sum(CoefficientVector.monomial(beta.scale(m), k), N, **kw)


def k1_closed_form(alpha: Angle, N: int) -> float:
    """|sin(pi alpha N) / sin(pi alpha)|, the modulus of a linear Weyl sum."""
    if alpha.num == 0:
        raise DomainError("alpha = 0: the sum is trivially N")
    with mpmath.workprec(160):
        a = mpmath.mpf(alpha.num) / (mpmath.mpf(2) ** alpha.prec)
        return float(abs(mpmath.sinpi(a * N) / mpmath.sinpi(a)))
