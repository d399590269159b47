"""Exact comparisons involving rational powers ``N**e``.

Bounds like ``N**(eps) * (N/A)**k`` are irrational in general.  These helpers
decide inequalities against them by raising both sides to the denominator of
the exponent, so no floating point enters a certificate.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction

import gmpy2


def as_fraction(x) -> Fraction:
    """Convert ints, floats, Decimals and numeric strings to an exact Fraction.

    Floats go through ``repr`` so that ``0.1`` becomes ``1/10``, which is what
    a user typing ``--eps 0.1`` means.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Decimal)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _root_floor(x: Fraction, d: int) -> int:
    """floor(x ** (1/d)) for x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    n = x.numerator // x.denominator
    r = int(gmpy2.iroot(gmpy2.mpz(n), d)[0])
    # floor(x^(1/d)) == floor(floor(x)^(1/d)) since integer powers are integers
    return r


def floor_pow(N: int, e, scale=1) -> int:
    """floor(scale * N**e) for N >= 1, rational e, scale >= 0."""
    e = as_fraction(e)
    scale = as_fraction(scale)
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    if scale == 0:
        return 0
    u, d = e.numerator, e.denominator
    return _root_floor(scale**d * Fraction(N) ** u, d)


def cmp_pow(x, N: int, e, scale=1) -> int:
    """Sign of ``x - scale * N**e`` for x >= 0, scale > 0."""
    x = as_fraction(x)
    e = as_fraction(e)
    scale = as_fraction(scale)
    if x < 0 or scale <= 0:
        raise ValueError("cmp_pow expects x >= 0 and scale > 0")
    u, d = e.numerator, e.denominator
    lhs = x**d
    rhs = scale**d * Fraction(N) ** u
    return (lhs > rhs) - (lhs < rhs)


def le_pow(x, N: int, e, scale=1) -> bool:
    return cmp_pow(x, N, e, scale) <= 0


def approx_pow(N: int, e, scale=1) -> float:
    """Floating-point value of scale * N**e, for display only."""
    e = as_fraction(e)
    scale = as_fraction(scale)
    return float(scale) * math.exp(float(e) * math.log(N)) if N > 0 else 0.0


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
