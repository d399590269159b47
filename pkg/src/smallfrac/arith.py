"""Exact dyadic fixed-point arithmetic on the unit circle R/Z.

An :class:`Angle` stores ``num / 2**prec`` reduced mod 1.  Every fractional
part that the rest of the package compares against a bound is computed here
with Python integers, so comparisons are exact and reproducible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "Angle",
    "CONSTANT_ALGORITHMS",
    "angle_from_fraction",
    "angle_from_rational",
    "default_precision",
    "dist_int",
    "frac_distance",
    "mul_pow_mod1",
    "named_constant",
    "parse_angle",
]

GUARD_BITS = 32


@dataclass(frozen=True)
class Angle:
    num: int
    prec: int

    def __post_init__(self):
        if self.prec < 1:
            raise DomainError(f"precision must be positive, got {self.prec}")
        if not 0 <= self.num < (1 << self.prec):
            raise DomainError(f"numerator {self.num} outside [0, 2^{self.prec})")

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, 1 << self.prec)

    def __float__(self) -> float:
        return self.num / (1 << self.prec)

    def __add__(self, other: Angle) -> Angle:
        _same_prec(self, other)
        return Angle((self.num + other.num) & ((1 << self.prec) - 1), self.prec)

    def __neg__(self) -> Angle:
        return Angle(-self.num & ((1 << self.prec) - 1), self.prec)

    def __sub__(self, other: Angle) -> Angle:
        return self + (-other)

    def scale(self, m: int) -> Angle:
        """Return ``m * self`` mod 1 for any integer ``m``."""
        return Angle((self.num * m) & ((1 << self.prec) - 1), self.prec)

    def with_precision(self, prec: int) -> Angle:
        """Re-express at another precision, rounding to nearest when narrowing."""
        return angle_from_fraction(self.value, prec)

    def to_json(self) -> dict:
        return {"num": str(self.num), "prec": self.prec}

    @classmethod
    def from_json(cls, obj: dict) -> Angle:
        return cls(int(obj["num"]), int(obj["prec"]))

    def __repr__(self) -> str:
        return f"Angle({self.num}/2^{self.prec} ~ {float(self):.12g})"


def _same_prec(x: Angle, y: Angle) -> None:
    if x.prec != y.prec:
        raise DomainError(f"precision mismatch: {x.prec} vs {y.prec}")


def default_precision(k: int, N: int) -> int:
    return k * max(1, math.ceil(math.log2(max(N, 2)))) + 96


def angle_from_fraction(x: Fraction, P: int) -> Angle:
    """Nearest ``P``-bit dyadic to ``x`` mod 1; exact halves round up."""
    if P < 1:
        raise DomainError(f"precision must be positive, got {P}")
    x = Fraction(x)
    scaled = x * (1 << P)
    num = math.floor(scaled + Fraction(1, 2))
    return Angle(num & ((1 << P) - 1), P)


def angle_from_rational(a: int, q: int, P: int) -> Angle:
    if q == 0:
        raise DomainError("denominator q must be nonzero")
    if q < 0:
        a, q = -a, -q
    return angle_from_fraction(Fraction(a % q, q), P)


def mul_pow_mod1(x: Angle, n: int, j: int) -> Angle:
    """``x * n**j`` mod 1, with ``n**j`` in full integer precision."""
    if j < 0:
        raise DomainError("exponent j must be nonnegative")
    return Angle((x.num * n**j) & ((1 << x.prec) - 1), x.prec)


def dist_int(num: int, prec: int) -> int:
    """Numerator (over ``2**prec``) of the distance to the nearest integer."""
    other = (1 << prec) - num
    return num if num <= other else other


def frac_distance(x: Angle) -> Fraction:
    return Fraction(dist_int(x.num, x.prec), 1 << x.prec)


# -- named constants ---------------------------------------------------------
#
# Each routine returns floor(c * 2**bits) up to a few units in the last place;
# GUARD_BITS extra bits absorb that before rounding to the target precision.


def _arctan_inv(x: int, one: int) -> int:
    total = term = one // x
    x2 = x * x
    k = 1
    sign = -1
    while term:
        term //= x2
        total += sign * (term // (2 * k + 1))
        sign = -sign
        k += 1
    return total


def _pi_fixed(bits: int) -> int:
    one = 1 << bits
    return 16 * _arctan_inv(5, one) - 4 * _arctan_inv(239, one)


def _e_fixed(bits: int) -> int:
    one = 1 << bits
    total = term = one
    k = 1
    while term:
        term //= k
        total += term
        k += 1
    return total


def _sqrt2_fixed(bits: int) -> int:
    return math.isqrt(2 << (2 * bits))


def _phi_fixed(bits: int) -> int:
    one = 1 << bits
    return (one + math.isqrt(5 << (2 * bits))) // 2


_CONSTANTS = {
    "pi": _pi_fixed,
    "e": _e_fixed,
    "sqrt2": _sqrt2_fixed,
    "phi": _phi_fixed,
}

CONSTANT_ALGORITHMS = {
    "pi": "Machin formula 16*atan(1/5) - 4*atan(1/239), integer fixed point",
    "e": "Taylor series sum 1/k!, integer fixed point",
    "sqrt2": "integer square root isqrt(2 * 4^b)",
    "phi": "(1 + isqrt(5 * 4^b)) / 2, integer fixed point",
}


def named_constant(name: str, P: int) -> Angle:
    """Fractional part of a named irrational, rounded to ``P`` bits."""
    try:
        fn = _CONSTANTS[name]
    except KeyError:
        raise DomainError(f"unknown constant {name!r}; known: {sorted(_CONSTANTS)}") from None
    v = fn(P + GUARD_BITS)
    num = (v + (1 << (GUARD_BITS - 1))) >> GUARD_BITS
    return Angle(num & ((1 << P) - 1), P)


_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")
_DECIMAL = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\s*$")


def parse_angle(text: str, P: int) -> Angle:
    """Parse ``a/b``, a decimal literal, or a constant name (``pi``, ``-phi``)."""
    s = text.strip()
    m = _RATIONAL.match(s)
    if m:
        return angle_from_rational(int(m.group(1)), int(m.group(2)), P)
    if _DECIMAL.match(s):
        return angle_from_fraction(Fraction(s), P)
    neg = s.startswith("-")
    name = s.lstrip("+-").lower()
    if name in _CONSTANTS:
        a = named_constant(name, P)
        return -a if neg else a
    raise DomainError(f"cannot parse angle {text!r}")
