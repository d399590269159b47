"""Vectorised double-double arithmetic (about 106 significand bits).

Only what the Weyl-sum kernel needs: exact two-term transforms, add, multiply,
a pairwise sum reduction, and e(x) = exp(2 pi i x) for dyadic phases.
Dekker splitting is used for the exact product, so no FMA is required.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1

TABLE_BITS = 10
TOP_BITS = 128


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    s = a + b
    err = b - (s - a)
    return s, err


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def from_fraction(x: Fraction) -> tuple[float, float]:
    hi = float(x)
    lo = float(x - Fraction(hi))
    return hi, lo


def from_mpf(x) -> tuple[float, float]:
    hi = float(x)
    lo = float(x - hi)
    return hi, lo


def to_fraction(hi: float, lo: float) -> Fraction:
    return Fraction(hi) + Fraction(lo)


def pairwise_sum(hi: np.ndarray, lo: np.ndarray) -> tuple[float, float]:
    """Deterministic tree reduction of a double-double array."""
    hi = np.asarray(hi, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.float64)
    if hi.size == 0:
        return 0.0, 0.0
    while hi.size > 1:
        if hi.size % 2:
            hi = np.append(hi, 0.0)
            lo = np.append(lo, 0.0)
        hi, lo = add(hi[0::2], lo[0::2], hi[1::2], lo[1::2])
    return float(hi[0]), float(lo[0])


@lru_cache(maxsize=None)
def _tables():
    size = 1 << TABLE_BITS
    with mpmath.workprec(180):
        two_pi = 2 * mpmath.pi
        cos_hi = np.empty(size)
        cos_lo = np.empty(size)
        sin_hi = np.empty(size)
        sin_lo = np.empty(size)
        for t in range(size):
            ang = two_pi * t / size
            cos_hi[t], cos_lo[t] = from_mpf(mpmath.cos(ang))
            sin_hi[t], sin_lo[t] = from_mpf(mpmath.sin(ang))
        tp = from_mpf(two_pi)
    # 1/n! for the Taylor kernel, n = 0..15
    inv_fact = []
    f = Fraction(1)
    for n in range(16):
        if n:
            f /= n
        inv_fact.append(from_fraction(f))
    return cos_hi, cos_lo, sin_hi, sin_lo, tp, inv_fact


def split_phase(top: int) -> tuple[int, int, int]:
    """Split a 128-bit phase into table index and two 53-bit remainder words."""
    t = top >> (TOP_BITS - TABLE_BITS)
    rh = (top >> (TOP_BITS - TABLE_BITS - 53)) & ((1 << 53) - 1)
    rl = (top >> (TOP_BITS - TABLE_BITS - 106)) & ((1 << 53) - 1)
    return t, rh, rl


def expi_from_parts(t: np.ndarray, rh: np.ndarray, rl: np.ndarray):
    """e(x) for x = t/2^T + rh*2^-(T+53) + rl*2^-(T+106), elementwise.

    Returns (cos_hi, cos_lo, sin_hi, sin_lo) of 2 pi x.
    """
    cos_hi, cos_lo, sin_hi, sin_lo, tp, inv_fact = _tables()
    T = TABLE_BITS
    r_hi = rh.astype(np.float64) * 2.0 ** (-(T + 53))
    r_lo = rl.astype(np.float64) * 2.0 ** (-(T + 106))
    r_hi, r_lo = quick_two_sum(r_hi, r_lo)
    th_hi, th_lo = mul(r_hi, r_lo, np.float64(tp[0]), np.float64(tp[1]))
    sq_hi, sq_lo = mul(th_hi, th_lo, th_hi, th_lo)

    # cos = sum (-1)^m th^(2m)/(2m)!, sin = th * sum (-1)^m th^(2m)/(2m+1)!
    top = 7
    c_hi = np.full_like(th_hi, (-1) ** top * inv_fact[2 * top][0])
    c_lo = np.full_like(th_hi, (-1) ** top * inv_fact[2 * top][1])
    s_hi = np.full_like(th_hi, (-1) ** top * inv_fact[2 * top + 1][0])
    s_lo = np.full_like(th_hi, (-1) ** top * inv_fact[2 * top + 1][1])
    for m in range(top - 1, -1, -1):
        sign = (-1) ** m
        c_hi, c_lo = mul(c_hi, c_lo, sq_hi, sq_lo)
        c_hi, c_lo = add(c_hi, c_lo, sign * inv_fact[2 * m][0], sign * inv_fact[2 * m][1])
        s_hi, s_lo = mul(s_hi, s_lo, sq_hi, sq_lo)
        s_hi, s_lo = add(s_hi, s_lo, sign * inv_fact[2 * m + 1][0], sign * inv_fact[2 * m + 1][1])
    s_hi, s_lo = mul(s_hi, s_lo, th_hi, th_lo)

    ch, cl = cos_hi[t], cos_lo[t]
    sh, sl = sin_hi[t], sin_lo[t]
    # cos(a+b) = cos a cos b - sin a sin b ; sin(a+b) = sin a cos b + cos a sin b
    p1 = mul(ch, cl, c_hi, c_lo)
    p2 = mul(sh, sl, s_hi, s_lo)
    re = add(p1[0], p1[1], -p2[0], -p2[1])
    p3 = mul(sh, sl, c_hi, c_lo)
    p4 = mul(ch, cl, s_hi, s_lo)
    im = add(p3[0], p3[1], p4[0], p4[1])
    return re[0], re[1], im[0], im[1]
