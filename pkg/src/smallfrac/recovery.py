"""Rational structure forced by a large Weyl sum, and Dirichlet approximation.

``recover`` decides the existence of ``q, a_1..a_k`` with

    1 <= q <= N^eps (N/A)^k,   |q alpha_j - a_j| <= N^(-j+eps) (N/A)^k

by scanning q upward; the q-bound is what makes this scan cheap whenever
``A`` is close to ``N``.  All inequalities are decided exactly: residuals are
dyadic and the irrational bounds are compared after raising to the
denominator of the exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Angle, dist_int
from .errors import BudgetExceeded, DomainError, OutOfRange
from .exact import approx_pow, as_fraction, cmp_pow, floor_pow, le_pow
from .weyl import DEFAULT_MAX_TERMS, CoefficientVector, weyl_sum

__all__ = [
    "DEFAULT_SCAN_BUDGET",
    "DirichletResult",
    "NotFound",
    "RationalApprox",
    "dirichlet_1d",
    "hypothesis_holds",
    "recover",
    "scan_bound",
    "threshold",
    "threshold_exponent",
    "verify_approx",
    "verify_lemma",
]

DEFAULT_SCAN_BUDGET = 10**7


@dataclass(frozen=True)
class DirichletResult:
    q: int
    p: int
    error: Fraction


def convergents(x: Fraction):
    """Yield (p, q) for the continued-fraction convergents of x."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def dirichlet_1d(alpha: Angle, Q: int) -> DirichletResult:
    """Smallest ``q <= Q`` minimising ``||q alpha||``.

    Best approximations of the second kind are convergent denominators, so
    scanning the convergents up to Q finds the minimiser; ``||q alpha|| <=
    1/(Q+1)`` follows from the next denominator exceeding Q.
    """
    if Q < 1:
        raise DomainError("Q must be positive")
    x = alpha.value
    best = None
    for p, q in convergents(x):
        if q > Q:
            break
        if q < 1:
            continue
        d = dist_int((alpha.num * q) & ((1 << alpha.prec) - 1), alpha.prec)
        if best is None or d < best[0]:
            best = (d, q)
    if best is None:  # unreachable: q = 1 is always a convergent denominator
        best = (dist_int(alpha.num, alpha.prec), 1)
    d, q = best
    p = round(q * x)
    return DirichletResult(q, p, Fraction(d, 1 << alpha.prec))


def threshold_exponent(k: int, eps, monomial: bool = False) -> Fraction:
    """Exponent e with the large-sum hypothesis reading A > N^e."""
    if k < 3:
        raise OutOfRange(f"needs k >= 3, got {k}")
    J = k * (k - 1) if monomial else 2 * k * (k - 1)
    return 1 - Fraction(1, J) + as_fraction(eps)


def threshold(k: int, N: int, eps, monomial: bool = False) -> float:
    return approx_pow(N, threshold_exponent(k, eps, monomial))


def hypothesis_holds(A, k: int, N: int, eps, monomial: bool = False) -> bool:
    """Exact test of ``A > N^(1 - 1/J + eps)``."""
    return cmp_pow(as_fraction(A), N, threshold_exponent(k, eps, monomial)) > 0


def _ratio_pow(N: int, A: Fraction, k: int) -> Fraction:
    return (Fraction(N) / A) ** k


def scan_bound(N: int, A, eps, k: int) -> int:
    """floor(N^eps (N/A)^k)."""
    A = as_fraction(A)
    if A <= 0:
        raise DomainError("A must be positive")
    return floor_pow(N, as_fraction(eps), _ratio_pow(N, A, k))


@dataclass
class RationalApprox:
    q: int
    a: list[int]
    residuals: list[Fraction]
    thresholds: list[float]
    N: int
    A: Fraction
    eps: Fraction
    regime: str = ""
    scan_bound: int = 0
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "a": self.a,
            "residuals": [f"{float(r):.6e}" for r in self.residuals],
            "thresholds": [f"{t:.6e}" for t in self.thresholds],
            "N": self.N,
            "A": f"{float(self.A):.17g}",
            "eps": str(self.eps),
            "regime": self.regime,
            "scan_bound": self.scan_bound,
        }


@dataclass
class NotFound:
    scan_bound: int
    regime: str
    N: int
    A: Fraction
    eps: Fraction

    def to_json(self) -> dict:
        return {"found": False, "scan_bound": self.scan_bound, "regime": self.regime,
                "N": self.N, "A": f"{float(self.A):.17g}", "eps": str(self.eps)}


def _residual_caps(c: CoefficientVector, N: int, A: Fraction, eps: Fraction) -> list[int]:
    """Largest admissible residual numerator (over 2^P) for each j."""
    ratio = _ratio_pow(N, A, c.k)
    scale = ratio * (1 << c.prec)
    return [floor_pow(N, eps - j, scale) for j in range(1, c.k + 1)]


def _regime(c: CoefficientVector, N: int, A: Fraction, eps: Fraction,
            g_lower: Fraction | None) -> str:
    if c.k < 3:
        return "outside-theorem"
    if g_lower is not None and g_lower < A:
        return "vacuous:sum-below-A"
    if hypothesis_holds(A, c.k, N, eps, monomial=False):
        return "hypothesis"
    if c.is_binomial and hypothesis_holds(A, c.k, N, eps, monomial=True):
        return "hypothesis-monomial"
    return "vacuous:below-threshold"


def recover(c: CoefficientVector, N: int, A, eps, budget: int = DEFAULT_SCAN_BUDGET,
            g_lower=None, check_sum: bool = True):
    """Smallest q passing every bound, or ``NotFound`` when the scan is empty.

    Runs whatever the size of ``A``; ``regime`` records whether the large-sum
    hypothesis actually holds.  ``|g| >= A`` is certified from ``g_lower``
    when given, otherwise by evaluating the sum (``check_sum=False`` skips it).
    """
    A = as_fraction(A)
    eps = as_fraction(eps)
    if N < 1:
        raise DomainError("N must be positive")
    if A <= 0 or A > N:
        raise DomainError("A must satisfy 0 < A <= N")
    if eps <= 0:
        raise DomainError("eps must be positive")
    bound = scan_bound(N, A, eps, c.k)
    if bound > budget:
        raise BudgetExceeded("recover q-scan", bound, budget)
    if g_lower is None and check_sum and N <= DEFAULT_MAX_TERMS:
        g_lower, _ = weyl_sum(c, N).modulus_bounds()
    regime = _regime(c, N, A, eps, None if g_lower is None else as_fraction(g_lower))
    caps = _residual_caps(c, N, A, eps)
    mask = (1 << c.prec) - 1
    # check the tightest bound (largest j) first
    order = sorted(range(c.k), key=lambda i: caps[i])
    nums = [x.num for x in c.coeffs]
    for q in range(1, bound + 1):
        if all(dist_int((nums[i] * q) & mask, c.prec) <= caps[i] for i in order):
            a = [(nums[i] * q + (1 << (c.prec - 1))) >> c.prec for i in range(c.k)]
            residuals = [abs(Fraction(nums[i] * q, 1 << c.prec) - a[i]) for i in range(c.k)]
            ratio = _ratio_pow(N, A, c.k)
            return RationalApprox(
                q=q, a=a, residuals=residuals,
                thresholds=[approx_pow(N, eps - j, ratio) for j in range(1, c.k + 1)],
                N=N, A=A, eps=eps, regime=regime, scan_bound=bound,
            )
    return NotFound(bound, regime, N, A, eps)


def verify_approx(q: int, a, c: CoefficientVector, N: int, A, eps) -> dict[str, bool]:
    """Re-check the q-bound and every residual bound for externally given (q, a)."""
    A = as_fraction(A)
    eps = as_fraction(eps)
    ratio = _ratio_pow(N, A, c.k)
    out = {"q_positive": q >= 1, "q_bound": q >= 1 and le_pow(q, N, eps, ratio)}
    for j in range(1, c.k + 1):
        r = abs(q * c[j].value - a[j - 1])
        out[f"residual_{j}"] = le_pow(r, N, eps - j, ratio)
    return out


def verify_lemma(t: int, r: int, v, c: CoefficientVector, N: int, H, eps) -> dict[str, bool]:
    """Check the conclusion inequalities of the (t, r, v_j) refinement.

    ``v`` maps j (2..k) to the integer v_j.  Checks ``t r <= (N/H)^k N^eps``,
    ``t |alpha_j r - v_j| <= (N/H)^k N^(-j+eps)`` and
    ``||t r alpha_1|| <= (N/H) N^(-1+eps)``.
    """
    H = as_fraction(H)
    eps = as_fraction(eps)
    ratio = _ratio_pow(N, H, c.k)
    out = {
        "t_small": 1 <= t <= 2 * c.k * c.k,
        "tr_bound": le_pow(t * r, N, eps, ratio),
    }
    for j in range(2, c.k + 1):
        res = t * abs(c[j].value * r - v[j])
        out[f"residual_{j}"] = le_pow(res, N, eps - j, ratio)
    lin = dist_int((c[1].num * t * r) & ((1 << c.prec) - 1), c.prec)
    out["linear"] = le_pow(Fraction(lin, 1 << c.prec), N, eps - 1, Fraction(N) / H)
    return out
