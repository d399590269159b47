"""Exhaustive minimisers and the constructive n = q m / n = l m pipelines.

All objective values are exact dyadic distances; ties go to the smallest n
(lexicographically smallest tuple for additive forms), so every result is
reproducible regardless of how the range is partitioned across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .arith import Angle, dist_int
from .errors import BudgetExceeded, DomainError, OutOfRange
from .exact import as_fraction, floor_pow, le_pow
from .recovery import NotFound, hypothesis_holds, recover
from .weyl import CoefficientVector, weyl_sum

__all__ = [
    "FitResult",
    "MinResult",
    "QMTrace",
    "TwoStepTrace",
    "construct_qm",
    "exponent_fit",
    "min_additive_form",
    "min_poly",
    "objective_poly",
    "objective_form",
    "two_step_minimize",
]

DEFAULT_POLY_BUDGET = 10**8
DEFAULT_FORM_BUDGET = 10**7
DEFAULT_EPS = Fraction(1, 20)
CHUNK = 1 << 15


@dataclass(frozen=True)
class MinResult:
    argmin: int | tuple[int, ...]
    value: Fraction
    N: int
    evaluations: int

    def to_json(self) -> dict:
        arg = list(self.argmin) if isinstance(self.argmin, tuple) else self.argmin
        return {"argmin": arg, "value": str(self.value), "value_float": float(self.value),
                "N": self.N, "evaluations": self.evaluations}


def objective_poly(c: CoefficientVector, n: int) -> Fraction:
    """||sum_j alpha_j n^j||, evaluated directly from the definition."""
    total = sum(c[j].value * n**j for j in range(1, c.k + 1))
    frac = total - math.floor(total)
    return min(frac, 1 - frac)


def objective_form(betas: Sequence[Angle], k: int, ns: Sequence[int]) -> Fraction:
    total = sum(b.value * n**k for b, n in zip(betas, ns))
    frac = total - math.floor(total)
    return min(frac, 1 - frac)


def _min_chunk(nums: tuple[int, ...], prec: int, start: int, stop: int) -> tuple[int, int]:
    mask = (1 << prec) - 1
    half = 1 << (prec - 1)
    full = 1 << prec
    rev = nums[::-1]
    best_d = full
    best_n = start
    for n in range(start, stop):
        acc = 0
        for c in rev:
            acc = (acc + c) * n
        p = acc & mask
        d = p if p <= half else full - p
        if d < best_d:
            best_d, best_n = d, n
            if d == 0:
                break
    return best_d, best_n


def min_poly(c: CoefficientVector, N: int, workers: int = 1,
             budget: int = DEFAULT_POLY_BUDGET) -> MinResult:
    if N < 1:
        raise DomainError("N must be positive")
    if N > budget:
        raise BudgetExceeded("min_poly", N, budget)
    nums = tuple(a.num for a in c.coeffs)
    chunks = [(nums, c.prec, s, min(s + CHUNK, N + 1)) for s in range(1, N + 1, CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_min_chunk, *zip(*chunks)))
    else:
        parts = []
        for ch in chunks:
            parts.append(_min_chunk(*ch))
            if parts[-1][0] == 0:
                break
    d, n = min(parts)
    return MinResult(n, Fraction(d, 1 << c.prec), N, N)


def min_additive_form(betas: Sequence[Angle], k: int, N: int,
                      budget: int = DEFAULT_FORM_BUDGET) -> MinResult:
    """Minimise ||sum beta_i n_i^k|| over the box [0, N]^s without the origin."""
    s = len(betas)
    if s < 1 or k < 1 or N < 1:
        raise DomainError("need s, k, N >= 1")
    prec = betas[0].prec
    if any(b.prec != prec for b in betas):
        raise DomainError("all betas must share one precision")
    points = (N + 1) ** s - 1
    if points > budget:
        raise BudgetExceeded(
            f"min_additive_form (try a smaller N or fewer variables; per-coordinate "
            f"table has {N + 1} entries)", points, budget)
    mask = (1 << prec) - 1
    tables = [[(b.num * n**k) & mask for n in range(N + 1)] for b in betas]
    best = (1 << prec, None)
    half = 1 << (prec - 1)
    full = 1 << prec
    # prefix sums over all but the last coordinate, innermost loop vectorised
    # over Python ints would not beat this plain scan at desk scale
    last = tables[-1]
    for prefix in product(range(N + 1), repeat=s - 1):
        base = 0
        for i, n in enumerate(prefix):
            base += tables[i][n]
        start = 1 if not any(prefix) else 0
        for n in range(start, N + 1):
            p = (base + last[n]) & mask
            d = p if p <= half else full - p
            if d < best[0]:
                best = (d, prefix + (n,))
    return MinResult(best[1], Fraction(best[0], 1 << prec), N, points)


# -- n = q m construction ----------------------------------------------------


@dataclass
class QMTrace:
    k: int
    N: int
    eps: Fraction
    J: int
    binomial: bool
    M: int
    m: int | None = None
    g_modulus: float | None = None
    A_pigeonhole: Fraction | None = None
    steps: dict = field(default_factory=dict)
    q: int | None = None
    scan_bound: int | None = None
    n: int | None = None
    value: Fraction | None = None
    term_distances: list[Fraction] = field(default_factory=list)
    failed_step: str | None = None

    @property
    def ok(self) -> bool:
        return self.n is not None

    def result(self) -> MinResult | None:
        if self.n is None:
            return None
        return MinResult(self.n, self.value, self.N, 1)

    def to_json(self) -> dict:
        return {
            "k": self.k, "N": self.N, "eps": str(self.eps), "J": self.J,
            "binomial": self.binomial, "M": self.M, "m": self.m,
            "g_modulus": self.g_modulus,
            "A_pigeonhole": None if self.A_pigeonhole is None else str(self.A_pigeonhole),
            "steps": self.steps, "q": self.q, "scan_bound": self.scan_bound,
            "n": self.n,
            "value": None if self.value is None else str(self.value),
            "value_float": None if self.value is None else float(self.value),
            "term_distances": [float(x) for x in self.term_distances],
            "failed_step": self.failed_step,
        }


def construct_qm(c: CoefficientVector, N: int, eps=DEFAULT_EPS, strict: bool = False,
                 workers: int = 1, recover_budget: int = 10**6) -> QMTrace:
    """Build a witness n = q m from a large Weyl sum of a dilate m * alpha.

    Steps: M = floor(N^(1/J - eps)); pick m <= M maximising |g(m alpha; N)|;
    record whether it beats N/(6M) and whether it meets the large-sum
    hypothesis; recover q from that sum; set n = q m.  The construction is
    asymptotic, so a failed step is reported in the trace rather than raised.
    With ``strict=True`` the pipeline stops at the first unmet hypothesis.
    """
    eps = as_fraction(eps)
    k = c.k
    binomial = c.is_binomial
    if k < 3:
        raise OutOfRange("construct_qm needs k >= 3")
    J = k * (k - 1) if binomial else 2 * k * (k - 1)
    M = floor_pow(N, Fraction(1, J) - eps) if Fraction(1, J) > eps else 0
    if M < 1:
        raise OutOfRange(f"M = floor(N^(1/{J} - {eps})) < 1 for N={N}; increase N or lower eps")
    tr = QMTrace(k=k, N=N, eps=eps, J=J, binomial=binomial, M=M)

    best = None
    for m in range(1, M + 1):
        g = weyl_sum(c.scale(m), N, workers=workers)
        lo, _ = g.modulus_bounds()
        if best is None or lo > best[0]:
            best = (lo, m, g.modulus)
    lo, m, modulus = best
    tr.m, tr.g_modulus = m, modulus
    tr.A_pigeonhole = Fraction(N, 6 * M)
    tr.steps["pigeonhole"] = lo > tr.A_pigeonhole
    tr.steps["hypothesis"] = hypothesis_holds(lo, k, N, eps, monomial=binomial)
    for name in ("pigeonhole", "hypothesis"):
        if strict and not tr.steps[name]:
            tr.failed_step = name
            return tr
    if lo <= 0:
        tr.failed_step = "pigeonhole"
        return tr

    cm = c.scale(m)
    try:
        rec = recover(cm, N, lo, eps, budget=recover_budget, g_lower=lo)
    except BudgetExceeded:
        tr.steps["recovery"] = False
        tr.failed_step = "recovery-budget"
        return tr
    tr.scan_bound = rec.scan_bound
    if isinstance(rec, NotFound):
        tr.steps["recovery"] = False
        tr.failed_step = "recovery"
        return tr
    tr.steps["recovery"] = True
    tr.q = rec.q
    n = rec.q * m
    tr.steps["range"] = n <= N
    if n > N:
        tr.failed_step = "range"
        return tr
    tr.n = n
    tr.value = Fraction(dist_int(c.phase_num(n), c.prec), 1 << c.prec)
    mask = (1 << c.prec) - 1
    tr.term_distances = [Fraction(dist_int((c[j].num * n**j) & mask, c.prec), 1 << c.prec)
                         for j in range(1, k + 1)]
    return tr


# -- n = l m two-step construction --------------------------------------------


@dataclass
class TwoStepTrace:
    k: int
    N: int
    nu: Fraction
    a: Fraction
    b: Fraction
    ell: int
    m: int
    final_n: int
    step1_value: Fraction
    step2_value: Fraction
    final_value: Fraction
    certificates: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "k": self.k, "N": self.N, "nu": str(self.nu), "a": str(self.a), "b": str(self.b),
            "ell": self.ell, "m": self.m, "final_n": self.final_n,
            "step1_value": str(self.step1_value), "step2_value": str(self.step2_value),
            "final_value": str(self.final_value), "final_value_float": float(self.final_value),
            "certificates": self.certificates,
        }


def two_step_minimize(alpha_k: Angle, alpha_1: Angle, k: int, N: int, nu=None) -> TwoStepTrace:
    """Dirichlet step for alpha_1, then a monomial search for alpha_k (l m)^k."""
    if k < 2:
        raise OutOfRange("needs k >= 2")
    if N < 2:
        raise DomainError("needs N >= 2")
    if alpha_k.prec != alpha_1.prec:
        raise DomainError("alpha_k and alpha_1 must share one precision")
    nu = Fraction(1, k * (k - 1)) if nu is None else as_fraction(nu)
    if nu <= 0:
        raise DomainError("nu must be positive")
    prec = alpha_k.prec
    mask = (1 << prec) - 1
    a = 1 / (2 + nu)
    b = 1 - a
    L = floor_pow(N, b)
    Mx = floor_pow(N, a)

    # smallest l <= N^b with ||alpha_1 l|| <= N^-b; exists by Dirichlet
    ell = None
    for cand in range(1, L + 1):
        d = Fraction(dist_int((alpha_1.num * cand) & mask, prec), 1 << prec)
        if le_pow(d, N, -b):
            ell = cand
            break
    if ell is None:  # cannot happen: Dirichlet gives q <= L with error < N^-b
        raise AssertionError("Dirichlet step found no l")
    step1 = Fraction(dist_int((alpha_1.num * ell) & mask, prec), 1 << prec)

    base = (alpha_k.num * ell**k) & mask
    best_d, best_m = None, None
    for m in range(1, Mx + 1):
        d = dist_int((base * m**k) & mask, prec)
        if best_d is None or d < best_d:
            best_d, best_m = d, m
    step2 = Fraction(best_d, 1 << prec)
    n = ell * best_m
    final_num = (alpha_k.num * n**k + alpha_1.num * n) & mask
    final = Fraction(dist_int(final_num, prec), 1 << prec)
    lin = Fraction(dist_int((alpha_1.num * n) & mask, prec), 1 << prec)
    certs = {
        "ell_range": le_pow(ell, N, b),
        "m_range": le_pow(best_m, N, a),
        "n_range": 1 <= n <= N,
        "step1": le_pow(step1, N, -b),
        "linear_term": lin <= best_m * step1 and le_pow(lin, N, 2 * a - 1),
        "triangle": final <= step2 + lin,
    }
    return TwoStepTrace(k, N, nu, a, b, ell, best_m, n, step1, step2, final, certs)


# -- empirical slopes -----------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residuals: list[float]
    used: list[int]
    excluded: list[tuple[int, str]]

    def to_json(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "residuals": self.residuals,
                "used": self.used, "excluded": [list(e) for e in self.excluded]}


def exponent_fit(results: Sequence[tuple[int, float | Fraction]]) -> FitResult:
    """Least-squares slope of log(min value) against log N."""
    xs, ys, used, excluded = [], [], [], []
    for N, v in results:
        if v == 0:
            excluded.append((N, "zero minimum (rational coefficient detected)"))
            continue
        xs.append(math.log(N))
        ys.append(math.log(float(v)))
        used.append(N)
    if len(set(used)) < 3:
        raise DomainError(f"need >= 3 distinct N with nonzero minima, have {len(set(used))}")
    X = np.array(xs)
    Y = np.array(ys)
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    return FitResult(float(slope), float(intercept), [float(r) for r in resid], used, excluded)
