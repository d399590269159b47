import cmath
import math
import random
from fractions import Fraction

import mpmath
import pytest

from smallfrac.arith import Angle, angle_from_rational
from smallfrac.errors import BudgetExceeded, DomainError
from smallfrac.weyl import CoefficientVector, k1_closed_form, monomial_sum, weyl_sum

P = 160


def direct_mp(c: CoefficientVector, N: int):
    """Independent high-precision oracle: sum exp(2 pi i phase) in mpmath."""
    with mpmath.workprec(256):
        s = mpmath.mpc(0)
        for n in range(1, N + 1):
            s += mpmath.expjpi(2 * mpmath.mpf(c.phase_num(n)) / mpmath.mpf(2) ** c.prec)
        return s


def as_mpc(v):
    with mpmath.workprec(256):
        return mpmath.mpc(mpmath.mpf(v.real_part.numerator) / v.real_part.denominator,
                          mpmath.mpf(v.imag_part.numerator) / v.imag_part.denominator)


def test_zero_coefficients():
    v = weyl_sum(CoefficientVector.zeros(3, P), 7)
    assert v.real_part == 7 and v.imag_part == 0
    assert v.modulus == 7


def test_hand_examples():
    v = weyl_sum(CoefficientVector.parse("1/2", P), 2)
    assert abs(complex(v)) <= v.error_bound
    v = weyl_sum(CoefficientVector.parse("0,1/4", P), 4)
    assert abs(complex(v) - (2 + 2j)) <= v.error_bound
    assert v.modulus == pytest.approx(2 * math.sqrt(2), abs=1e-15)


def test_monomial_examples():
    assert weyl_sum_close(monomial_sum(Angle(0, P), 4, 3, 5), 5)
    assert weyl_sum_close(monomial_sum(angle_from_rational(1, 7, P), 3, 7, 10), 10, tol=1e-20)
    assert weyl_sum_close(monomial_sum(angle_from_rational(1, 4, P), 2, 1, 4), 2 + 2j)


def weyl_sum_close(v, target, tol=0.0):
    return abs(complex(v) - target) <= v.error_bound + tol


def test_monomial_equals_padded(rng):
    for _ in range(10):
        beta = Angle(rng.getrandbits(P), P)
        k, m, N = rng.randint(1, 7), rng.randint(1, 50), rng.randint(1, 500)
        padded = CoefficientVector.monomial(beta.scale(m), k)
        assert monomial_sum(beta, k, m, N) == weyl_sum(padded, N)


@pytest.mark.parametrize("k,N", [(1, 257), (3, 300), (5, 1000), (8, 123)])
def test_against_mpmath_oracle(k, N, rng):
    c = CoefficientVector(tuple(Angle(rng.getrandbits(P), P) for _ in range(k)))
    v = weyl_sum(c, N)
    err = abs(direct_mp(c, N) - as_mpc(v))
    assert err <= v.error_bound
    # far tighter in practice than the certified bound
    assert err <= N * 2.0**-95


def test_error_bound_contract():
    from smallfrac.weyl import _error_bound
    for N in (1, 10, 10**4, 10**7):
        assert _error_bound(N) <= N * 2.0**-60


def test_k1_closed_form_examples():
    assert k1_closed_form(angle_from_rational(1, 2, P), 2) == pytest.approx(0, abs=1e-30)
    assert k1_closed_form(angle_from_rational(1, 4, P), 4) == pytest.approx(0, abs=1e-30)
    assert k1_closed_form(angle_from_rational(1, 3, P), 2) == pytest.approx(1, abs=1e-15)
    with pytest.raises(DomainError):
        k1_closed_form(Angle(0, P), 3)


def test_closed_form_agreement(rng):
    for _ in range(50):
        a = Angle(rng.getrandbits(P) | 1, P)
        N = rng.randint(1, 3000)
        v = weyl_sum(CoefficientVector((a,)), N)
        assert abs(v.modulus - k1_closed_form(a, N)) <= 1e-12 * N


def test_integer_shift_and_conjugation(rng):
    for _ in range(20):
        k = rng.randint(1, 6)
        c = CoefficientVector(tuple(Angle(rng.getrandbits(P), P) for _ in range(k)))
        N = rng.randint(1, 400)
        v = weyl_sum(c, N)
        # an integer shift cannot change the stored numerators, hence the value
        shifted = CoefficientVector.parse([str(Fraction(a.num, 2**P) + rng.randint(-5, 5))
                                           for a in c.coeffs], P)
        assert shifted == c and weyl_sum(shifted, N) == v
        w = weyl_sum(-c, N)
        assert abs(w.real_part - v.real_part) <= 2 * v.error_bound
        assert abs(w.imag_part + v.imag_part) <= 2 * v.error_bound
        assert v.modulus <= N + v.error_bound


def test_partitioned_evaluation_is_deterministic(rng):
    c = CoefficientVector(tuple(Angle(rng.getrandbits(P), P) for _ in range(3)))
    N = 3 * (1 << 14) + 17
    assert weyl_sum(c, N, workers=1) == weyl_sum(c, N, workers=2)


def test_modulus_bounds_enclose(rng):
    c = CoefficientVector(tuple(Angle(rng.getrandbits(P), P) for _ in range(4)))
    v = weyl_sum(c, 500)
    lo, hi = v.modulus_bounds()
    with mpmath.workprec(256):
        true = abs(direct_mp(c, 500))
        assert mpmath.mpf(lo.numerator) / lo.denominator <= true <= mpmath.mpf(hi.numerator) / hi.denominator


def test_budget():
    with pytest.raises(BudgetExceeded):
        weyl_sum(CoefficientVector.zeros(1, 64), 1000, max_terms=999)
    with pytest.raises(DomainError):
        weyl_sum(CoefficientVector.zeros(1, 64), 0)


def test_mixed_precision_rejected():
    with pytest.raises(DomainError):
        CoefficientVector((Angle(0, 8), Angle(0, 9)))
