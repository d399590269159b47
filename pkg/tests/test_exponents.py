import math
from fractions import Fraction

import pytest

from smallfrac.errors import OutOfRange
from smallfrac.exponents import (
    F,
    VAUGHAN_WOOLEY,
    exponent_table,
    mu,
    prior_exponents,
    rho_a,
    rho_b,
    sigma_small,
    two_step_exponent,
)


def F_float_oracle(J, s, k):
    """Same displayed formula in floating point with an explicit loop over h."""
    inner = []
    for h in range(J + 1, s + 1):
        a = ((2 * h - 2) * (s - k) + 4 * k - 4) / (h * (s - k) + 4 * h - 4)
        b = (s - h + J + 1) / J
        inner.append(min(a, b))
    return min(s / J, max(inner))


def test_mu():
    assert mu(8) == Fraction(1, 112)
    assert mu(9) == Fraction(1, 144)
    assert mu(10) == Fraction(1, 180)
    with pytest.raises(OutOfRange):
        mu(7)


def test_rho_a():
    assert rho_a(6) == Fraction(1, 30)
    assert rho_a(7) == Fraction(1, 42)
    assert rho_a(20) == Fraction(1, 380)
    with pytest.raises(OutOfRange):
        rho_a(5)


def test_rho_b():
    assert 1 / rho_b(6, 0) == pytest.approx(21.501, abs=1e-3)
    assert rho_b(7, 1) < rho_b(6, 1)
    # nu / (2 + nu) with nu = 1/(k(log k + C log log k))
    for k in (6, 9, 20):
        for C in (0.5, 1.0, 3.0):
            nu = 1 / (k * (math.log(k) + C * math.log(math.log(k))))
            expected = 1 / (2 * k * math.log(k) + 2 * C * k * math.log(math.log(k)) + 1)
            # the displayed identity omits the factor k on the log log term
            assert two_step_exponent(nu) == pytest.approx(expected, rel=1e-12)


def test_two_step_example_k20():
    # nu = 1/222.16 gives 1/445.32
    assert two_step_exponent(1 / VAUGHAN_WOOLEY[20]) == Fraction(100, 44532)


def test_sigma_small():
    assert sigma_small(30, 6) == 1
    assert sigma_small(1, 6) == Fraction(1, 30)
    assert sigma_small(7, 7) == Fraction(1, 6)
    with pytest.raises(OutOfRange):
        sigma_small(31, 6)
    for k in range(6, 12):
        J = k * (k - 1)
        vals = [sigma_small(s, k) for s in range(1, J + 1)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[0] == rho_a(k)


def test_F_small_cases():
    assert F(30, 31, 6) == Fraction(31, 30)
    with pytest.raises(OutOfRange):
        F(30, 30, 6)


@pytest.mark.parametrize("J,k", [(30, 6), (42, 7), (32, 6), (8, 4), (12, 4)])
def test_F_float_oracle_and_outer_min(J, k):
    for s in range(J + 1, J + 40):
        v = F(J, s, k)
        assert float(v) == pytest.approx(F_float_oracle(J, s, k), rel=1e-12)
        assert v <= Fraction(s, J)
        assert v.denominator > 0 and math.gcd(v.numerator, v.denominator) == 1


def test_F_k6_values_past_30():
    # computed by the exact evaluation; equality with s/30 stops at s = 54
    assert [s for s in range(31, 70) if F(30, s, 6) == Fraction(s, 30)] == list(range(31, 55))
    assert F(30, 55, 6) == Fraction(2960, 1639)
    assert F(30, 56, 6) == Fraction(780, 431)
    assert F(30, 57, 6) < Fraction(57, 30)


def test_mu_below_rho():
    for k in range(8, 40):
        assert mu(k) < rho_a(k)
        assert rho_a(k) == 2 * mu(k)


def test_prior_examples():
    i8 = {r.source: r.exponent for r in prior_exponents(8, "i")}
    assert i8 == {"Baker1982": Fraction(1, 128)}
    i9 = {r.source: r.exponent for r in prior_exponents(9, "i")}
    assert i9 == {"Wooley2013": Fraction(1, 252)}
    ii7 = {r.source: r.exponent for r in prior_exponents(7, "ii")}
    assert ii7["VaughanWooley"] == Fraction(100, 5723)
    assert Fraction(1, 42) > ii7["VaughanWooley"]
    assert {r.source for r in prior_exponents(2, "ii")} == {"Zaharescu"}
    assert prior_exponents(2, "iii", 3)[0].exponent == Fraction(9, 8)
    assert prior_exponents(3, "iii", 5)[0].exponent == Fraction(5, 4)
    assert prior_exponents(6, "iii", 33)[0].exponent == F(32, 33, 6)


def winners(rows):
    return {(r.record.k, r.record.s): r.record.source for r in rows if r.winner}


def test_table_winners():
    rows = exponent_table([8], problems=["i"])
    assert winners(rows) == {(8, None): "meanvalue:full"}
    rows = exponent_table([20], problems=["ii"])
    assert winners(rows) == {(20, None): "VaughanWooley"}
    rows = exponent_table("7..11", problems=["ii"])
    w = winners(rows)
    assert [w[(k, None)] for k in range(7, 12)] == ["meanvalue:binomial"] * 4 + ["VaughanWooley"]


def test_table_k6_form():
    rows = [t for t in exponent_table(6, "1..54", ["iii"]) if t.record.source.startswith("meanvalue:form")]
    assert [t.record.exponent for t in rows] == [Fraction(s, 30) for s in range(1, 55)]
    assert all(t.winner for t in rows)


def test_table_rho_b_requires_B():
    rows = exponent_table([6], problems=["ii"])
    assert "meanvalue:binomial-log" not in {r.record.source for r in rows}
    rows = exponent_table([6], problems=["ii"], B=1.0)
    (b,) = [r for r in rows if r.record.source == "meanvalue:binomial-log"]
    assert "B=1.0" in b.record.note and b.record.exact_str == ""
