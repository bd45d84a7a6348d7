import decimal
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qtheta.diophantine import (RationalT, RealT, chi, drift_set, floor_frac, nu_of_n, parse_t,
                                rational_solutions_in, solution_for_n, solve_irrational,
                                solve_rational)
from qtheta.errors import DomainError


@given(st.fractions(min_value=-1000, max_value=1000))
def test_floor_frac_exact(x):
    f, r = floor_frac(x)
    assert f + r == x and 0 <= r < 1


def test_floor_frac_mpf():
    f, r = floor_frac(mpmath.mpf("-2.25"))
    assert f == -3 and r == mpmath.mpf("0.75")


def test_chi():
    assert [chi(n) for n in range(4)] == [0, 1, 0, 1]


def test_drift_set():
    assert drift_set(RationalT(3, 2)) == {Fraction(0), Fraction(1, 2)}
    assert drift_set(RationalT(2, 5)) == {Fraction(k, 5) for k in range(5)}


def test_solve_rational_example():
    sols = solve_rational(RationalT(3, 2), Fraction(1, 2), 3)
    assert [(s.n, s.m) for s in sols] == [(1, 1), (3, 4), (5, 7)]


def test_solve_rational_rejects_foreign_lambda():
    with pytest.raises(DomainError):
        solve_rational(RationalT(3, 2), Fraction(1, 3), 3)


def test_rational_t_lowest_terms():
    with pytest.raises(DomainError):
        RationalT(6, 4)
    assert RationalT.of("1.5") == RationalT(3, 2)


@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 500))
def test_drift_exactness(p, d, n):
    from math import gcd
    g = gcd(p, d)
    t = RationalT(p // g, d // g)
    s = solution_for_n(t, n)
    assert Fraction(n * t.p, t.d) == s.m + s.lam
    assert 0 <= s.lam < 1 and s.chi_m == s.m % 2 and s.m_half == s.m // 2
    again = rational_solutions_in(t, s.lam, [n])
    assert again and again[0] == s


def test_solve_rational_all_hit_lambda():
    t = RationalT(7, 3)
    for lam in drift_set(t):
        for s in solve_rational(t, lam, 20):
            assert Fraction(s.n * 7, 3) - s.m == lam


def _convergent_denominators(partials, limit):
    qs = [0, 1]
    out = []
    i = 0
    while True:
        a = partials[min(i, len(partials) - 1)]
        nxt = a * qs[-1] + qs[-2]
        if nxt > limit:
            return out
        out.append(nxt)
        qs.append(nxt)
        i += 1


@pytest.mark.parametrize("t,cf", [(RealT.sqrt(2), [2]), (RealT.golden(), [1])])
def test_convergents_are_found(t, cf):
    # continued fraction tails: sqrt2 = [1; 2, 2, ...], phi = [1; 1, 1, ...]
    ns = {s.n for s in solve_irrational(t, 0, 10_000)}
    dens = [q for q in _convergent_denominators(cf, 10_000) if q > 0]
    assert set(dens) <= ns


def test_sqrt2_examples():
    ns = {s.n for s in solve_irrational(RealT.sqrt(2), 0, 100)}
    assert {1, 2, 5, 12, 29, 70} <= ns


def _brute(t_text, beta, n_max):
    decimal.getcontext().prec = 60
    t = decimal.Decimal(2).sqrt() if t_text == "sqrt2" else decimal.Decimal(t_text)
    b = decimal.Decimal(beta)
    out = []
    for n in range(1, n_max + 1):
        x = n * t - b
        m = x.to_integral_value(rounding=decimal.ROUND_HALF_EVEN)
        if abs(x - m) * n <= 3:
            out.append((n, int(m)))
    return out


@pytest.mark.parametrize("beta", ["0", "0.3", "0.75"])
def test_irrational_scan_matches_brute_force(beta):
    got = [(s.n, s.m) for s in solve_irrational(RealT.sqrt(2), Fraction(beta), 3000)]
    assert got == _brute("sqrt2", beta, 3000)


def test_irrational_solution_fields():
    for s in solve_irrational(RealT.sqrt(2), Fraction(3, 10), 5000):
        assert abs(s.gamma_n) * s.n <= 3
        assert s.in_range == (-1 < float(s.beta) + float(s.gamma_n) < 1)
        assert s.wrapped == (s.m != int(mpmath.floor(s.n * mpmath.sqrt(2))))


def test_require_floor_drops_wrapped():
    allsols = solve_irrational(RealT.sqrt(2), Fraction(9, 10), 2000)
    kept = solve_irrational(RealT.sqrt(2), Fraction(9, 10), 2000, require_floor=True)
    assert [s for s in allsols if not s.wrapped] == kept
    assert any(s.wrapped for s in allsols)


def test_beta_range():
    with pytest.raises(DomainError):
        solve_irrational(RealT.sqrt(2), 1, 10)


def test_nu_of_n():
    # floor(-q^2 log n / log q)
    q = mpmath.mpf("0.9")
    for n in (2, 100, 10 ** 5):
        assert nu_of_n(n, "0.9") == int(mpmath.floor(-q * q * mpmath.log(n) / mpmath.log(q)))


def test_parse_t():
    assert parse_t("3/2") == RationalT(3, 2)
    assert parse_t("4") == RationalT(4, 1)
    assert parse_t("sqrt:2").label == "sqrt:2"
    assert parse_t("phi").label == "phi"
    assert isinstance(parse_t("0.70710678"), RealT)
    with pytest.raises(DomainError):
        parse_t("sqrt:4")
    with pytest.raises(DomainError):
        parse_t("abc")
