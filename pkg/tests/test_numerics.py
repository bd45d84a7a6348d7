from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qtheta.errors import DomainError
from qtheta.numerics import (MIN_DIGITS, PrecisionContext, exact_rational, ipow, make_context,
                             mp_at, qpow, rel_diff, to_mpc, to_mpf, validate_q)


def test_context_tolerance_keeps_ten_guard_digits():
    c = make_context(60)
    assert c.check_tol == c.mp.mpf(10) ** -50
    assert c.work.prec > c.mp.prec


def test_context_rejects_low_digits():
    with pytest.raises(DomainError):
        make_context(MIN_DIGITS - 1)


def test_context_rejects_loose_tolerance():
    with pytest.raises(DomainError):
        PrecisionContext(40, check_tol=mpmath.mpf("1e-40"))


def test_escalate_never_lowers():
    c = make_context(60)
    assert c.escalate(40).digits == 60
    assert c.escalate(90).digits == 90


def test_private_contexts_do_not_touch_global_state():
    before = mpmath.mp.prec
    mp_at(500).mpf(1) / 3
    make_context(200).work.sqrt(2)
    assert mpmath.mp.prec == before


@pytest.mark.parametrize("q", [0, 1, -0.5, 1.5, "2/2"])
def test_validate_q_rejects(q):
    with pytest.raises(DomainError):
        validate_q(q)


def test_validate_q_is_exact():
    assert validate_q("0.1").q == Fraction(1, 10)
    assert validate_q(0.5).q == Fraction(1, 2)


def test_exact_rational_from_mpf():
    assert exact_rational(mpmath.mpf(0.75)) == Fraction(3, 4)


def test_foreign_context_values_are_rounded():
    hi = mp_at(400)
    lo = mp_at(100)
    x = hi.mpf(1) / 3
    assert to_mpf(lo, x).context is lo
    z = to_mpc(lo, hi.mpc(1, 2) / 3)
    assert abs(z - lo.mpc(1, 2) / 3) < lo.mpf(2) ** -99


def test_to_mpf_rejects_complex():
    with pytest.raises(DomainError):
        to_mpf(mp_at(60), 1 + 2j)


def test_to_mpc_parses_i_suffix():
    W = mp_at(100)
    assert to_mpc(W, "2+1i") == W.mpc(2, 1)


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False),
       st.integers(-20, 20))
def test_ipow_matches_power(z, n):
    W = mp_at(200)
    zz = W.mpc(z)
    assert abs(ipow(zz, n) - zz ** n) <= W.mpf(10) ** -50 * abs(zz ** n)


@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100)),
       st.fractions(min_value=-50, max_value=50))
def test_qpow_matches_mpmath(q, r):
    W = mp_at(250)
    qq = W.mpf(q.numerator) / q.denominator
    ref = W.power(qq, W.mpf(r.numerator) / r.denominator)
    assert rel_diff(qpow(mp_at(200), qq, r), ref) < W.mpf(10) ** -55


@given(st.integers(30, 120), st.integers(0, 60))
def test_precision_monotone(d, extra):
    a = make_context(d)
    b = make_context(d + extra)
    assert b.prec >= a.prec
    assert b.check_tol <= a.check_tol


@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_modulus_multiplicative(a, b):
    W = mp_at(200)
    x, y = W.mpc(a), W.mpc(b)
    assert abs(abs(x * y) - abs(x) * abs(y)) <= W.mpf(10) ** -55 * (1 + abs(x) * abs(y))
