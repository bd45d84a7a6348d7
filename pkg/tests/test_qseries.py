from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qtheta.errors import DomainError
from qtheta.numerics import make_context, mp_at, rel_diff, to_mpc
from qtheta.qseries import (CertifiedValue, certified_product, certified_quotient, euler_sum,
                            qbinomial_sum, qpoch_finite, qpoch_infinite, qpoch_infinite_m1,
                            remainder_R1, remainder_R2)

qs = st.sampled_from(["0.1", "0.3", "0.5", "0.7", "0.9"])


def _oracle_qp(a, q):
    """mpmath's own q-Pochhammer at 300 bits."""
    H = mp_at(300)
    return H.qp(to_mpc(H, a) if "j" in str(a) else H.mpf(a), H.mpf(q))


def test_qpoch_finite_small_cases(ctx):
    assert qpoch_finite("0.5", "0.5", 0, ctx) == 1
    assert abs(qpoch_finite("0.5", "0.5", 2, ctx) - mpmath.mpf("0.375")) < 1e-60


def test_qpoch_finite_negative_index(ctx):
    # (a;q)_{-1} = 1/(1 - a/q)
    v = qpoch_finite("0.25", "0.5", -1, ctx)
    assert abs(v - 2) < 1e-58


def test_qpoch_finite_negative_index_singular(ctx):
    with pytest.raises(ZeroDivisionError):
        qpoch_finite("0.5", "0.5", -1, ctx)


@pytest.mark.parametrize("a,q", [("0.5", "0.5"), ("0.3", "0.9"), ("-0.7", "0.1"), ("0.5+0.5j", "0.5")])
def test_qpoch_infinite_against_mpmath(ctx, a, q):
    cv = qpoch_infinite(a, q, ctx)
    assert rel_diff(cv.value, _oracle_qp(a, q)) < mpmath.mpf(10) ** -55
    assert cv.tail_bound <= mpmath.mpf(10) ** -55 * abs(cv.value)


def test_qpoch_infinite_of_one_vanishes(ctx):
    assert abs(qpoch_infinite(1, "0.5", ctx).value) < mpmath.mpf(10) ** -59


def test_qpoch_m1_avoids_cancellation(ctx):
    a = mpmath.mpf("1e-40")
    v = qpoch_infinite_m1(a, "0.5", ctx).value
    # first order: -a/(1-q)
    assert rel_diff(v, -a / mpmath.mpf("0.5")) < 1e-35


@given(st.sampled_from(["0.2", "-0.6", "0.9", "0.4+0.3j"]), qs, st.integers(0, 25))
def test_qpoch_consistency(a, q, n):
    ctx = make_context(50)
    W = ctx.work
    qq = W.mpf(Fraction(q).numerator) / Fraction(q).denominator
    aq = to_mpc(W, a)
    lhs = qpoch_finite(a, q, n, ctx) * qpoch_infinite(aq * qq ** n, q, ctx).value
    rhs = qpoch_infinite(a, q, ctx).value
    assert abs(lhs - rhs) <= ctx.check_tol * max(1, abs(rhs))


def test_qbinomial_rejects_outside_disk(ctx):
    with pytest.raises(DomainError):
        qbinomial_sum("0.3", 1, "0.5", ctx)


@given(st.sampled_from(["0", "0.3", "-0.5", "0.9+0.2j"]), qs,
       st.complex_numbers(max_magnitude=0.85, allow_nan=False))
def test_qbinomial_identity(a, q, z):
    ctx = make_context(40)
    W = ctx.work
    aa = to_mpc(W, a)
    zz = W.mpc(z)
    lhs = qbinomial_sum(aa, zz, q, ctx).value
    rhs = qpoch_infinite(aa * zz, q, ctx).value / qpoch_infinite(zz, q, ctx).value
    assert abs(lhs - rhs) <= ctx.check_tol * abs(rhs)


def test_euler_examples(ctx):
    assert euler_sum(0, "0.5", ctx).value == 1
    assert rel_diff(euler_sum("0.5", "0.5", ctx).value, qpoch_infinite("0.5", "0.5", ctx).value) < 1e-55
    assert abs(euler_sum(1, "0.5", ctx).value) < ctx.check_tol


def test_remainder_R1_examples(ctx):
    e = remainder_R1("0.5", 50, "0.5", ctx)
    assert abs(e.exact) < 1e-15 and e.holds
    # the majorant is (-1/8;1/2)_inf 2^-50, about 1.13e-15
    assert rel_diff(e.bound, _oracle_qp("-0.125", "0.5") * mpmath.mpf(2) ** -50) < 1e-55
    e0 = remainder_R1("0.5", 0, "0.5", ctx)
    assert abs(e0.exact - (_oracle_qp("0.5", "0.5") - 1)) < 1e-55
    assert abs(e0.bound - _oracle_qp("-0.125", "0.5")) < 1e-55
    assert e0.holds


def test_remainder_R1_rejects_nonpositive(ctx):
    with pytest.raises(DomainError):
        remainder_R1(-1, 3, "0.5", ctx)


def test_remainder_R2_examples(ctx):
    e = remainder_R2("0.5", 10, "0.5", ctx)
    assert e.holds and e.bound < 1e-2
    e0 = remainder_R2("0.5", 0, "0.5", ctx)
    assert abs(e0.exact - (1 / _oracle_qp("0.5", "0.5") - 1)) < 1e-55
    assert abs(e0.bound - 1 / _oracle_qp("0.25", "0.5")) < 1e-55


def test_remainder_R2_inner_bound_covers_n0(ctx):
    for a in ("0.1", "0.5", "0.9"):
        for q in ("0.1", "0.5", "0.9"):
            e = remainder_R2(a, 0, q, ctx)
            assert abs(e.exact) + e.tail_bound <= e.inner_bound


def test_remainder_R2_rejects(ctx):
    with pytest.raises(DomainError):
        remainder_R2(3, 2, "0.5", ctx)


@pytest.mark.parametrize("which", ["R1", "R2"])
def test_remainder_bounds_positive_n(ctx, which):
    fn = remainder_R1 if which == "R1" else remainder_R2
    for a in ("0.1", "0.3", "0.5", "0.7", "0.9"):
        for q in ("0.1", "0.5", "0.9"):
            for n in range(1, 41):
                assert fn(a, n, q, ctx).holds, (a, q, n)


def test_certified_product_and_quotient():
    a = CertifiedValue(mpmath.mpc(2), mpmath.mpf("1e-10"), 3)
    b = CertifiedValue(mpmath.mpc(4), mpmath.mpf("1e-10"), 5)
    p = certified_product([a, b])
    assert p.value == 8 and p.terms_used == 8
    assert p.tail_bound >= mpmath.mpf("6e-10")
    r = certified_quotient(a, b)
    assert r.value == 0.5 and r.tail_bound > 0


def test_certified_value_rejects_negative_tail():
    with pytest.raises(ValueError):
        CertifiedValue(mpmath.mpc(1), mpmath.mpf(-1), 0)
