import mpmath
import pytest
from hypothesis import given, strategies as st

from qtheta.errors import DomainError
from qtheta.numerics import make_context, mp_at, rel_diff, to_mpc
from qtheta.special import (HypSpec, confluent_phi, entire_f, ramanujan_Aq,
                            scaled_Aq_growth, scaled_Aq_limit_check, theta, theta_base,
                            triple_product)

H = mp_at(400)
TIGHT = mpmath.mpf(10) ** -55


def naive_Aq(z, q, K=400):
    z, q = to_mpc(H, z), H.mpf(q)
    return H.fsum(q ** (k * k) * (-z) ** k / H.qp(q, q, k) for k in range(K))


def jtheta_oracle(z, q):
    # theta(z;q) = jtheta(3, x, q^(1/2)) with z = exp(2 i x)
    z = to_mpc(H, z)
    return H.jtheta(3, H.log(z) / 2j, H.sqrt(H.mpf(q)))


def rr_products(q):
    q = H.mpf(q)
    G = 1 / (H.qp(q, q ** 5) * H.qp(q ** 4, q ** 5))
    Hq = 1 / (H.qp(q ** 2, q ** 5) * H.qp(q ** 3, q ** 5))
    return G, Hq


@pytest.mark.parametrize("q", ["0.1", "0.5", "0.9"])
def test_rogers_ramanujan(ctx, q):
    G, Hq = rr_products(q)
    assert rel_diff(ramanujan_Aq(-1, q, ctx).value, G) < TIGHT
    assert rel_diff(ramanujan_Aq(f"-{q}", q, ctx).value, Hq) < TIGHT


def test_aq_at_zero(ctx):
    assert ramanujan_Aq(0, "0.5", ctx).value == 1


@pytest.mark.parametrize("z", ["3+2j", "-7", "10j", "0.25"])
def test_aq_against_naive_sum(ctx, z):
    assert abs(ramanujan_Aq(z, "0.7", ctx).value - naive_Aq(z, "0.7")) <= TIGHT * max(1, abs(naive_Aq(z, "0.7")))


@pytest.mark.parametrize("z", ["1", "0.5+0.5j", "-2", "1.5j"])
@pytest.mark.parametrize("q", ["0.25", "0.5", "0.9"])
def test_theta_against_jtheta(ctx, z, q):
    # accuracy is certified relative to the largest partial sum
    cv = theta(z, q, ctx)
    assert abs(cv.value - jtheta_oracle(z, q)) < TIGHT * cv.scale


def test_theta_rejects_zero(ctx):
    with pytest.raises(DomainError):
        theta(0, "0.5", ctx)


def test_theta_base_matches_theta(ctx):
    from fractions import Fraction
    # theta(z; q^2) computed two ways
    a = theta_base("0.7+0.2j", Fraction(2), "0.6", ctx).value
    b = theta("0.7+0.2j", "0.36", ctx).value
    assert rel_diff(a, b) < TIGHT


zs = st.complex_numbers(min_magnitude=0.2, max_magnitude=5, allow_nan=False)
qs = st.sampled_from(["0.1", "0.4", "0.8"])


@given(zs, qs)
def test_theta_inversion(z, q):
    c = make_context(40)
    W = c.work
    zz = W.mpc(z)
    a, b = theta(zz, q, c), theta(1 / zz, q, c)
    assert abs(a.value - b.value) <= c.check_tol * max(a.scale, b.scale)


@given(zs, qs)
def test_theta_shift(z, q):
    c = make_context(40)
    W = c.work
    zz = W.mpc(z)
    qq = W.mpf(q)
    a = theta(zz, q, c)
    b = theta(zz * qq, q, c)
    assert abs(a.value - zz * W.sqrt(qq) * b.value) <= c.check_tol * max(a.scale, abs(zz) * b.scale)


@given(zs, qs)
def test_triple_product_property(z, q):
    c = make_context(40)
    s = theta(z, q, c)
    p = triple_product(z, q, c)
    assert abs(s.value - p.value) <= c.check_tol * s.scale


@given(st.complex_numbers(max_magnitude=10, allow_nan=False), st.sampled_from(["0.3", "0.7"]))
def test_three_term_recurrence(z, q):
    c = make_context(40)
    W = c.work
    qq = W.mpf(q)
    zz = W.mpc(z)
    a0, a1, a2 = (ramanujan_Aq(zz * qq ** j, q, c) for j in range(3))
    res = a0.value - a1.value + qq * zz * a2.value
    assert abs(res) <= c.check_tol * max(a0.scale, a1.scale, a2.scale, 1)


def test_entire_f_reduces_to_aq(ctx):
    spec = HypSpec.build([], ["0.5"], 1, "0.5", ctx)
    assert spec.is_aq_case()
    for z in ("1", "-3+1j", "4j"):
        assert abs(entire_f(z, spec, ctx=ctx).value - ramanujan_Aq(to_mpc(ctx.work, z) * -1, "0.5", ctx).value) < TIGHT


def test_entire_f_against_naive(ctx):
    spec = HypSpec.build(["0.3"], ["0.5"], "0.5", "0.6", ctx)
    q = H.mpf("0.6")
    z = H.mpc(2, -1)
    ref = H.fsum(H.qp(H.mpf("0.3"), q, k) / H.qp(H.mpf("0.5"), q, k) * q ** (k * k / H.mpf(2)) * z ** k
                 for k in range(300))
    assert rel_diff(entire_f(z, spec, ctx=ctx).value, ref) < TIGHT


def test_hypspec_normaliser(ctx):
    spec = HypSpec.build(["0.3"], ["0.5"], 1, "0.5", ctx)
    q = H.mpf("0.5")
    assert rel_diff(spec.c_value(ctx).value, H.qp(H.mpf("0.5"), q) / H.qp(H.mpf("0.3"), q)) < TIGHT


@pytest.mark.parametrize("bad", [(["1.2"], []), ([], ["-0.1"])])
def test_hypspec_rejects_out_of_range(ctx, bad):
    with pytest.raises(DomainError):
        HypSpec.build(bad[0], bad[1], 1, "0.5", ctx)


def test_hypspec_rejects_bad_l(ctx):
    with pytest.raises(DomainError):
        HypSpec.build([], [], 0, "0.5", ctx)


@pytest.mark.parametrize("m_params,n_params", [(["0.3"], []), (["0.3", "0.2"], ["0.6"]), ([], [])])
def test_confluent_phi_against_naive(ctx, m_params, n_params):
    q = H.mpf("0.5")
    z = H.mpc("0.7", "0.4")
    e = len(m_params) + 1 - len(n_params)

    def term(k):
        num = H.fprod(H.qp(H.mpf(a), q, k) for a in m_params)
        den = H.qp(q, q, k) * H.fprod(H.qp(H.mpf(b), q, k) for b in n_params)
        return num / den * z ** k * ((-1) ** k * q ** (k * (k - 1) / H.mpf(2))) ** e

    ref = H.fsum(term(k) for k in range(200))
    assert rel_diff(confluent_phi(m_params, n_params, z, "0.5", ctx).value, ref) < TIGHT


def test_confluent_phi_rejects_nonpositive_excess(ctx):
    with pytest.raises(DomainError):
        confluent_phi([], ["0.3"], 1, "0.5", ctx)


@pytest.mark.parametrize("z", ["1", "2", "2+1j"])
def test_limit_decreases_and_growth(ctx, z):
    devs = scaled_Aq_limit_check(z, ["0.9", "0.99", "0.999"], ctx)
    assert devs[0] > devs[1] > devs[2]
    for q in ("0.9", "0.99", "0.999"):
        v, cap = scaled_Aq_growth(z, q, ctx)
        assert v <= cap


def test_limit_needs_increasing_q(ctx):
    with pytest.raises(DomainError):
        scaled_Aq_limit_check(1, ["0.99", "0.9"], ctx)
