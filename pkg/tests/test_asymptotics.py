from fractions import Fraction

import mpmath
import pytest

from qtheta.asymptotics import (AsymptoticInstance, ScanConfig, _parse_n_range, build_instances,
                                laplace_split, residual, summarize, verify_suite)
from qtheta.diophantine import RationalT, RealT, solution_for_n
from qtheta.errors import DomainError
from qtheta.numerics import mp_at, rel_diff, to_mpc
from qtheta.special import HypSpec

T32 = RationalT(3, 2)


def inst(n, u="1", q="0.5", spec=None):
    return AsymptoticInstance(u, q, T32, solution_for_n(T32, n), spec)


def oracle_residual(n, u, q="0.5"):
    """Residual from mpmath alone: raw series, (q;q)_inf and jtheta."""
    sol = solution_for_n(T32, n)
    nt = Fraction(sol.m) + sol.lam
    digits = int(float(nt) ** 2 / 4 * 0.302) + 120
    H = mp_at(int(digits * 3.33))
    qq = H.mpf(Fraction(q).numerator) / Fraction(q).denominator
    uu = to_mpc(H, u)
    Z = uu / qq ** (H.mpf(nt.numerator) / nt.denominator)
    # past k = nt the terms fall like q^(s^2); 60 more is far below 2^-1000
    K = int(nt) + 60
    A = H.fsum(qq ** (k * k) * (-Z) ** k / H.qp(qq, qq, k) for k in range(K))
    M = sol.m // 2
    shift = (sol.m % 2) + sol.lam
    x = -qq ** (H.mpf(shift.numerator) / shift.denominator) / uu
    th = H.jtheta(3, H.log(x) / 2j, qq)
    e = M * (nt - M)
    L = A * H.qp(qq, qq) * qq ** (H.mpf(e.numerator) / e.denominator) / (-uu) ** M
    return A, L - th


@pytest.mark.parametrize("n", [9, 13, 21])
@pytest.mark.parametrize("u", ["1", "-1+1j"])
def test_residual_against_independent_oracle(ctx, n, u):
    rep = residual(inst(n, u), ctx)
    A, r = oracle_residual(n, u)
    assert rel_diff(rep.direct_value.value, A) < mpmath.mpf(10) ** -50
    assert abs(rep.residual - r) <= mpmath.mpf(10) ** -45 * max(abs(r), mpmath.mpf(10) ** -60)
    assert rep.crosscheck_rel < mpmath.mpf(10) ** -30


def test_residual_below_bound_and_decays(ctx):
    reps = [residual(inst(n), ctx) for n in range(9, 102, 4)]
    assert all(r.bound_satisfied for r in reps)
    assert abs(reps[-1].residual) < abs(reps[0].residual)


def test_small_m_is_flagged(ctx):
    rep = residual(inst(5), ctx)
    assert "small_m" in rep.flags and rep.flagged


def test_direct_from_normalized_beyond_crossover(ctx):
    rep = residual(inst(81), ctx)
    assert "direct_from_normalized" in rep.notes and rep.crosscheck_rel is None


def test_main_term_plus_residual_is_direct(ctx):
    rep = residual(inst(17, "2"), ctx)
    recon = rep.normalizer * (rep.theta_term + rep.residual)
    assert rel_diff(recon, rep.direct_value.value) < mpmath.mpf(10) ** -50


def test_reduction_to_aq_case(ctx):
    spec = HypSpec.build([], ["0.5"], 1, "0.5", ctx)
    for n in (9, 29, 61):
        a = residual(inst(n, "1+1j"), ctx)
        b = residual(inst(n, "-1-1j", spec=spec), ctx)
        assert rel_diff(a.residual, b.residual) < mpmath.mpf(10) ** -40
        assert rel_diff(a.direct_value.value, b.direct_value.value) < mpmath.mpf(10) ** -40


def test_general_bound(ctx):
    spec = HypSpec.build(["0.3"], ["0.5"], 1, "0.5", ctx)
    for n in (13, 41, 101):
        rep = residual(inst(n, "1", spec=spec), ctx)
        assert rep.kind == "t3-rational" and rep.bound_satisfied


def test_irrational_instances(ctx):
    cfg = ScanConfig(q="0.9", t=RealT.sqrt(2), u_list=("1",), shift=0, n_max=20_000)
    reps = verify_suite(cfg, ctx)
    s = summarize(reps)
    assert s["failed"] == 0 and s["passed"] > 0
    for r in reps:
        if r.n < 100:
            assert "small_n" in r.flags
        if not r.flagged:
            assert r.nu_n >= 5 and r.bound_satisfied


def test_laplace_split(ctx):
    for n in (9, 21, 45):
        sp = laplace_split(inst(n, "2"), ctx)
        assert sp.holds
        assert sp.identity_rel < mpmath.mpf(10) ** -50


def test_laplace_split_requires_rational_aq(ctx):
    spec = HypSpec.build(["0.3"], ["0.5"], 1, "0.5", ctx)
    with pytest.raises(DomainError):
        laplace_split(inst(9, spec=spec), ctx)


def test_instance_validation():
    with pytest.raises(DomainError):
        inst(9, u="0")
    with pytest.raises(DomainError):
        AsymptoticInstance("1", "0.5", RealT.sqrt(2), solution_for_n(T32, 3))


def test_errors_isolated_per_instance(ctx):
    cfg = ScanConfig(q="0.5", t=T32, u_list=("0", "1"), shift=Fraction(1, 2), n_range="9..13:4")
    reps = verify_suite(cfg, ctx)
    assert reps[0].error and reps[0].kind == "invalid"
    assert reps[-1].error is None and reps[-1].bound_satisfied


def test_parse_n_range():
    assert list(_parse_n_range("5..17:4")) == [5, 9, 13, 17]
    assert list(_parse_n_range("3..5")) == [3, 4, 5]
    with pytest.raises(DomainError):
        _parse_n_range("9..x")


def test_rational_scan_filters_drift(ctx):
    cfg = ScanConfig(q="0.5", t=T32, u_list=("1",), shift=Fraction(1, 2), n_range="1..10")
    assert [i.solution.n for i in build_instances(cfg, ctx)] == [1, 3, 5, 7, 9]
