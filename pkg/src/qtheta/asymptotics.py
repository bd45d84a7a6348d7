"""Theta-function main terms for ``A_q(q^{-nt} u)`` and ``f(q^{-l nt} u)``.

For a solution ``n t = m + shift`` write ``M = floor(m/2)``.  After
multiplying by the normalisation constant and by ``q^{l M (nt - M)}/uu^M``
(``uu = -u`` for A_q, ``uu = u`` for f), the series becomes the re-centred
sum

    L = sum_{j >= -M} w_{M+j} g^{j^2} y^j,   g = q^l,  y = uu q^{-l (nt - 2M)},

with weights ``w_k = prod (b q^k;q)_inf / prod (a q^k;q)_inf``.  Its terms
are all of theta size, so ``L`` is summed at modest precision even when the
original value is astronomically large.  The residual is ``L`` minus the
theta main term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import kernels
from .diophantine import (ApproxSolution, DriftSolution, RationalT, RealT, chi,
                          nu_of_n, rational_solutions_in, solution_for_n,
                          solve_irrational)
from .errors import DomainError
from .numerics import (Number, PrecisionContext, QDomain, default_context, ipow,
                       mp_at, qpow, rel_diff, to_mpc, validate_q)
from .qseries import (MAX_TERMS, CertifiedValue, certified_product,
                      certified_quotient, qpoch_infinite, qpoch_infinite_m1)
from .special import HypSpec, aq_series, theta_g

#: default "n sufficiently large" gates
M_MIN = 8
N_MIN_IRRATIONAL = 100
NU_MIN = 5
#: largest n t for which the raw series is also summed at escalated precision
CROSSOVER_NT = 60
#: digits kept beyond the point where the bound sits
RESIDUAL_GUARD_DIGITS = 10


@dataclass(frozen=True)
class Thresholds:
    m_min: int = M_MIN
    n_min_irrational: int = N_MIN_IRRATIONAL
    nu_min: int = NU_MIN
    crossover_nt: float = CROSSOVER_NT


@dataclass(frozen=True)
class AsymptoticInstance:
    """One ``(u, q, t, n, m)`` configuration, optionally with a HypSpec."""

    u: Number
    q: QDomain
    t: object
    solution: object
    spec: HypSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "q", validate_q(self.q))
        if not to_mpc(mp_at(64), self.u):
            raise DomainError("u must be nonzero")
        if self.spec is not None and self.spec.q != self.q:
            raise DomainError("spec was built for a different q")
        rational = isinstance(self.solution, DriftSolution)
        if rational != isinstance(self.t, RationalT):
            raise DomainError("solution type does not match t")

    @property
    def rational(self) -> bool:
        return isinstance(self.solution, DriftSolution)

    @property
    def kind(self) -> str:
        return ("t3-" if self.spec is not None else "t2-") + \
            ("rational" if self.rational else "irrational")


@dataclass(frozen=True)
class AsymptoticReport:
    """Direct value, theta prediction and residual for one instance.

    ``direct_value = normalizer * (theta_term + residual)``; ``flags`` lists
    the reasons an instance is outside the verified regime, ``notes`` carries
    informational remarks.
    """

    kind: str
    n: int
    m: int
    u: object
    digits: int
    direct_value: CertifiedValue | None = None
    main_term: CertifiedValue | None = None
    theta_term: object = None
    normalized_lhs: object = None
    residual: object = None
    residual_error: object = None
    bound: object = None
    bound_satisfied: bool | None = None
    normalizer: object = None
    crosscheck_rel: object = None
    shift: Fraction | None = None
    gamma_n: object = None
    nu_n: int | None = None
    flags: tuple = ()
    notes: tuple = ()
    error: str | None = None

    @property
    def flagged(self) -> bool:
        return bool(self.flags) or self.error is not None

    @property
    def abs_residual(self):
        return None if self.residual is None else abs(self.residual)

    @property
    def ratio(self):
        if self.residual is None or not self.bound:
            return None
        return abs(self.residual) / self.bound


@dataclass(frozen=True)
class LaplaceSplit:
    """The head/tail split of the normalised series and its proof-step bounds.

    ``s1``/``s2`` are the raw sub-sums over ``k <= M`` and ``k > M``;
    ``sub_terms`` holds the normalised pieces ``s11, s12, s13, r2``; each entry
    of ``checks`` is ``(label, lhs, rhs, ok)``.
    """

    s1: object
    s2: object
    sub_terms: tuple
    checks: tuple
    identity_rel: object = None

    def term(self, label):
        return dict(self.sub_terms)[label]

    @property
    def holds(self) -> bool:
        return all(ok for *_, ok in self.checks)


def _ctx(ctx):
    return default_context() if ctx is None else ctx


def _frac_mpf(W, x: Fraction):
    return W.mpf(x.numerator) / x.denominator


# -- instance preparation ---------------------------------------------------

@dataclass
class _Setup:
    W: object
    q: object
    l: Fraction
    g: object
    uu: object
    n: int
    m: int
    M: int
    chi: int
    nt: object
    shift: object
    shift_main: Fraction
    alphas: list
    betas: list
    c: CertifiedValue
    wmax: object
    qd: QDomain
    gamma: object = None


def _params(inst: AsymptoticInstance):
    """``(a_list, b_list, l, sign)`` with ``uu = sign * u``."""
    if inst.spec is None:
        return (), (inst.q.q,), Fraction(1), -1
    s = inst.spec
    return s.a_list, s.b_list, s.l, 1


def _setup(inst: AsymptoticInstance, ctx: PrecisionContext) -> _Setup:
    W = ctx.work
    a, b, l, sign = _params(inst)
    qq = inst.q.at(W)
    uu = sign * to_mpc(W, inst.u)
    sol = inst.solution
    m = sol.m
    M = m // 2
    if inst.rational:
        nt = Fraction(m) + sol.lam
        shift = Fraction(chi(m)) + sol.lam
        shift_main = shift
        gamma = None
    else:
        if abs(sol.gamma_n) * sol.n > 3:
            raise DomainError(f"|gamma_n| exceeds 3/n at n = {sol.n}")
        wide = mp_at(W.prec + 2 * max(sol.n, 2).bit_length() + 16)
        nt = sol.n * inst.t.at(wide.prec)
        shift = nt - 2 * M
        shift_main = chi(m) + sol.beta
        gamma = nt - m - _frac_mpf(wide, sol.beta)
    if inst.spec is None:
        c = qpoch_infinite(qq, inst.q, ctx)
    else:
        c = inst.spec.c_value(ctx)
    den = certified_product([qpoch_infinite(x, inst.q, ctx) for x in a])
    wmax = 1 / (abs(den.value) - den.tail_bound)
    return _Setup(W, qq, l, qpow(W, qq, l), uu, sol.n, m, M, chi(m), nt, shift,
                  shift_main, [_frac_mpf(W, x) for x in a], [_frac_mpf(W, x) for x in b],
                  c, wmax, inst.q, gamma)


def _qpow_any(W, q, r):
    """``q**r`` for an exact Fraction or an mpf exponent."""
    if isinstance(r, (int, Fraction)):
        return qpow(W, q, r)
    extra = int(abs(float(r))).bit_length() + 16
    wide = mp_at(W.prec + extra)
    return W.mpf(wide.exp(wide.mpf(r) * wide.log(wide.mpf(q))))


def _normalizer(S: _Setup):
    """``uu^M / (c q^{l M (nt - M)})``."""
    W = S.W
    e = S.l * S.M * (S.nt - S.M)
    return ipow(S.uu, S.M) / (S.c.value * _qpow_any(W, S.q, e))


def _theta_term(S: _Setup, eps):
    """``theta(uu^{-1} q^{l shift_main}; q^{2l})`` as a raw kernel tuple."""
    x = qpow(S.W, S.q, S.l * S.shift_main) / S.uu
    return theta_g(S.W, x, S.g, eps)


def _normalized_sum(S: _Setup, ctx: PrecisionContext):
    """The re-centred sum ``L`` as ``(value, error_bound, terms)``."""
    W = S.W
    y = S.uu / _qpow_any(W, S.q, S.l * S.shift)
    qM = ipow(S.q, S.M)
    num = certified_product([qpoch_infinite(b * qM, S.qd, ctx) for b in S.betas])
    den = certified_product([qpoch_infinite(a * qM, S.qd, ctx) for a in S.alphas])
    w0 = certified_quotient(num, den)
    L, tail, terms, scale = kernels.gauss_sum(W, y, S.g, w0.value, S.alphas, S.betas, S.q,
                                              S.M, S.wmax, ctx.eps, MAX_TERMS)
    w_rel = w0.tail_bound / abs(w0.value) if w0.value else W.zero
    return L, tail + scale * w_rel, terms


# -- bounds -----------------------------------------------------------------

def _theta_abs(W, inv_u, g, eps):
    v, t, *_ = theta_g(W, inv_u, g, eps)
    return v.real + t


def _bound_rational(inst: AsymptoticInstance, ctx: PrecisionContext):
    W = ctx.work
    q = inst.q
    qq = q.at(W)
    au = abs(to_mpc(W, inst.u))
    m = inst.solution.m
    a, b, l, _ = _params(inst)
    if inst.spec is None:
        pref = qpoch_infinite(-qq ** 3, q, ctx)
        const = 3 * (pref.value.real + pref.tail_bound) / (1 - qq)
        th = _theta_abs(W, 1 / au, W.sqrt(qq), ctx.eps)
        l = Fraction(1)
    else:
        const = (2 / (1 - qq)) ** (len(a) + len(b) + 1) * _ab_factor(inst, ctx)
        th = _theta_abs(W, 1 / au, qpow(W, qq, l / 2), ctx.eps)
    bracket = qpow(W, qq, Fraction(m, 4)) + \
        qpow(W, qq, l * Fraction(m * m, 16)) / au ** (m // 4 + 1)
    return const * th * bracket


def _ab_factor(inst, ctx):
    """``prod (-b q^2;q)_inf / prod (a;q)_inf`` (upper estimate)."""
    W = ctx.work
    qq = inst.q.at(W)
    a, b, _, _ = _params(inst)
    num = certified_product([qpoch_infinite(-_frac_mpf(W, x) * qq * qq, inst.q, ctx) for x in b])
    den = certified_product([qpoch_infinite(_frac_mpf(W, x), inst.q, ctx) for x in a])
    return (abs(num.value) + num.tail_bound) / (abs(den.value) - den.tail_bound)


def _bound_irrational(inst: AsymptoticInstance, ctx: PrecisionContext, nu_min=NU_MIN):
    W = ctx.work
    q = inst.q
    qq = q.at(W)
    n = inst.solution.n
    nu = nu_of_n(n, q)
    if nu < nu_min:
        raise DomainError(f"nu_n = {nu} < {nu_min}: n too small for the asymptotic regime")
    au = abs(to_mpc(W, inst.u))
    a, b, l, _ = _params(inst)
    if inst.spec is None:
        pref = qpoch_infinite(-qq ** 3, q, ctx)
        const = 48 * (pref.value.real + pref.tail_bound) / (1 - qq)
        th = _theta_abs(W, 1 / au, W.sqrt(qq), ctx.eps)
        l = Fraction(1)
    else:
        const = 48 * _ab_factor(inst, ctx) / (1 - qq)
        th = _theta_abs(W, 1 / au, qpow(W, qq, l / 2), ctx.eps)
    qn = qpow(W, qq, l * Fraction(nu * nu, 2))
    bracket = W.log(n) / n + qn * au ** nu + qn / au ** (1 + nu)
    return const * th * bracket


def error_bound_rational(inst: AsymptoticInstance, ctx: PrecisionContext | None = None):
    """The rational-case majorant of ``|r(n)|`` (A_q case)."""
    ctx = _ctx(ctx)
    _require(inst, rational=True, general=False)
    return ctx.mp.mpf(_bound_rational(inst, ctx))


def error_bound_irrational(inst: AsymptoticInstance, ctx: PrecisionContext | None = None,
                           nu_min: int = NU_MIN):
    """The irrational-case majorant of ``|e(n)|`` (A_q case); needs ``nu_n >= 5``."""
    ctx = _ctx(ctx)
    _require(inst, rational=False, general=False)
    return ctx.mp.mpf(_bound_irrational(inst, ctx, nu_min))


def error_bound_general(inst: AsymptoticInstance, ctx: PrecisionContext | None = None,
                        nu_min: int = NU_MIN):
    """Majorant for the generalised family, rational or irrational."""
    ctx = _ctx(ctx)
    _require(inst, rational=None, general=True)
    if inst.rational:
        return ctx.mp.mpf(_bound_rational(inst, ctx))
    return ctx.mp.mpf(_bound_irrational(inst, ctx, nu_min))


def _require(inst, rational, general):
    if general and inst.spec is None:
        raise DomainError("instance has no HypSpec")
    if not general and inst.spec is not None:
        raise DomainError("instance carries a HypSpec; use the general pipeline")
    if rational is not None and inst.rational != rational:
        raise DomainError("instance has the wrong kind of solution")


# -- main terms -------------------------------------------------------------

def _main_term(inst, ctx):
    S = _setup(inst, ctx)
    th, tail, terms, _ = _theta_term(S, ctx.eps)
    nz = _normalizer(S)
    mp = ctx.mp
    return CertifiedValue(mp.mpc(nz * th), mp.mpf(abs(nz) * tail), terms, mp.mpf(abs(nz * th)))


def main_term_rational(inst: AsymptoticInstance, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``(-u)^M theta(-u^{-1} q^{chi(m)+lam}; q^2) / ((q;q)_inf q^{M(nt-M)})``."""
    ctx = _ctx(ctx)
    _require(inst, rational=True, general=False)
    return _main_term(inst, ctx)


def main_term_irrational(inst: AsymptoticInstance, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """As the rational case with ``beta`` in the theta argument and the true ``nt``
    in the prefactor."""
    ctx = _ctx(ctx)
    _require(inst, rational=False, general=False)
    return _main_term(inst, ctx)


def main_term_general(inst: AsymptoticInstance, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``u^M theta(u^{-1} q^{l(chi+shift)}; q^{2l}) / (c q^{l M (nt-M)})``."""
    ctx = _ctx(ctx)
    _require(inst, rational=None, general=True)
    return _main_term(inst, ctx)


# -- residual pipeline ------------------------------------------------------

def _direct_raw(inst, S, ctx, digits):
    """The raw series at ``digits`` digits, as a CertifiedValue in that precision."""
    hi = ctx.escalate(digits)
    W = hi.work
    qq = inst.q.at(W)
    _, _, l, _ = _params(inst)
    if inst.rational:
        nt = S.nt
    else:
        nt = inst.solution.n * inst.t.at(W.prec + 32)
    Z = to_mpc(W, inst.u) / _qpow_any(W, qq, l * nt)
    if inst.spec is None:
        v, tail, terms, scale = aq_series(W, Z, qq, hi.eps)
    else:
        P = qpow(W, qq, l)
        a = [_frac_mpf(W, x) for x in inst.spec.a_list]
        b = [_frac_mpf(W, x) for x in inst.spec.b_list]
        v, tail, terms, scale = kernels.hyper_sum(W, Z, P, P * P, a, b, qq, hi.eps, MAX_TERMS)
    mp = hi.mp
    direct = CertifiedValue(mp.mpc(v), mp.mpf(tail), terms, mp.mpf(scale))
    # normalise at the same precision
    Sh = _setup(inst, hi)
    L_direct = v / _normalizer(Sh)
    return direct, L_direct


def _escalation(bound) -> int:
    if bound is None or not bound or bound >= 1:
        return RESIDUAL_GUARD_DIGITS
    return int(math.ceil(-float(mpmath.log10(bound)))) + RESIDUAL_GUARD_DIGITS


def _report(inst: AsymptoticInstance, ctx: PrecisionContext, thr: Thresholds,
            crosscheck: bool = True) -> AsymptoticReport:
    sol = inst.solution
    flags = []
    notes = []
    nu = None
    shift = sol.lam if inst.rational else sol.beta
    base = dict(kind=inst.kind, n=sol.n, m=sol.m, u=inst.u, shift=shift)
    bound = None
    try:
        if inst.rational:
            if sol.m < thr.m_min:
                flags.append("small_m")
            bound = _bound_rational(inst, ctx)
        else:
            if sol.n >= 2:
                nu = nu_of_n(sol.n, inst.q)
            if sol.n < thr.n_min_irrational:
                flags.append("small_n")
            if nu is None or nu < thr.nu_min:
                flags.append("nu_small")
            else:
                bound = _bound_irrational(inst, ctx, thr.nu_min)
            if sol.wrapped:
                notes.append("wrapped")
            if not sol.in_range:
                flags.append("out_of_range")
    except DomainError as exc:
        return AsymptoticReport(digits=ctx.digits, flags=tuple(flags), error=str(exc), **base)

    wctx = ctx.escalate(ctx.digits + _escalation(bound))
    S = _setup(inst, wctx)
    th, th_tail, _, _ = _theta_term(S, wctx.eps)
    L, L_err, _ = _normalized_sum(S, wctx)
    nz = _normalizer(S)
    residual = L - th
    mp = wctx.mp
    main = CertifiedValue(mp.mpc(nz * th), mp.mpf(abs(nz) * th_tail), 0, mp.mpf(abs(nz * th)))

    cross = None
    nt_f = float(S.nt)
    if crosscheck and nt_f <= thr.crossover_nt:
        _, _, l, _ = _params(inst)
        raw_digits = math.ceil(float(l) * nt_f ** 2 / 4 * -math.log10(float(inst.q.q))) + 40 \
            + wctx.digits
        direct, L_direct = _direct_raw(inst, S, wctx, raw_digits)
        cross = mp.mpf(rel_diff(mp.mpc(L_direct), L))
    else:
        direct = CertifiedValue(mp.mpc(nz * L), mp.mpf(abs(nz) * L_err), 0, mp.mpf(abs(nz * L)))
        notes.append("direct_from_normalized")

    satisfied = None if bound is None else bool(abs(residual) <= bound)
    return AsymptoticReport(
        digits=wctx.digits, direct_value=direct, main_term=main,
        theta_term=mp.mpc(th), normalized_lhs=mp.mpc(L), residual=mp.mpc(residual),
        residual_error=mp.mpf(L_err + th_tail), bound=None if bound is None else mp.mpf(bound),
        bound_satisfied=satisfied, normalizer=mp.mpc(nz), crosscheck_rel=cross,
        gamma_n=None if S.gamma is None else mp.mpf(S.gamma), nu_n=nu,
        flags=tuple(flags), notes=tuple(notes), **base)


def residual_rational(inst: AsymptoticInstance, ctx: PrecisionContext | None = None,
                      thresholds: Thresholds = Thresholds()) -> AsymptoticReport:
    """Report for the rational A_q case (``small_m`` flagged below ``m_min``)."""
    ctx = _ctx(ctx)
    _require(inst, rational=True, general=False)
    return _report(inst, ctx, thresholds)


def residual_irrational(inst: AsymptoticInstance, ctx: PrecisionContext | None = None,
                        thresholds: Thresholds = Thresholds()) -> AsymptoticReport:
    """Report for the irrational A_q case (flags: small_n, nu_small, out_of_range)."""
    ctx = _ctx(ctx)
    _require(inst, rational=False, general=False)
    return _report(inst, ctx, thresholds)


def residual_general(inst: AsymptoticInstance, ctx: PrecisionContext | None = None,
                     thresholds: Thresholds = Thresholds()) -> AsymptoticReport:
    """Report for the generalised family."""
    ctx = _ctx(ctx)
    _require(inst, rational=None, general=True)
    return _report(inst, ctx, thresholds)


def residual(inst: AsymptoticInstance, ctx: PrecisionContext | None = None,
             thresholds: Thresholds = Thresholds()) -> AsymptoticReport:
    """Dispatch on the instance kind."""
    return _report(inst, _ctx(ctx), thresholds)


# -- proof-step diagnostics -------------------------------------------------

def laplace_split(inst: AsymptoticInstance, ctx: PrecisionContext | None = None,
                  crossover_nt: float = CROSSOVER_NT) -> LaplaceSplit:
    """Split of the rational A_q series at ``k = M`` with the proof-step bounds.

    With ``x = -u^{-1} q^{chi+lam}`` and ``y = 1/x``, the normalised head is
    ``sum_{k<=M} (q^{M-k+1};q)_inf q^{k^2} x^k = H(x) + s11 + s12 + s13`` and the
    normalised tail is ``sum_{k>=1} (q^{M+k+1};q)_inf q^{k^2} y^k = H(y) - 1 + r2``.
    """
    ctx = _ctx(ctx)
    _require(inst, rational=True, general=False)
    S = _setup(inst, ctx)
    W, qq, M, m = S.W, S.q, S.M, S.m
    qd = inst.q
    eps = ctx.eps
    K4 = m // 4
    u = to_mpc(W, inst.u)
    au = abs(u)
    x = -qpow(W, qq, S.shift) / u
    y = 1 / x

    # (q^j;q)_inf for j = 1 .. M+1 by the downward recurrence
    P = {M + 1: qpoch_infinite(ipow(qq, M + 1), qd, ctx).value}
    for j in range(M, 0, -1):
        P[j] = P[j + 1] * (1 - ipow(qq, j))

    def qk2(k, z):
        return ipow(qq, k * k) * ipow(z, k)

    s1n = sum((P[M - k + 1] * qk2(k, x) for k in range(M + 1)), W.mpc(0))
    s12 = sum((qk2(k, x) * qpoch_infinite_m1(ipow(qq, M - k + 1), qd, ctx).value
               for k in range(K4 + 1)), W.mpc(0))
    s13 = sum((P[M - k + 1] * qk2(k, x) for k in range(K4 + 1, M + 1)), W.mpc(0))
    k0 = K4 + 1
    tail_x = kernels.hyper_sum(W, x, ipow(qq, 2 * k0 + 1), qq * qq, [], [], qq, eps, MAX_TERMS)[0]
    s11 = -qk2(k0, x) * tail_x
    Hx = kernels.hyper_sum(W, x, qq, qq * qq, [], [], qq, eps, MAX_TERMS)[0]
    Hy = kernels.hyper_sum(W, y, qq, qq * qq, [], [], qq, eps, MAX_TERMS)[0] - 1

    # r2 and the normalised tail, summed until the terms are negligible
    r2 = W.mpc(0)
    s2n = W.mpc(0)
    Pk = P[M + 1]
    k = 1
    while True:
        Pk = Pk / (1 - ipow(qq, M + k))          # (q^{M+k+1};q)_inf
        t = qk2(k, y)
        r2 += t * qpoch_infinite_m1(ipow(qq, M + k + 1), qd, ctx).value
        s2n += t * Pk
        rho = ipow(qq, 2 * k + 1) * abs(y)
        if rho <= 0.5 and abs(t) <= eps * max(1, abs(s2n)):
            break
        k += 1

    # raw sums
    scale = ipow(-u, M) / _qpow_any(W, qq, M * (S.nt - M))
    s1 = s1n * scale
    s2 = s2n * scale

    th_abs = _theta_abs(W, 1 / au, W.sqrt(qq), eps)
    pref = qpoch_infinite(-qq ** 3, qd, ctx)
    c3 = (pref.value.real + pref.tail_bound) / (1 - qq)
    b16 = 2 * qpow(W, qq, Fraction(m * m, 16)) / au ** (K4 + 1) * th_abs
    b18 = qpow(W, qq, Fraction(m, 4)) * c3 * th_abs
    mp = ctx.mp
    checks = (
        ("s11+s13", mp.mpf(abs(s11 + s13)), mp.mpf(b16), bool(abs(s11 + s13) <= b16)),
        ("s12", mp.mpf(abs(s12)), mp.mpf(b18), bool(abs(s12) <= b18)),
        ("r2", mp.mpf(abs(r2)), mp.mpf(b18), bool(abs(r2) <= b18)),
    )
    ident = max(rel_diff(s1n, Hx + s11 + s12 + s13), rel_diff(s2n, Hy + r2))

    if float(S.nt) <= crossover_nt:
        digits = math.ceil(float(S.nt) ** 2 / 4 * -math.log10(float(qd.q))) + 40 + ctx.digits
        hi = ctx.escalate(digits)
        Wh = hi.work
        qh = qd.at(Wh)
        Z = to_mpc(Wh, inst.u) / _qpow_any(Wh, qh, S.nt)
        raw = aq_series(Wh, Z, qh, hi.eps)[0] * qpoch_infinite(qh, qd, hi).value
        ident = max(ident, rel_diff(s1 + s2, ctx.work.mpc(raw)))

    sub = (("s11", mp.mpc(s11)), ("s12", mp.mpc(s12)), ("s13", mp.mpc(s13)), ("r2", mp.mpc(r2)),
           ("s1_normalized", mp.mpc(s1n)), ("s2_normalized", mp.mpc(s2n)))
    return LaplaceSplit(mp.mpc(s1), mp.mpc(s2), sub, checks, mp.mpf(ident))


# -- scans ------------------------------------------------------------------

def _parse_n_range(spec):
    """``range``/list/``"a..b:s"`` to a list of ints."""
    if spec is None:
        return None
    if isinstance(spec, str):
        body, _, step = spec.partition(":")
        lo, sep, hi = body.partition("..")
        if not sep:
            raise DomainError(f"bad n range {spec!r}; expected a..b or a..b:s")
        try:
            lo, hi, step = int(lo), int(hi), int(step) if step else 1
        except ValueError as exc:
            raise DomainError(f"bad n range {spec!r}") from exc
        if step < 1:
            raise DomainError("n range stride must be positive")
        return list(range(lo, hi + 1, step))
    return [int(n) for n in spec]


@dataclass(frozen=True)
class ScanConfig:
    """A verification scan: every ``u`` crossed with every admitted ``n``.

    Rational ``t``: ``n_range`` selects ``n``; with ``shift`` given only the
    ``n`` with ``{n t} = shift`` are kept, otherwise each ``n`` brings its own
    drift.  Irrational ``t``: ``solve_irrational(t, shift, n_max)`` supplies
    ``n``, optionally filtered by ``n_range``.
    """

    q: Number
    t: object
    u_list: tuple
    shift: Number | None = None
    n_range: object = None
    n_max: int | None = None
    a_list: tuple | None = None
    b_list: tuple | None = None
    l: Number | None = None
    thresholds: Thresholds = Thresholds()
    require_floor: bool = False
    crosscheck: bool = True

    @property
    def general(self) -> bool:
        return self.a_list is not None or self.b_list is not None or self.l is not None


def build_instances(config: ScanConfig, ctx: PrecisionContext | None = None) -> list:
    """Expand a scan into ``(index, instance_or_error)`` pairs in deterministic order."""
    ctx = _ctx(ctx)
    q = validate_q(config.q)
    spec = None
    if config.general:
        spec = HypSpec.build(config.a_list or (), config.b_list or (), config.l or 1, q, ctx)
    ns = _parse_n_range(config.n_range)
    t = config.t
    if isinstance(t, RationalT):
        if ns is None:
            raise DomainError("rational scans need an n range")
        if config.shift is None:
            sols = [solution_for_n(t, n) for n in ns if n >= 1]
        else:
            sols = rational_solutions_in(t, config.shift, ns)
    elif isinstance(t, RealT):
        if config.n_max is None and ns is None:
            raise DomainError("irrational scans need n_max or an n range")
        n_max = config.n_max if config.n_max is not None else max(ns, default=0)
        sols = solve_irrational(t, config.shift or 0, n_max, ctx.digits, config.require_floor)
        if ns is not None:
            keep = set(ns)
            sols = [s for s in sols if s.n in keep]
    else:
        raise DomainError(f"unsupported t: {t!r}")
    out = []
    for u in config.u_list:
        for sol in sols:
            try:
                out.append(AsymptoticInstance(u, q, t, sol, spec))
            except DomainError as exc:
                out.append(exc)
    return out


def verify_suite(config: ScanConfig, ctx: PrecisionContext | None = None) -> list:
    """Run the residual pipeline on every instance of ``config``.

    Errors are isolated per instance and recorded in the report; the output
    order follows the instance order.
    """
    ctx = _ctx(ctx)
    reports = []
    for item in build_instances(config, ctx):
        if isinstance(item, Exception):
            reports.append(AsymptoticReport(kind="invalid", n=0, m=0, u=None,
                                            digits=ctx.digits, error=str(item)))
            continue
        try:
            reports.append(_report(item, ctx, config.thresholds, config.crosscheck))
        except (DomainError, ArithmeticError, ValueError) as exc:
            sol = item.solution
            reports.append(AsymptoticReport(kind=item.kind, n=sol.n, m=sol.m, u=item.u,
                                            digits=ctx.digits, error=f"{type(exc).__name__}: {exc}"))
    return reports


def summarize(reports: Sequence[AsymptoticReport]) -> dict:
    """``total``, ``passed`` (non-flagged and within bound), ``flagged`` and ``failed`` counts."""
    total = len(reports)
    flagged = sum(1 for r in reports if r.flagged)
    passed = sum(1 for r in reports if not r.flagged and r.bound_satisfied)
    failed = sum(1 for r in reports if not r.flagged and not r.bound_satisfied)
    return {"total": total, "passed": passed, "flagged": flagged, "failed": failed}
