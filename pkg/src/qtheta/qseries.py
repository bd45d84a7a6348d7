"""q-shifted factorials, the q-binomial and Euler sums, and product remainders.

Every infinite object is returned as a :class:`CertifiedValue`: the truncated
value together with an explicit majorant of what was thrown away.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath

from . import kernels
from .errors import DomainError
from .numerics import (Number, PrecisionContext, QDomain, default_context,
                       exact_rational, ipow, mp_at, to_mpc, to_mpf, validate_q)

#: hard cap on series length; reaching it raises ConvergenceError
MAX_TERMS = 2_000_000


@dataclass(frozen=True)
class CertifiedValue:
    """A truncated series or product with a bound on the discarded tail.

    ``scale`` is the largest partial-sum modulus seen while summing; the
    stopping rule guarantees ``tail_bound <= 10**-digits * scale``.
    """

    value: mpmath.mpc
    tail_bound: mpmath.mpf
    terms_used: int
    scale: mpmath.mpf = None

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")
        if self.scale is None:
            object.__setattr__(self, "scale", abs(self.value))

    def __complex__(self):
        return complex(self.value)

    @property
    def real(self):
        return self.value.real


@dataclass(frozen=True)
class RemainderEstimate:
    """A product remainder evaluated from its series, and its closed-form majorant.

    ``inner_bound`` (reciprocal remainder only) is the sharper majorant with
    ``(a q^n;q)_inf`` in the denominator; unlike ``bound`` it is valid at n = 0.
    """

    exact: mpmath.mpf
    bound: mpmath.mpf
    tail_bound: mpmath.mpf
    terms_used: int
    inner_bound: mpmath.mpf = None

    @property
    def holds(self) -> bool:
        return abs(self.exact) + self.tail_bound <= self.bound


def _ctx(ctx):
    return default_context() if ctx is None else ctx


def _exact_or_none(x):
    try:
        return exact_rational(x)
    except (TypeError, ValueError, DomainError):
        return None


def qpoch_finite(a: Number, q, n: int, ctx: PrecisionContext | None = None):
    """``(a;q)_n`` for any integer ``n``.

    For ``n < 0`` this is ``1/prod_{k=n}^{-1}(1 - a q^k)``; a vanishing factor
    raises ZeroDivisionError.  Exact rational inputs are tested for a zero
    factor in exact arithmetic.
    """
    ctx = _ctx(ctx)
    qd = validate_q(q)
    n = int(n)
    W = ctx.work
    qq = qd.at(W)
    aa = to_mpc(W, a)
    if n >= 0:
        return ctx.mp.mpc(kernels.qpoch_product(W, aa, qq, n))
    ea = _exact_or_none(a) if not (isinstance(a, complex) or hasattr(a, "_mpc_")) else None
    if ea is not None:
        for k in range(n, 0):
            if ea * qd.q ** k == 1:
                raise ZeroDivisionError(f"factor 1 - a q^{k} vanishes")
    acc = W.mpc(1)
    for k in range(n, 0):
        f = 1 - aa * ipow(qq, k)
        if not f:
            raise ZeroDivisionError(f"factor 1 - a q^{k} vanishes")
        acc *= f
    return ctx.mp.mpc(1 / acc)


def _product_cutoff(abs_a, q, digits):
    """First K with ``|a| q^K / (1-q) < 10**-digits``."""
    target = abs_a.context.mpf(10) ** (-digits)

    def small(k):
        return abs_a * q ** k / (1 - q) < target

    # estimate by logarithms, then walk to the exact first index
    lo = mp_at(64)
    est = (lo.log(abs_a) - lo.log(1 - q) + digits * lo.ln10) / -lo.log(q)
    K = max(0, int(lo.ceil(est)) - 2)
    while K > 0 and small(K - 1):
        K -= 1
    while not small(K):
        K += 1
    return K


def qpoch_infinite(a: Number, q, ctx: PrecisionContext | None = None,
                   terms: int | None = None) -> CertifiedValue:
    """``(a;q)_inf`` truncated at the first ``K`` with ``|a| q^K/(1-q) < 10**-digits``.

    The tail factor ``prod_{k>=K}(1 - a q^k)`` lies within ``expm1(x/(1-|a|q^K))``
    of 1, ``x = |a| q^K/(1-q)``; ``tail_bound`` is that times ``|value|``.
    Passing ``terms`` overrides ``K``.
    """
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    qq = qd.at(W)
    aa = to_mpc(W, a)
    if not aa:
        return CertifiedValue(ctx.mp.mpc(1), ctx.mp.zero, 0, ctx.mp.one)
    abs_a = W.mpf(abs(aa))
    K = _product_cutoff(abs_a, qq, ctx.digits) if terms is None else int(terms)
    value = kernels.qpoch_product(W, aa, qq, K)
    head = abs_a * ipow(qq, K)
    if head >= 1:
        tail = W.inf
    else:
        tail = abs(value) * W.expm1(head / (1 - qq) / (1 - head))
    return CertifiedValue(ctx.mp.mpc(value), ctx.mp.mpf(tail), K, ctx.mp.mpf(abs(value)))


def qpoch_infinite_m1(a: Number, q, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``(a;q)_inf - 1`` without cancellation, from the Euler expansion.

    Uses ``(a;q)_inf - 1 = -a/(1-q) sum_k q^{k(k+1)/2} (-a)^k (1-q)/(q;q)_{k+1}``.
    """
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    qq = qd.at(W)
    aa = to_mpc(W, a)
    if not aa:
        return CertifiedValue(ctx.mp.mpc(0), ctx.mp.zero, 0, ctx.mp.zero)
    S, tail, terms, scale = kernels.hyper_sum(W, -aa, qq, qq, [], [qq * qq], qq,
                                              ctx.eps, MAX_TERMS)
    pre = -aa / (1 - qq)
    return CertifiedValue(ctx.mp.mpc(pre * S), ctx.mp.mpf(abs(pre) * tail), terms,
                          ctx.mp.mpf(abs(pre) * scale))


def qbinomial_sum(a: Number, z: Number, q, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``sum_k (a;q)_k/(q;q)_k z^k`` for ``|z| < 1``."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    qq = qd.at(W)
    zz = to_mpc(W, z)
    if abs(zz) >= 1:
        raise DomainError(f"q-binomial series needs |z| < 1, got |z| = {mpmath.nstr(abs(zz), 8)}")
    aa = to_mpc(W, a)
    S, tail, terms, scale = kernels.hyper_sum(W, zz, 1, 1, [aa], [qq], qq, ctx.eps, MAX_TERMS)
    return CertifiedValue(ctx.mp.mpc(S), ctx.mp.mpf(tail), terms, ctx.mp.mpf(scale))


def euler_sum(z: Number, q, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``sum_k q^{k(k-1)/2} (-z)^k/(q;q)_k``, which equals ``(z;q)_inf``."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    qq = qd.at(W)
    zz = to_mpc(W, z)
    S, tail, terms, scale = kernels.hyper_sum(W, -zz, 1, qq, [], [qq], qq, ctx.eps, MAX_TERMS)
    return CertifiedValue(ctx.mp.mpc(S), ctx.mp.mpf(tail), terms, ctx.mp.mpf(scale))


def remainder_R1(a: Number, n: int, q, ctx: PrecisionContext | None = None) -> RemainderEstimate:
    """``(a q^n;q)_inf - 1`` and its majorant ``(-a q^2;q)_inf a q^n/(1-q)``."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    n = int(n)
    if n < 0:
        raise DomainError("n must be nonnegative")
    W = ctx.work
    aa = to_mpf(W, a)
    if aa <= 0:
        raise DomainError(f"remainder R1 needs a > 0, got {a!r}")
    qq = qd.at(W)
    x = aa * ipow(qq, n)
    ex = qpoch_infinite_m1(x, qd, ctx)
    pref = qpoch_infinite(-aa * qq * qq, qd, ctx)
    bound = (pref.value.real + pref.tail_bound) * x / (1 - qq)
    return RemainderEstimate(ctx.mp.mpf(ex.value.real), ctx.mp.mpf(bound),
                             ex.tail_bound, ex.terms_used)


def remainder_R2(a: Number, n: int, q, ctx: PrecisionContext | None = None) -> RemainderEstimate:
    """``1/(a q^n;q)_inf - 1`` and its majorant ``a q^n/((1-q)(aq;q)_inf)``.

    Needs ``0 < a q < 1``; the series form also needs ``a q^n < 1``, which only
    excludes ``n = 0`` with ``a >= 1``.  The majorant relies on
    ``(a q^n;q)_inf >= (aq;q)_inf``, true for ``n >= 1`` only; at ``n = 0`` it
    can fail and ``inner_bound`` is the one to use.
    """
    ctx = _ctx(ctx)
    qd = validate_q(q)
    n = int(n)
    if n < 0:
        raise DomainError("n must be nonnegative")
    W = ctx.work
    aa = to_mpf(W, a)
    qq = qd.at(W)
    if not (0 < aa * qq < 1):
        raise DomainError(f"remainder R2 needs 0 < a q < 1, got a q = {mpmath.nstr(aa * qq, 8)}")
    x = aa * ipow(qq, n)
    if x >= 1:
        raise DomainError("remainder R2 needs a q^n < 1")
    S, tail, terms, _ = kernels.hyper_sum(W, x, 1, 1, [], [qq * qq], qq, ctx.eps, MAX_TERMS)
    pre = x / (1 - qq)
    den = qpoch_infinite(aa * qq, qd, ctx)
    bound = x / ((1 - qq) * (den.value.real - den.tail_bound))
    den_n = qpoch_infinite(x, qd, ctx)
    inner = x / ((1 - qq) * (den_n.value.real - den_n.tail_bound))
    return RemainderEstimate(ctx.mp.mpf((pre * S).real), ctx.mp.mpf(bound),
                             ctx.mp.mpf(pre * tail), terms, ctx.mp.mpf(inner))


def certified_product(parts) -> CertifiedValue:
    """Product of certified factors with the propagated bound
    ``prod(|v_i| + e_i) - prod |v_i|``."""
    value = 1
    upper = 1
    lower = 1
    terms = 0
    for p in parts:
        value = value * p.value
        upper = upper * (abs(p.value) + p.tail_bound)
        lower = lower * abs(p.value)
        terms += p.terms_used
    return CertifiedValue(value, upper - lower, terms, abs(value))


def certified_quotient(num: CertifiedValue, den: CertifiedValue) -> CertifiedValue:
    """``num/den`` with a first-order-safe bound (needs ``e_den < |den|``)."""
    d = abs(den.value)
    if den.tail_bound >= d:
        raise ZeroDivisionError("denominator not separated from zero")
    value = num.value / den.value
    err = (num.tail_bound + abs(value) * den.tail_bound) / (d - den.tail_bound)
    return CertifiedValue(value, err, num.terms_used + den.terms_used, abs(value))
