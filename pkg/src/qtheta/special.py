"""Ramanujan's entire function, the bilateral theta function and relatives.

All series are summed through :mod:`qtheta.kernels` in the term-ratio form
``t_{k+1} = t_k z P R^k prod(1 - a q^k)/prod(1 - b q^k)``, so no ``q^{k^2}``
is ever formed from scratch.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import kernels
from .errors import DomainError
from .numerics import (Number, PrecisionContext, QDomain, default_context,
                       exact_rational, qpow, to_mpc, validate_q)
from .qseries import (MAX_TERMS, CertifiedValue, certified_product,
                      certified_quotient, qpoch_infinite)


def _ctx(ctx):
    return default_context() if ctx is None else ctx


def _cv(ctx, S, tail, terms, scale):
    mp = ctx.mp
    return CertifiedValue(mp.mpc(S), mp.mpf(tail), terms, mp.mpf(scale))


def aq_series(W, z, q, eps):
    """Raw kernel call for ``A_q(z)`` in the context ``W``."""
    return kernels.hyper_sum(W, -z, q, q * q, [], [q], q, eps, MAX_TERMS)


def ramanujan_Aq(z: Number, q, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``A_q(z) = sum_k q^{k^2} (-z)^k / (q;q)_k``."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    return _cv(ctx, *aq_series(W, to_mpc(W, z), qd.at(W), ctx.eps))


def theta_g(W, z, g, eps):
    """``sum_{k in Z} g^{k^2} z^k`` (that is theta(z; g^2)) in ``W``.

    Returns the raw tuple ``(value, tail, terms, scale)``; the two one-sided
    sums are certified separately and their tails added.
    """
    z = W.mpc(z)
    if not z:
        raise DomainError("theta needs z != 0")
    g2 = g * g
    S1, t1, k1, s1 = kernels.hyper_sum(W, z, g, g2, [], [], g2, eps, MAX_TERMS)
    S2, t2, k2, s2 = kernels.hyper_sum(W, 1 / z, g, g2, [], [], g2, eps, MAX_TERMS)
    return S1 + S2 - 1, t1 + t2, k1 + k2 - 1, max(s1, s2)


def theta(z: Number, q, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``theta(z;q) = sum_{k in Z} q^{k^2/2} z^k`` for ``z != 0``."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    zz = to_mpc(W, z)
    if not zz:
        raise DomainError("theta needs z != 0")
    g = W.sqrt(qd.at(W))
    return _cv(ctx, *theta_g(W, zz, g, ctx.eps))


def theta_base(z: Number, Q_exp: Fraction, q, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``theta(z; q**Q_exp)`` with the base computed as ``g = q**(Q_exp/2)``."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    g = qpow(W, qd.at(W), Fraction(Q_exp) / 2)
    return _cv(ctx, *theta_g(W, to_mpc(W, z), g, ctx.eps))


def triple_product(z: Number, q, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``(q;q)_inf (-q^{1/2} z;q)_inf (-q^{1/2}/z;q)_inf``."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    zz = to_mpc(W, z)
    if not zz:
        raise DomainError("triple product needs z != 0")
    h = W.sqrt(qd.at(W))
    parts = [qpoch_infinite(qd.at(W), qd, ctx),
             qpoch_infinite(-h * zz, qd, ctx),
             qpoch_infinite(-h / zz, qd, ctx)]
    return certified_product(parts)


def _exact_param(x, what):
    try:
        return exact_rational(x)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"invalid {what}: {x!r}") from exc


@dataclass(frozen=True)
class HypSpec:
    """Parameters of ``f(z) = sum_k (a;q)_k q^{l k^2}/(b;q)_k z^k``.

    ``c_factor`` is the normalisation ``(b_1..b_s;q)_inf/(a_1..a_r;q)_inf``
    evaluated at ``digits`` when the spec is built.
    """

    a_list: tuple
    b_list: tuple
    l: Fraction
    q: QDomain
    c_factor: CertifiedValue = field(default=None, compare=False, repr=False)
    digits: int = field(default=0, compare=False)

    @classmethod
    def build(cls, a_list: Sequence[Number], b_list: Sequence[Number], l: Number,
              q, ctx: PrecisionContext | None = None) -> "HypSpec":
        ctx = _ctx(ctx)
        qd = validate_q(q)
        a = tuple(_exact_param(x, "a parameter") for x in a_list)
        b = tuple(_exact_param(x, "b parameter") for x in b_list)
        ll = _exact_param(l, "l")
        for x in a + b:
            if not (0 <= x < 1):
                raise DomainError(f"parameters must lie in [0, 1), got {float(x)!r}")
        if ll <= 0:
            raise DomainError(f"l must be positive, got {ll}")
        spec = cls(a, b, ll, qd)
        object.__setattr__(spec, "c_factor", spec._c_at(ctx))
        object.__setattr__(spec, "digits", ctx.digits)
        if not spec.c_factor.value:
            raise DomainError("normalisation constant vanishes")
        return spec

    def _c_at(self, ctx):
        num = certified_product([qpoch_infinite(b, self.q, ctx) for b in self.b_list])
        den = certified_product([qpoch_infinite(a, self.q, ctx) for a in self.a_list])
        return certified_quotient(num, den)

    def c_value(self, ctx: PrecisionContext) -> CertifiedValue:
        """The normalisation at ``ctx`` (cached value reused when precise enough)."""
        if self.c_factor is not None and ctx.digits <= self.digits:
            return self.c_factor
        return self._c_at(ctx)

    @property
    def r(self):
        return len(self.a_list)

    @property
    def s(self):
        return len(self.b_list)

    def is_aq_case(self) -> bool:
        """True when ``f(z) = A_q(-z)`` term by term."""
        return not self.a_list and self.b_list == (self.q.q,) and self.l == 1


def entire_f(z: Number, spec: HypSpec, q=None, ctx: PrecisionContext | None = None) -> CertifiedValue:
    """``f(z)`` for the parameter bundle ``spec``."""
    ctx = _ctx(ctx)
    qd = spec.q if q is None else validate_q(q)
    if qd != spec.q:
        raise DomainError("q differs from the q the spec was built with")
    W = ctx.work
    qq = qd.at(W)
    P = qpow(W, qq, spec.l)
    a = [W.mpf(x.numerator) / x.denominator for x in spec.a_list]
    b = [W.mpf(x.numerator) / x.denominator for x in spec.b_list]
    S = kernels.hyper_sum(W, to_mpc(W, z), P, P * P, a, b, qq, ctx.eps, MAX_TERMS)
    return _cv(ctx, *S)


def confluent_phi(m_params: Sequence[Number], n_params: Sequence[Number], z: Number, q,
                  ctx: PrecisionContext | None = None) -> CertifiedValue:
    """The confluent series ``sum_k (a;q)_k/(q,b;q)_k z^k (-q^{(k-1)/2})^{k e}``,
    ``e = m + 1 - n > 0``."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    e = len(m_params) + 1 - len(n_params)
    if e <= 0:
        raise DomainError(f"confluent series needs m + 1 - n > 0, got {e}")
    W = ctx.work
    qq = qd.at(W)
    a = [to_mpc(W, x) for x in m_params]
    b = [qq] + [to_mpc(W, x) for x in n_params]
    zz = to_mpc(W, z) * (-1) ** e
    S = kernels.hyper_sum(W, zz, 1, qq ** e, a, b, qq, ctx.eps, MAX_TERMS)
    return _cv(ctx, *S)


def scaled_Aq_limit_check(z: Number, q_list: Sequence, ctx: PrecisionContext | None = None) -> list:
    """``|A_q((1-q) z) - exp(-z)|`` for each ``q`` (must increase strictly)."""
    ctx = _ctx(ctx)
    qs = [validate_q(q) for q in q_list]
    if any(b.q <= a.q for a, b in zip(qs, qs[1:])):
        raise DomainError("q_list must be strictly increasing")
    W = ctx.work
    zz = to_mpc(W, z)
    target = W.exp(-zz)
    out = []
    for qd in qs:
        qq = qd.at(W)
        v = aq_series(W, (1 - qq) * zz, qq, ctx.eps)[0]
        out.append(ctx.mp.mpf(abs(v - target)))
    return out


def scaled_Aq_growth(z: Number, q, ctx: PrecisionContext | None = None):
    """``(|A_q((1-q) z)|, exp(q |z|))``: the value and its growth majorant."""
    ctx = _ctx(ctx)
    qd = validate_q(q)
    W = ctx.work
    qq = qd.at(W)
    zz = to_mpc(W, z)
    v = aq_series(W, (1 - qq) * zz, qq, ctx.eps)[0]
    return ctx.mp.mpf(abs(v)), ctx.mp.mpf(W.exp(qq * abs(zz)))
