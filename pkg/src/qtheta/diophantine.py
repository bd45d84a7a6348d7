"""Floors, fractional parts and the integer solutions ``n t = m + shift``.

Rational ``t`` is handled entirely in exact integer arithmetic.  Irrational
``t`` is supplied as a rule producing its value at any precision; the scan
over ``n`` runs in fixed point and every candidate is re-checked in mpmath.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import mpmath

from . import kernels
from .errors import DomainError
from .numerics import Number, QDomain, exact_rational, mp_at, validate_q

#: extra decimal digits carried by irrational ``t`` beyond the working precision
T_GUARD_DIGITS = 20


def floor_frac(x):
    """``(floor(x), {x})`` with ``{x}`` in ``[0, 1)``.

    Exact inputs (int, Fraction, decimal string) give an exact Fraction part;
    mpf inputs give an mpf part in the same context.
    """
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, (int, Fraction)):
        f = math.floor(x)
        return f, Fraction(x) - f
    if hasattr(x, "_mpf_"):
        ctx = x.context
        f = int(ctx.floor(x))
        return f, x - f
    if isinstance(x, float):
        f = math.floor(x)
        return f, Fraction(x) - f
    raise TypeError(f"unsupported type {type(x).__name__}")


def chi(n: int) -> int:
    """Parity character: 1 for odd ``n``, 0 for even ``n``."""
    return int(n) % 2


@dataclass(frozen=True)
class RationalT:
    """``t = p/d`` in lowest terms."""

    p: int
    d: int

    def __post_init__(self):
        if self.p < 1 or self.d < 1:
            raise DomainError("t = p/d needs p, d >= 1")
        if math.gcd(self.p, self.d) != 1:
            raise DomainError(f"{self.p}/{self.d} is not in lowest terms")

    @classmethod
    def of(cls, t) -> "RationalT":
        t = exact_rational(t) if not isinstance(t, Fraction) else t
        if t <= 0:
            raise DomainError("t must be positive")
        return cls(t.numerator, t.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.d)

    def __str__(self):
        return f"{self.p}/{self.d}"


@dataclass(frozen=True)
class RealT:
    """A positive real ``t`` given by a rule ``prec -> mpf``.

    ``label`` identifies the number (``sqrt:2``, ``0.7071...``) and is the
    only thing compared or hashed.
    """

    label: str
    rule: Callable = field(compare=False, hash=False, repr=False)

    @classmethod
    def sqrt(cls, K: int) -> "RealT":
        K = int(K)
        if K < 1 or math.isqrt(K) ** 2 == K:
            raise DomainError(f"sqrt:{K} is not irrational")
        return cls(f"sqrt:{K}", lambda prec: mp_at(prec).sqrt(K))

    @classmethod
    def golden(cls) -> "RealT":
        return cls("phi", lambda prec: (1 + mp_at(prec).sqrt(5)) / 2)

    @classmethod
    def decimal(cls, text: str) -> "RealT":
        text = text.strip()
        value = Fraction(text)
        if value <= 0:
            raise DomainError("t must be positive")
        return cls(text, lambda prec: mp_at(prec).mpf(value.numerator) / value.denominator)

    def at(self, prec: int):
        return _real_at(self, prec)

    def __str__(self):
        return self.label


@lru_cache(maxsize=256)
def _real_at(t: RealT, prec: int):
    return t.rule(prec)


@dataclass(frozen=True)
class DriftSolution:
    """``n t = m + lam`` with ``m = floor(n t)``; everything exact."""

    n: int
    m: int
    lam: Fraction
    chi_m: int
    m_half: int

    @property
    def nt(self) -> Fraction:
        return self.m + self.lam


@dataclass(frozen=True)
class ApproxSolution:
    """``n t = m + beta + gamma_n`` with ``|gamma_n| <= 3/n``.

    ``m`` is the integer nearest ``n t - beta``.  ``wrapped`` marks the
    candidates where that differs from ``floor(n t)``; ``in_range`` records
    ``-1 < beta + gamma_n < 1``.  ``nu_n`` is filled in once ``q`` is known.
    """

    n: int
    m: int
    beta: Fraction
    gamma_n: mpmath.mpf
    nu_n: int | None = None
    wrapped: bool = False
    in_range: bool = True

    @property
    def chi_m(self) -> int:
        return chi(self.m)

    @property
    def m_half(self) -> int:
        return self.m // 2

    def with_nu(self, q) -> "ApproxSolution":
        return ApproxSolution(self.n, self.m, self.beta, self.gamma_n, nu_of_n(self.n, q),
                              self.wrapped, self.in_range)


def drift_set(t: RationalT) -> frozenset:
    """``{ {n t} : n >= 1 }`` as exact Fractions."""
    return frozenset(Fraction((n * t.p) % t.d, t.d) for n in range(1, t.d + 1))


def _check_lambda(t: RationalT, lam) -> Fraction:
    lam = exact_rational(lam)
    if lam not in drift_set(t):
        raise DomainError(f"lambda = {lam} is not a fractional part of n*{t}")
    return lam


def _drift(t: RationalT, n: int, lam: Fraction) -> DriftSolution:
    num = n * t.p - lam * t.d
    m = num // t.d
    assert Fraction(n * t.p, t.d) == m + lam
    return DriftSolution(n, int(m), lam, chi(m), int(m) // 2)


def solution_for_n(t: RationalT, n: int) -> DriftSolution:
    """The drift solution with the given ``n`` (its ``lam`` is ``{n t}``)."""
    if n < 1:
        raise DomainError("n must be positive")
    _, lam = floor_frac(Fraction(n * t.p, t.d))
    return _drift(t, n, lam)


def solve_rational(t: RationalT, lam, count: int) -> list:
    """The first ``count`` solutions of ``n t = m + lam`` in increasing ``n``."""
    lam = _check_lambda(t, lam)
    k = lam.numerator * (t.d // lam.denominator)
    inv = pow(t.p, -1, t.d) if t.d > 1 else 0
    n0 = (k * inv) % t.d or t.d
    return [_drift(t, n0 + j * t.d, lam) for j in range(int(count))]


def rational_solutions_in(t: RationalT, lam, ns) -> list:
    """Solutions whose ``n`` lies in the iterable ``ns`` (in that order)."""
    lam = _check_lambda(t, lam)
    out = []
    for n in ns:
        if n >= 1 and Fraction(n * t.p, t.d) - math.floor(Fraction(n * t.p, t.d)) == lam:
            out.append(_drift(t, n, lam))
    return out


def _beta(beta) -> Fraction:
    b = exact_rational(beta)
    if not (0 <= b < 1):
        raise DomainError(f"beta must lie in [0, 1), got {float(b)!r}")
    return b


def solve_irrational(t: RealT, beta, n_max: int, digits: int = 60,
                     require_floor: bool = False) -> list:
    """All ``n <= n_max`` with ``|n t - beta - m| <= 3/n`` for the nearest integer ``m``.

    ``t`` is evaluated at ``digits + 20`` digits.  A fixed-point prefilter
    (compiled when available) proposes a superset of candidates, and each is
    confirmed in mpmath.  With ``require_floor`` the wrap-around candidates
    (``m != floor(n t)``) are dropped.
    """
    b = _beta(beta)
    n_max = int(n_max)
    if n_max < 1:
        return []
    dps = digits + T_GUARD_DIGITS
    prec = mpmath.libmp.dps_to_prec(dps)
    ctx = mp_at(prec + 2 * n_max.bit_length())
    tv = t.at(ctx.prec)
    if tv <= 0:
        raise DomainError("t must be positive")
    bv = ctx.mpf(b.numerator) / b.denominator
    P = prec
    T = int(ctx.nint(ctx.ldexp(tv, P)))
    B = int(ctx.nint(ctx.ldexp(bv, P)))
    out = []
    for n in kernels.frac_scan(T, B, P, n_max):
        x = n * tv - bv
        m = int(ctx.nint(x))
        gamma = x - m
        if abs(gamma) * n > 3:
            continue
        wrapped = m != int(ctx.floor(n * tv))
        if wrapped and require_floor:
            continue
        in_range = -1 < bv + gamma < 1
        out.append(ApproxSolution(n, m, b, gamma, None, wrapped, bool(in_range)))
    return out


def nu_of_n(n: int, q) -> int:
    """``floor(-q^2 log n / log q)``."""
    n = int(n)
    if n < 2:
        raise DomainError("nu_n needs n >= 2")
    qd = validate_q(q)
    ctx = mp_at(128)
    qq = qd.at(ctx)
    return int(ctx.floor(-qq * qq * ctx.log(n) / ctx.log(qq)))


def parse_t(text: str):
    """``p/d`` or an integer gives RationalT; ``sqrt:K``, ``phi`` or a decimal gives RealT."""
    s = text.strip()
    if s.startswith("sqrt:"):
        return RealT.sqrt(int(s[5:]))
    if s in ("phi", "golden"):
        return RealT.golden()
    if "/" in s or s.isdigit():
        return RationalT.of(Fraction(s))
    try:
        Fraction(s)
    except ValueError as exc:
        raise DomainError(f"cannot parse t = {text!r}") from exc
    return RealT.decimal(s)
