"""Working precision, tolerance policy and scalar conversions.

Every evaluation in the package receives a :class:`PrecisionContext`.  The
context never mutates global mpmath state: it hands out private
``MPContext`` instances, one per binary precision, which are never modified
after creation and can therefore be shared freely between threads.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

import mpmath
from mpmath.ctx_mp import MPContext
from mpmath.libmp import dps_to_prec, mpf_pos

from .errors import DomainError

MIN_DIGITS = 30
DEFAULT_DIGITS = 60
#: decimal digits kept between working precision and assertion tolerance
TOL_GUARD_DIGITS = 10
#: extra bits carried inside the summation kernels
KERNEL_GUARD_BITS = 24

PReal = mpmath.mpf
PComplex = mpmath.mpc
Number = Union[int, float, complex, str, Fraction, mpmath.mpf, mpmath.mpc]


@lru_cache(maxsize=None)
def mp_at(prec: int) -> MPContext:
    """Return the shared, never-mutated mpmath context with ``prec`` bits."""
    ctx = MPContext()
    ctx.prec = prec
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (decimal digits) and the derived check tolerance."""

    digits: int
    check_tol: mpmath.mpf = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.digits, int) or isinstance(self.digits, bool):
            raise TypeError("digits must be an int")
        if self.digits < MIN_DIGITS:
            raise DomainError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        tol = self.mp.mpf(10) ** (TOL_GUARD_DIGITS - self.digits)
        if self.check_tol is None:
            object.__setattr__(self, "check_tol", tol)
        elif self.mp.mpf(self.check_tol) < tol:
            raise DomainError("check_tol must keep at least 10 guard digits")

    @property
    def prec(self) -> int:
        return dps_to_prec(self.digits)

    @property
    def mp(self) -> MPContext:
        """Context at the nominal working precision."""
        return mp_at(self.prec)

    @property
    def work(self) -> MPContext:
        """Context used inside summation kernels (working precision + guard bits)."""
        return mp_at(self.prec + KERNEL_GUARD_BITS)

    @property
    def eps(self) -> mpmath.mpf:
        """Truncation target ``10**-digits`` used for certified tails."""
        return self.work.mpf(10) ** (-self.digits)

    def escalate(self, digits: int) -> "PrecisionContext":
        """A context with at least ``digits`` digits (never lower than this one)."""
        return make_context(max(self.digits, int(digits)))


def make_context(digits: int = DEFAULT_DIGITS) -> PrecisionContext:
    """Build a context; ``check_tol`` is ``10**(10 - digits)``."""
    return PrecisionContext(int(digits))


def default_context() -> PrecisionContext:
    """Context honouring the ``QTHETA_DIGITS`` environment override."""
    env = os.environ.get("QTHETA_DIGITS")
    return make_context(int(env) if env else DEFAULT_DIGITS)


def exact_rational(x: Number) -> Fraction:
    """Exact binary/decimal value of a real input as a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    if hasattr(x, "_mpf_"):
        sign, man, exp, bc = x._mpf_
        if bc < 0 and not man:
            if exp == 0:
                return Fraction(0)
            raise DomainError(f"non-finite value {x}")
        v = Fraction(int(man)) * (Fraction(2) ** int(exp))
        return -v if sign else v
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_mpf(ctx: MPContext, x: Number) -> mpmath.mpf:
    """Round a real input into ``ctx`` (Fractions and decimal strings exactly rounded)."""
    if isinstance(x, (Fraction, Rational)) and not isinstance(x, int):
        x = Fraction(x)
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return ctx.mpf(x.strip())
    if hasattr(x, "_mpf_"):
        return ctx.make_mpf(mpf_pos(x._mpf_, ctx.prec, "n"))
    if hasattr(x, "_mpc_") or isinstance(x, complex):
        if x.imag != 0:
            raise DomainError(f"expected a real number, got {x}")
        return ctx.mpf(x.real)
    return ctx.mpf(x)


def to_mpc(ctx: MPContext, x: Number) -> mpmath.mpc:
    """Round a complex input into ``ctx``; strings accept ``a+bj`` syntax."""
    if hasattr(x, "_mpc_"):
        re, im = x._mpc_
        return ctx.make_mpc((mpf_pos(re, ctx.prec, "n"), mpf_pos(im, ctx.prec, "n")))
    if isinstance(x, complex):
        return ctx.mpc(x.real, x.imag)
    if isinstance(x, str):
        s = x.strip().replace(" ", "").replace("i", "j")
        try:
            return ctx.mpc(ctx.mpf(s))
        except (ValueError, TypeError):
            pass
        return ctx.mpc(ctx.mpmathify(s))
    return ctx.mpc(to_mpf(ctx, x))


def ipow(z, n: int):
    """``z**n`` for an integer ``n`` by binary powering (no logarithms)."""
    if n < 0:
        return 1 / ipow(z, -n)
    result = z * 0 + 1
    base = z
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def qpow(ctx: MPContext, q, r) -> mpmath.mpf:
    """``q**r`` for ``0 < q`` and a real exponent, via ``exp(r log q)``.

    Exact rationals are reduced first; guard bits grow with ``|r log q|`` so the
    result keeps the precision of ``ctx``.
    """
    if isinstance(r, int) or (isinstance(r, Fraction) and r.denominator == 1):
        r = int(r)
    size = abs(float(r)) * abs(float(mpmath.log(float(q)))) if q else 0.0
    extra = int(abs(float(r))).bit_length() + int(size).bit_length() + 8
    wide = mp_at(ctx.prec + extra)
    qq = wide.mpf(q)
    if isinstance(r, int):
        return ctx.mpf(ipow(qq, r))
    rr = to_mpf(wide, r)
    return ctx.mpf(wide.exp(rr * wide.log(qq)))


@dataclass(frozen=True)
class QDomain:
    """A validated base ``q`` with ``0 < q < 1``, stored exactly."""

    q: Fraction

    def __post_init__(self):
        if not (0 < self.q < 1):
            raise DomainError(f"q must satisfy 0 < q < 1, got {float(self.q)!r}")

    def at(self, ctx: MPContext) -> mpmath.mpf:
        return ctx.mpf(self.q.numerator) / self.q.denominator

    def __float__(self):
        return float(self.q)


def validate_q(q: Union[Number, QDomain]) -> QDomain:
    """Return a :class:`QDomain` or raise :class:`DomainError` unless ``0 < q < 1``."""
    if isinstance(q, QDomain):
        return q
    try:
        value = exact_rational(q)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"invalid q: {q!r}") from exc
    return QDomain(value)


def rel_diff(a, b):
    """``|a - b| / max(|a|, |b|)``, or the absolute difference when both vanish."""
    d = abs(a - b)
    m = max(abs(a), abs(b))
    return d / m if m else d
