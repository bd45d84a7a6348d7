"""Identity suites: sum side against product side on parameter grids.

Each suite returns a list of :class:`IdentityCase` in a fixed order.  The
default grids are deterministic (no random sampling) so reruns are
byte-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath

from .errors import DomainError
from .numerics import PrecisionContext, default_context, to_mpc, validate_q
from .qseries import (euler_sum, qbinomial_sum, qpoch_infinite, remainder_R1,
                      remainder_R2)
from .special import (ramanujan_Aq, scaled_Aq_growth, scaled_Aq_limit_check, theta,
                      triple_product)

SUITES = ("triple_product", "recurrence", "qbinomial", "euler", "lemma1",
          "theta_shift", "limit_q1")

DEFAULT_Q = {
    "triple_product": ("0.1", "0.5", "0.9"),
    "recurrence": ("0.3", "0.7"),
    "qbinomial": ("0.1", "0.5", "0.9"),
    "euler": ("0.1", "0.5", "0.9"),
    "lemma1": ("0.1", "0.5", "0.9"),
    "theta_shift": ("0.1", "0.5", "0.9"),
    "limit_q1": ("0.9", "0.99", "0.999"),
}


@dataclass(frozen=True)
class IdentityCase:
    suite: str
    label: str
    lhs: object
    rhs: object
    residual: object
    tol: object
    passed: bool


# -- grids ------------------------------------------------------------------

def disk_grid(count: int, radius=10):
    """``count`` points spread over the disk ``|z| <= radius`` (sunflower layout)."""
    golden = math.pi * (3 - math.sqrt(5))
    pts = []
    for k in range(count):
        r = float(radius) * math.sqrt((k + 0.5) / count)
        pts.append(complex(round(r * math.cos(k * golden), 12), round(r * math.sin(k * golden), 12)))
    return pts


def circle_grid(radius, count: int):
    """``count`` points on ``|z| = radius`` at half-step angles (none on the real axis)."""
    return [complex(round(float(radius) * math.cos(2 * math.pi * (k + 0.5) / count), 12),
                    round(float(radius) * math.sin(2 * math.pi * (k + 0.5) / count), 12))
            for k in range(count)]


def parse_complex(text: str):
    """A complex literal as a string for exact decimal conversion later."""
    s = text.strip().replace(" ", "")
    if not s:
        raise DomainError("empty complex literal")
    complex(s.replace("i", "j"))      # validate
    return s


def parse_z_grid(spec: str) -> list:
    """``disk:N[:R]``, ``circle:R:N`` or ``list:z1,z2,...``."""
    kind, _, rest = spec.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if kind == "disk":
            return disk_grid(int(parts[0]), float(parts[1]) if len(parts) > 1 else 10)
        if kind == "circle":
            return circle_grid(float(parts[0]), int(parts[1]))
        if kind == "list":
            return [parse_complex(s) for s in rest.split(",") if s.strip()]
    except (IndexError, ValueError) as exc:
        raise DomainError(f"bad z grid {spec!r}") from exc
    raise DomainError(f"unknown z grid kind {kind!r}; use disk, circle or list")


def default_z(suite: str) -> list:
    if suite in ("triple_product", "theta_shift"):
        return circle_grid(0.5, 10) + circle_grid(2, 10) + ["0.3", "-0.7", "1.5", "-3"]
    if suite == "recurrence":
        return disk_grid(50, 10)
    if suite == "qbinomial":
        return circle_grid(0.6, 8)
    if suite == "euler":
        return circle_grid(0.5, 8) + circle_grid(1.5, 8) + circle_grid(3, 8)
    if suite == "limit_q1":
        return ["1", "2", "2+1j"]
    return []


QBINOMIAL_A = ("-0.5", "0.3", "0.9+0.2j")


# -- suites -----------------------------------------------------------------

def _resolved(ctx, compute):
    """Run ``compute(ctx) -> (lhs, rhs, scale)`` and rerun it with extra digits
    when the summands dwarf the result (cancellation would eat the tolerance)."""
    lhs, rhs, scale = compute(ctx)
    ref = max(abs(lhs), abs(rhs))
    if ref and scale > ref:
        extra = int(mpmath.ceil(mpmath.log10(scale / ref))) + 5
        lhs, rhs, _ = compute(ctx.escalate(ctx.digits + extra))
        lhs, rhs = ctx.mp.mpc(lhs), ctx.mp.mpc(rhs)
    return lhs, rhs


def _rel_case(suite, label, lhs, rhs, tol_rel, scale=None):
    ref = max(abs(rhs), abs(lhs)) if scale is None else scale
    res = abs(lhs - rhs)
    tol = tol_rel * ref if ref else tol_rel
    return IdentityCase(suite, label, lhs, rhs, res, tol, bool(res <= tol))


def _triple_product(q_list, z_list, ctx):
    out = []
    for q in q_list:
        for z in z_list:
            def compute(c, z=z, q=q):
                s = theta(z, q, c)
                return s.value, triple_product(z, q, c).value, s.scale
            s, p = _resolved(ctx, compute)
            out.append(_rel_case("triple_product", f"q={q} z={z}", s, p, ctx.check_tol, abs(s)))
    return out


def _recurrence(q_list, z_list, ctx):
    out = []
    for q in q_list:
        qd = validate_q(q)
        W = ctx.work
        qq = qd.at(W)
        for z in z_list:
            zz = to_mpc(W, z)
            a0 = ramanujan_Aq(zz, qd, ctx)
            a1 = ramanujan_Aq(qq * zz, qd, ctx)
            a2 = ramanujan_Aq(qq * qq * zz, qd, ctx)
            t2 = qq * zz * a2.value
            res = a0.value - a1.value + t2
            big = max(abs(a0.value), abs(a1.value), abs(t2), a0.scale, a1.scale,
                      abs(qq * zz) * a2.scale)
            tol = ctx.check_tol * big
            out.append(IdentityCase("recurrence", f"q={q} z={z}", a0.value, a1.value - t2,
                                    abs(res), tol, bool(abs(res) <= tol)))
    return out


def _qbinomial(q_list, z_list, ctx):
    out = []
    for a in QBINOMIAL_A:
        for q in q_list:
            for z in z_list:
                W = ctx.work
                zz = to_mpc(W, z)
                aa = to_mpc(W, a)
                lhs = qbinomial_sum(aa, zz, q, ctx).value
                rhs = qpoch_infinite(aa * zz, q, ctx).value / qpoch_infinite(zz, q, ctx).value
                out.append(_rel_case("qbinomial", f"a={a} q={q} z={z}", lhs, rhs, ctx.check_tol))
    return out


def _euler(q_list, z_list, ctx):
    out = []
    for q in q_list:
        for z in z_list:
            def compute(c, z=z, q=q):
                lhs = euler_sum(z, q, c)
                return lhs.value, qpoch_infinite(z, q, c).value, lhs.scale
            lhs, rhs = _resolved(ctx, compute)
            out.append(_rel_case("euler", f"q={q} z={z}", lhs, rhs, ctx.check_tol))
    return out


REMAINDER_A = ("0.1", "0.3", "0.5", "0.7", "0.9")
REMAINDER_N = range(0, 41)


def _lemma1(q_list, _z, ctx):
    out = []
    for which, fn in (("R1", remainder_R1), ("R2", remainder_R2)):
        for a in REMAINDER_A:
            for q in q_list:
                for n in REMAINDER_N:
                    est = fn(a, n, q, ctx)
                    lhs = abs(est.exact) + est.tail_bound
                    out.append(IdentityCase("lemma1", f"{which} a={a} q={q} n={n}", est.exact,
                                            est.bound, lhs, est.bound, bool(lhs <= est.bound)))
    return out


def _theta_shift(q_list, z_list, ctx):
    out = []
    for q in q_list:
        qd = validate_q(q)
        for z in z_list:
            def compute(c, z=z, qd=qd):
                W = c.work
                qq = qd.at(W)
                zz = to_mpc(W, z)
                a = theta(zz, qd, c)
                b = theta(zz * qq, qd, c)
                h = abs(zz) * W.sqrt(qq)
                return a.value, zz * W.sqrt(qq) * b.value, max(a.scale, h * b.scale)
            lhs, rhs = _resolved(ctx, compute)
            out.append(_rel_case("theta_shift", f"q={q} z={z}", lhs, rhs, ctx.check_tol))
    return out


def _limit_q1(q_list, z_list, ctx):
    out = []
    for z in z_list:
        devs = scaled_Aq_limit_check(z, q_list, ctx)
        dec = all(b < a for a, b in zip(devs, devs[1:]))
        out.append(IdentityCase("limit_q1", f"z={z} decreasing over q={','.join(map(str, q_list))}",
                                devs[0], devs[-1], devs[-1], devs[0], dec))
        for q in q_list:
            val, cap = scaled_Aq_growth(z, q, ctx)
            out.append(IdentityCase("limit_q1", f"z={z} q={q} growth", val, cap, val, cap,
                                    bool(val <= cap)))
    return out


_RUNNERS = {
    "triple_product": _triple_product,
    "recurrence": _recurrence,
    "qbinomial": _qbinomial,
    "euler": _euler,
    "lemma1": _lemma1,
    "theta_shift": _theta_shift,
    "limit_q1": _limit_q1,
}


def run_suite(name: str, ctx: PrecisionContext | None = None,
              q_list: Sequence | None = None, z_list: Sequence | None = None) -> list:
    """Run one identity suite; ``None`` grids fall back to the defaults."""
    if name not in _RUNNERS:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    ctx = default_context() if ctx is None else ctx
    q_list = list(DEFAULT_Q[name] if q_list is None else q_list)
    for q in q_list:
        validate_q(q)
    z_list = default_z(name) if z_list is None else list(z_list)
    return _RUNNERS[name](q_list, z_list, ctx)
