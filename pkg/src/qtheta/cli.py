"""Command-line front end.

    qtheta eval aq --q 0.5 --z -1
    qtheta identities --suite triple_product --q 0.1,0.5,0.9 --z-grid disk:8
    qtheta solve --t sqrt:2 --beta 0 --n-max 100
    qtheta verify --theorem t2-rational --q 0.5 --t 3/2 --lambda 1/2 --u 1 --n 5..101:4

Exit codes: 0 all pass, 1 verification failures, 2 usage or domain errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import mpmath
from mpmath import libmp

from . import __version__
from .asymptotics import ScanConfig, _parse_n_range, summarize, verify_suite
from .diophantine import RationalT, parse_t, rational_solutions_in, solve_irrational, solve_rational
from .errors import ConvergenceError, DomainError
from .identities import SUITES, parse_z_grid, run_suite
from .numerics import DEFAULT_DIGITS, MIN_DIGITS, make_context, validate_q
from .qseries import qpoch_finite, qpoch_infinite
from .special import HypSpec, confluent_phi, entire_f, ramanujan_Aq, theta, triple_product

FUNCTIONS = ("aq", "theta", "triple_product", "f", "phi", "qpoch")
THEOREMS = ("t2-rational", "t2-irrational", "t3-rational", "t3-irrational")


class UsageError(Exception):
    pass


# -- serialization ----------------------------------------------------------

def _sci(raw, digits):
    return libmp.to_str(raw, digits, strip_zeros=False, min_fixed=1, max_fixed=0,
                        show_zero_exponent=True)


def num(x, digits):
    """A JSON-safe rendering; reals become scientific decimal strings."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        x = mpmath.mpf(x)
    if hasattr(x, "_mpf_"):
        return _sci(x._mpf_, digits)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def cnum(prefix, x, digits):
    """``{prefix_re, prefix_im}`` for a real or complex value."""
    if x is None:
        return {f"{prefix}_re": None, f"{prefix}_im": None}
    if isinstance(x, complex):
        x = mpmath.mpc(x)
    if hasattr(x, "_mpc_"):
        # format the raw parts: wrapping them in a global mpf would round to 53 bits
        re, im = x._mpc_
        return {f"{prefix}_re": _sci(re, digits), f"{prefix}_im": _sci(im, digits)}
    return {f"{prefix}_re": num(x, digits), f"{prefix}_im": _sci(libmp.fzero, digits)}


def render(payload, fmt):
    if fmt == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    rows = payload["rows"]
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        return buf.getvalue()
    # text: short numerals, one line per row, summary last
    lines = []
    for row in rows:
        lines.append("  ".join(f"{k}={_short(v)}" for k, v in row.items()))
    s = payload["summary"]
    lines.append(f"total={s['total']} passed={s['passed']} flagged={s['flagged']}")
    return "\n".join(lines) + "\n"


def _short(v):
    if isinstance(v, str):
        try:
            return mpmath.nstr(mpmath.mpf(v), 12) if "e" in v else v
        except (ValueError, TypeError):
            return v
    return v


# -- argument helpers -------------------------------------------------------

def _complex_text(s: str) -> str:
    s = s.strip().replace(" ", "").replace("i", "j")
    try:
        complex(s)
    except ValueError as exc:
        raise UsageError(f"not a complex number: {s!r}") from exc
    return s


def _split(text):
    return [p for p in (text or "").split(",") if p.strip()]


def _params(text, q):
    """Comma list of parameters; the token ``q`` stands for the base itself."""
    return tuple(q if p.strip() == "q" else p.strip() for p in _split(text))


def _fraction(text, what):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid {what}: {text!r}") from exc


def _z_values(args):
    if args.z_grid:
        out = []
        for g in args.z_grid:
            out.extend(parse_z_grid(g))
        return out
    if args.z is None:
        return None
    return [_complex_text(args.z)]


# -- commands ---------------------------------------------------------------

def cmd_eval(args, ctx):
    d = ctx.digits
    zs = _z_values(args)
    fn = args.function
    if fn != "qpoch" and not zs:
        raise UsageError(f"eval {fn} needs --z or --z-grid")
    if args.q is None:
        raise UsageError("eval needs --q")
    q = args.q
    rows = []

    def row(z, cv):
        r = {"function": fn, "q": q, "z": z}
        r.update(cnum("value", cv.value, d))
        r["tail_bound"] = num(cv.tail_bound, d)
        r["terms_used"] = cv.terms_used
        return r

    if fn == "qpoch":
        if args.a is None:
            raise UsageError("eval qpoch needs --a")
        a = _complex_text(args.a)
        if args.n is None:
            cv = qpoch_infinite(a, q, ctx)
            r = {"function": fn, "q": q, "a": a, "n": "inf"}
            r.update(cnum("value", cv.value, d))
            r["tail_bound"] = num(cv.tail_bound, d)
            r["terms_used"] = cv.terms_used
        else:
            n = int(args.n)
            v = qpoch_finite(a, q, n, ctx)
            r = {"function": fn, "q": q, "a": a, "n": n}
            r.update(cnum("value", v, d))
            r["tail_bound"] = num(mpmath.mpf(0), d)
            r["terms_used"] = abs(n)
        rows.append(r)
        return rows, None
    spec = None
    if fn == "f":
        spec = HypSpec.build(_params(args.a, q), _params(args.b, q), args.l or "1", q, ctx)
    for z in zs:
        if fn == "aq":
            cv = ramanujan_Aq(z, q, ctx)
        elif fn == "theta":
            cv = theta(z, q, ctx)
        elif fn == "triple_product":
            cv = triple_product(z, q, ctx)
        elif fn == "f":
            cv = entire_f(z, spec, ctx=ctx)
        else:
            cv = confluent_phi(_params(args.a, q), _params(args.b, q), z, q, ctx)
        rows.append(row(str(z), cv))
    return rows, None


def cmd_identities(args, ctx):
    d = ctx.digits
    q_list = _split(args.q) if args.q else None
    cases = run_suite(args.suite, ctx, q_list, _z_values(args))
    rows = []
    for c in cases:
        r = {"suite": c.suite, "case": c.label}
        r.update(cnum("lhs", c.lhs, d))
        r.update(cnum("rhs", c.rhs, d))
        r["residual"] = num(c.residual, d)
        r["tol"] = num(c.tol, d)
        r["passed"] = c.passed
        rows.append(r)
    passed = sum(c.passed for c in cases)
    return rows, {"total": len(cases), "passed": passed, "flagged": 0}


def cmd_solve(args, ctx):
    d = ctx.digits
    t = parse_t(args.t)
    rows = []
    if isinstance(t, RationalT):
        if args.lambda_ is None:
            raise UsageError("rational t needs --lambda")
        lam = _fraction(args.lambda_, "lambda")
        if args.n:
            sols = rational_solutions_in(t, lam, _parse_n_range(args.n))
        else:
            sols = solve_rational(t, lam, args.count if args.count is not None else 10)
        for s in sols:
            rows.append({"n": s.n, "m": s.m, "lambda": str(s.lam), "chi_m": s.chi_m,
                         "m_half": s.m_half})
    else:
        beta = _fraction(args.beta or "0", "beta")
        if args.n_max is None:
            raise UsageError("irrational t needs --n-max")
        for s in solve_irrational(t, beta, args.n_max, d, args.require_floor):
            rows.append({"n": s.n, "m": s.m, "beta": str(s.beta),
                         "gamma_n": num(s.gamma_n, d), "n_gamma_n": num(s.gamma_n * s.n, d),
                         "wrapped": s.wrapped, "in_range": s.in_range})
    return rows, None


def cmd_verify(args, ctx):
    d = ctx.digits
    t = parse_t(args.t)
    kind_t, kind_r = args.theorem.split("-")
    if (kind_r == "rational") != isinstance(t, RationalT):
        raise UsageError(f"--theorem {args.theorem} does not match t = {args.t}")
    general = kind_t == "t3"
    if not general and (args.a or args.b or args.l):
        raise UsageError("--a/--b/--l only apply to the t3 scans")
    if args.q is None or args.u is None:
        raise UsageError("verify needs --q and --u")
    q = args.q
    if isinstance(t, RationalT):
        shift = None if args.lambda_ is None else _fraction(args.lambda_, "lambda")
    else:
        shift = _fraction(args.beta or "0", "beta")
    u_list = tuple(_complex_text(u) for u in _split(args.u))
    config = ScanConfig(
        q=q, t=t, u_list=u_list, shift=shift, n_range=args.n, n_max=args.n_max,
        a_list=_params(args.a, q) if general else None,
        b_list=_params(args.b, q) if general else None,
        l=(args.l or "1") if general else None,
        require_floor=args.require_floor,
    )
    reports = verify_suite(config, ctx)
    rows = []
    for r in reports:
        row = {"kind": r.kind, "n": r.n, "m": r.m, "u": None if r.u is None else str(r.u),
               "shift": None if r.shift is None else str(r.shift),
               "gamma_n": num(r.gamma_n, d), "nu_n": r.nu_n}
        row.update(cnum("residual", r.residual, d))
        row["abs_residual"] = num(r.abs_residual, d)
        row["bound"] = num(r.bound, d)
        row["ratio"] = num(r.ratio, d)
        row["bound_satisfied"] = r.bound_satisfied
        row["flagged"] = r.flagged
        row["flags"] = ";".join(r.flags)
        row["notes"] = ";".join(r.notes)
        row["crosscheck_rel"] = num(r.crosscheck_rel, d)
        row.update(cnum("main_term", None if r.main_term is None else r.main_term.value, d))
        row.update(cnum("direct", None if r.direct_value is None else r.direct_value.value, d))
        row["error"] = r.error
        rows.append(row)
    s = summarize(reports)
    return rows, {"total": s["total"], "passed": s["passed"], "flagged": s["flagged"]}


COMMANDS = {"eval": cmd_eval, "identities": cmd_identities, "solve": cmd_solve,
            "verify": cmd_verify}


# -- parser -----------------------------------------------------------------

def _default_digits():
    env = os.environ.get("QTHETA_DIGITS")
    try:
        return int(env) if env else DEFAULT_DIGITS
    except ValueError:
        return DEFAULT_DIGITS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=_default_digits(),
                        help=f"working decimal digits (>= {MIN_DIGITS}; env QTHETA_DIGITS)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="qtheta", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qtheta {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate a special function")
    e.add_argument("function", choices=FUNCTIONS)
    e.add_argument("--q")
    e.add_argument("--z", help="complex argument, e.g. 2+1j (use --z=-1+1j for leading minus)")
    e.add_argument("--z-grid", action="append", help="disk:N[:R] | circle:R:N | list:z1,z2,...")
    e.add_argument("--a", help="parameter list (f, phi) or a (qpoch); 'q' means the base")
    e.add_argument("--b", help="lower parameter list (f, phi)")
    e.add_argument("--l", help="quadratic exponent of f (default 1)")
    e.add_argument("--n", type=int, help="qpoch length; omit for the infinite product")

    i = sub.add_parser("identities", parents=[common], help="run an identity suite")
    i.add_argument("--suite", choices=SUITES, required=True)
    i.add_argument("--q", help="comma list of bases (default depends on suite)")
    i.add_argument("--z-grid", action="append", help="disk:N[:R] | circle:R:N | list:z1,z2,...")
    i.set_defaults(z=None)

    s = sub.add_parser("solve", parents=[common], help="list solutions of n t = m + shift")
    s.add_argument("--t", required=True, help="p/d, sqrt:K, phi or a decimal")
    s.add_argument("--lambda", dest="lambda_", help="drift for rational t, e.g. 1/2")
    s.add_argument("--beta", help="target fractional part for irrational t (default 0)")
    s.add_argument("--count", type=int)
    s.add_argument("--n-max", type=int)
    s.add_argument("--n", help="a..b:s, restrict n (rational t)")
    s.add_argument("--require-floor", action="store_true",
                   help="drop irrational solutions whose m is not floor(n t)")

    v = sub.add_parser("verify", parents=[common], help="residual scan against the error bounds")
    v.add_argument("--theorem", choices=THEOREMS, required=True)
    v.add_argument("--q")
    v.add_argument("--t", required=True)
    v.add_argument("--lambda", dest="lambda_")
    v.add_argument("--beta")
    v.add_argument("--u", help="comma list of nonzero complex u")
    v.add_argument("--n", help="a..b:s")
    v.add_argument("--n-max", type=int)
    v.add_argument("--a")
    v.add_argument("--b")
    v.add_argument("--l")
    v.add_argument("--require-floor", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.digits < MIN_DIGITS:
            raise UsageError(f"--digits must be at least {MIN_DIGITS}")
        ctx = make_context(args.digits)
        if getattr(args, "q", None) is not None and args.command != "identities":
            validate_q(args.q)
        rows, summary = COMMANDS[args.command](args, ctx)
    except (UsageError, DomainError, ValueError, ZeroDivisionError, ConvergenceError) as exc:
        msg = " ".join(str(exc).split())
        print(f"qtheta: error: {msg}", file=sys.stderr)
        return 2
    if summary is None:
        summary = {"total": len(rows), "passed": len(rows), "flagged": 0}
    if not rows:
        print("qtheta: warning: empty grid, no cases run", file=sys.stderr)
    payload = {"meta": {"command": args.command, "digits": ctx.digits, "version": __version__},
               "rows": rows, "summary": summary}
    text = render(payload, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = summary["total"] - summary["passed"] - summary["flagged"]
    return 1 if failed > 0 else 0


if __name__ == "__main__":
    sys.exit(main())
