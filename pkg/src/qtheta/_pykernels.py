"""Pure-Python summation kernels (fallback for the compiled ``_ckernels``).

Each routine follows qkern.c step by step: the same recurrences, the same
low-precision majorants and the same stopping rules, so both backends make
identical truncation decisions up to the last bit of rounding.
"""
from __future__ import annotations

from .errors import ConvergenceError
from .numerics import mp_at

LO_PREC = 64
_lo = mp_at(LO_PREC)


def _abs_lo(z):
    return _lo.hypot(z.real, z.imag)


def qpoch_product(ctx, a, q, K):
    """``prod_{k<K} (1 - a q**k)``."""
    a = ctx.mpc(a)
    q = ctx.mpf(q)
    acc = ctx.mpc(1)
    qk = ctx.mpf(1)
    for _ in range(K):
        acc *= 1 - a * qk
        qk *= q
    return acc


def hyper_sum(ctx, z, P, R, alphas, betas, q, eps, max_terms, nterms=0):
    """Sum ``t_0 = 1``, ``t_{k+1} = t_k z P R^k prod(1 - a q^k)/prod(1 - b q^k)``.

    Returns ``(value, tail_bound, terms_used, scale)`` where ``scale`` is the
    largest partial-sum modulus met on the way.
    """
    z = ctx.mpc(z)
    P = ctx.mpf(P)
    R = ctx.mpf(R)
    q = ctx.mpf(q)
    alphas = [ctx.mpc(a) for a in alphas]
    betas = [ctx.mpc(b) for b in betas]
    abs_a = [_abs_lo(a) for a in alphas]
    abs_b = [_abs_lo(b) for b in betas]

    t = ctx.mpc(1)
    S = ctx.mpc(1)
    zP = z * P
    lo_zp = _abs_lo(z) * P
    qk = ctx.mpf(1)
    Rk = ctx.mpf(1)
    sc = _lo.mpf(1)
    eps_lo = _lo.mpf(eps)
    strict = R >= 1
    thr = _lo.mpf(1) if strict else _lo.mpf(0.5)
    tail = _lo.inf
    k = 0
    while True:
        summed = k + 1
        lo_qk = _lo.mpf(qk)
        rho = lo_zp * _lo.mpf(Rk)
        for a in abs_a:
            rho *= 1 + a * lo_qk
        bad = False
        for b in abs_b:
            d = 1 - b * lo_qk
            if d <= 0:
                bad = True
                break
            rho /= d
        at = _abs_lo(t)

        if nterms == 0:
            if not at:
                tail = _lo.zero
                break
            if not bad and (rho < thr if strict else rho <= thr):
                lim = at * rho / (1 - rho)
                if lim <= eps_lo * sc:
                    tail = lim
                    break
        elif summed >= nterms:
            if not at:
                tail = _lo.zero
            elif not bad and rho < 1:
                tail = at * rho / (1 - rho)
            else:
                tail = _lo.inf
            break
        if summed >= max_terms:
            raise ConvergenceError(f"series not converged after {max_terms} terms")

        r = zP * Rk
        for a in alphas:
            r *= 1 - a * qk
        for b in betas:
            f = 1 - b * qk
            if not f:
                raise ZeroDivisionError("vanishing denominator factor in series")
            r /= f
        t *= r
        S += t
        s_abs = _abs_lo(S)
        if s_abs > sc:
            sc = s_abs
        k += 1
        qk *= q
        Rk *= R
    return S, ctx.mpf(tail), k + 1, ctx.mpf(sc)


def _gauss_tail(g_lo, a_lo, wmax_lo, j):
    rho = g_lo ** (2 * j + 3) * a_lo
    if rho > 0.5:
        return None
    return g_lo ** ((j + 1) ** 2) * a_lo ** (j + 1) * wmax_lo / (1 - rho)


def gauss_sum(ctx, y, g, w0, alphas, betas, q, M, wmax, eps, max_terms):
    """Re-centred sum ``sum_{j >= -M} w_{M+j} g^{j^2} y^j``.

    The weights obey ``w_{k+1} = w_k prod(1 - a q^k)/prod(1 - b q^k)`` with
    ``w_M = w0``; ``wmax`` bounds every ``|w_k|`` and drives the tail majorant.
    Returns ``(value, tail_bound, terms_used, scale)``.
    """
    y = ctx.mpc(y)
    g = ctx.mpf(g)
    w0 = ctx.mpc(w0)
    q = ctx.mpf(q)
    alphas = [ctx.mpf(a) for a in alphas]
    betas = [ctx.mpf(b) for b in betas]

    S = ctx.mpc(w0)
    sc = _abs_lo(w0)
    g_lo = _lo.mpf(g)
    ay = _abs_lo(y)
    ayinv = 1 / ay
    wm_lo = _lo.mpf(wmax)
    eps_lo = _lo.mpf(eps)
    g2 = g * g
    tail_dn = _lo.zero
    tail_up = _lo.zero
    count = 1

    if M > 0:
        yinv = 1 / y
        T = ctx.mpc(w0)
        gp = ctx.mpf(g)
        qm = q ** M
        j = 1
        while True:
            qm /= q
            r = yinv * gp
            for b in betas:
                r *= 1 - b * qm
            for a in alphas:
                f = 1 - a * qm
                if not f:
                    raise ZeroDivisionError("vanishing weight factor")
                r /= f
            T *= r
            S += T
            count += 1
            s_abs = _abs_lo(S)
            if s_abs > sc:
                sc = s_abs
            if j == M:
                break
            tl = _gauss_tail(g_lo, ayinv, wm_lo, j)
            if tl is not None and tl <= eps_lo * sc:
                tail_dn = tl
                break
            if count >= max_terms:
                raise ConvergenceError(f"gauss sum not converged after {max_terms} terms")
            gp *= g2
            j += 1

    T = ctx.mpc(w0)
    gp = ctx.mpf(g)
    qm = q ** M
    j = 1
    while True:
        r = y * gp
        for a in alphas:
            r *= 1 - a * qm
        for b in betas:
            f = 1 - b * qm
            if not f:
                raise ZeroDivisionError("vanishing weight factor")
            r /= f
        T *= r
        S += T
        count += 1
        s_abs = _abs_lo(S)
        if s_abs > sc:
            sc = s_abs
        tl = _gauss_tail(g_lo, ay, wm_lo, j)
        if tl is not None and tl <= eps_lo * sc:
            tail_up = tl
            break
        if count >= max_terms:
            raise ConvergenceError(f"gauss sum not converged after {max_terms} terms")
        gp *= g2
        qm *= q
        j += 1

    return S, ctx.mpf(tail_dn + tail_up), count, ctx.mpf(sc)


def frac_scan(T, B, P, n_max):
    """Candidates ``n <= n_max`` whose fixed-point ``n t - beta`` lies within
    ``3/n`` of an integer, with a margin covering the fixed-point rounding of
    ``T ~ t 2^P`` and ``B ~ beta 2^P``."""
    x = -B
    half = 1 << (P - 1) if P > 0 else 0
    lim = 3 << P
    out = []
    for n in range(1, n_max + 1):
        x += T
        r = (x + half) >> P
        d = abs(x - (r << P))
        if d * n <= lim + n * (n + 1):
            out.append(n)
    return out
