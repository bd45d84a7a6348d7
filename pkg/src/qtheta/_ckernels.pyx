# cython: language_level=3
"""Compiled twins of the routines in ``qtheta._pykernels``.

Values cross the boundary as mpmath raw tuples; mantissas travel through GMP
as hexadecimal strings, which is exact and cheap next to the summation work.
"""
from libc.stdlib cimport malloc, free

from mpmath.libmp import from_man_exp, fzero, finf

from qtheta.errors import ConvergenceError

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct *mpz_ptr
    ctypedef const __mpz_struct *mpz_srcptr
    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    int mpz_set_str(mpz_ptr, const char *, int)
    char *mpz_get_str(char *, int, mpz_srcptr)
    size_t mpz_sizeinbase(mpz_srcptr, int)

cdef extern from "mpfr.h":
    ctypedef struct __mpfr_struct:
        pass
    ctypedef __mpfr_struct mpfr_t[1]
    ctypedef __mpfr_struct *mpfr_ptr
    ctypedef const __mpfr_struct *mpfr_srcptr
    ctypedef long mpfr_prec_t
    ctypedef long mpfr_exp_t
    ctypedef enum mpfr_rnd_t:
        MPFR_RNDN
    void mpfr_init2(mpfr_ptr, mpfr_prec_t)
    void mpfr_clear(mpfr_ptr)
    void mpfr_set_zero(mpfr_ptr, int)
    int mpfr_set_z_2exp(mpfr_ptr, mpz_srcptr, mpfr_exp_t, mpfr_rnd_t)
    mpfr_exp_t mpfr_get_z_2exp(mpz_ptr, mpfr_srcptr)
    int mpfr_zero_p(mpfr_srcptr)
    int mpfr_inf_p(mpfr_srcptr)
    int mpfr_nan_p(mpfr_srcptr)

cdef extern from "qkern.h":
    ctypedef struct qk_cplx:
        mpfr_t re
        mpfr_t im
    int QK_OK, QK_MAXTERMS, QK_ZERODIV
    void qk_cinit(qk_cplx *z, mpfr_prec_t prec)
    void qk_cclear(qk_cplx *z)
    int qk_qpoch_product(qk_cplx *out, const qk_cplx *a, mpfr_srcptr q,
                         long K, mpfr_prec_t prec)
    int qk_hyper_sum(qk_cplx *out, mpfr_ptr tail, mpfr_ptr scale, long *terms,
                     const qk_cplx *z, mpfr_srcptr P, mpfr_srcptr R,
                     const qk_cplx *alpha, int nalpha,
                     const qk_cplx *beta, int nbeta,
                     mpfr_srcptr q, mpfr_srcptr eps, long max_terms,
                     long nterms, mpfr_prec_t prec)
    int qk_gauss_sum(qk_cplx *out, mpfr_ptr tail, mpfr_ptr scale, long *terms,
                     const qk_cplx *y, mpfr_srcptr g, const qk_cplx *w0,
                     mpfr_srcptr alpha, int nalpha, mpfr_srcptr beta, int nbeta,
                     mpfr_srcptr q, long M, mpfr_srcptr wmax, mpfr_srcptr eps,
                     long max_terms, mpfr_prec_t prec)
    long qk_frac_scan(long *out, long cap, mpz_srcptr T, mpz_srcptr B,
                      unsigned long P, long n_max)


cdef int set_mpz(mpz_ptr z, object value) except -1:
    cdef bytes s = format(int(value), "x").encode()
    if mpz_set_str(z, s, 16) != 0:
        raise ValueError("mpz conversion failed")
    return 0


cdef object get_mpz(mpz_srcptr z):
    cdef size_t n = mpz_sizeinbase(z, 16) + 2
    cdef char *buf = <char *> malloc(n)
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_get_str(buf, 16, z)
        return int(buf.decode(), 16)
    finally:
        free(buf)


cdef int set_mpfr(mpfr_ptr x, tuple raw) except -1:
    cdef mpz_t z
    sign, man, exp, bc = raw
    if not man:
        if bc == 0:
            mpfr_set_zero(x, 1)
            return 0
        raise ValueError("non-finite value passed to kernel")
    mpz_init(z)
    try:
        set_mpz(z, -man if sign else man)
        mpfr_set_z_2exp(x, z, exp, MPFR_RNDN)
    finally:
        mpz_clear(z)
    return 0


cdef tuple get_mpfr(mpfr_srcptr x, long prec):
    cdef mpz_t z
    cdef mpfr_exp_t e
    if mpfr_zero_p(x):
        return fzero
    if mpfr_inf_p(x):
        return finf
    if mpfr_nan_p(x):
        raise ArithmeticError("NaN produced in kernel")
    mpz_init(z)
    try:
        e = mpfr_get_z_2exp(z, x)
        man = get_mpz(z)
    finally:
        mpz_clear(z)
    return from_man_exp(man, e, prec, "n")


cdef class _Real:
    cdef mpfr_t v

    def __cinit__(self, long prec):
        mpfr_init2(self.v, prec)

    def __dealloc__(self):
        mpfr_clear(self.v)


cdef class _Cplx:
    cdef qk_cplx v

    def __cinit__(self, long prec):
        qk_cinit(&self.v, prec)

    def __dealloc__(self):
        qk_cclear(&self.v)


cdef _Real real_in(ctx, x, long prec):
    cdef _Real r = _Real(prec)
    set_mpfr(r.v, ctx.mpf(x)._mpf_)
    return r


cdef _Cplx cplx_in(ctx, z, long prec):
    cdef _Cplx c = _Cplx(prec)
    re, im = ctx.mpc(z)._mpc_
    set_mpfr(c.v.re, re)
    set_mpfr(c.v.im, im)
    return c


cdef object cplx_out(ctx, qk_cplx *z, long prec):
    return ctx.make_mpc((get_mpfr(z.re, prec), get_mpfr(z.im, prec)))


cdef object real_out(ctx, mpfr_srcptr x, long prec):
    return ctx.make_mpf(get_mpfr(x, prec))


cdef check_status(int status, str what):
    if status == QK_MAXTERMS:
        raise ConvergenceError(f"{what} not converged within the term budget")
    if status == QK_ZERODIV:
        raise ZeroDivisionError(f"vanishing denominator factor in {what}")


def qpoch_product(ctx, a, q, long K):
    """``prod_{k<K} (1 - a q**k)``."""
    cdef long prec = ctx.prec
    cdef _Cplx ca = cplx_in(ctx, a, prec)
    cdef _Real cq = real_in(ctx, q, prec)
    cdef _Cplx out = _Cplx(prec)
    qk_qpoch_product(&out.v, &ca.v, cq.v, K, prec)
    return cplx_out(ctx, &out.v, prec)


def hyper_sum(ctx, z, P, R, alphas, betas, q, eps, long max_terms, long nterms=0):
    """See ``qtheta._pykernels.hyper_sum``."""
    cdef long prec = ctx.prec
    cdef int na = len(alphas), nb = len(betas), i, status
    cdef long terms = 0
    cdef _Cplx cz = cplx_in(ctx, z, prec)
    cdef _Real cP = real_in(ctx, P, prec)
    cdef _Real cR = real_in(ctx, R, prec)
    cdef _Real cq = real_in(ctx, q, prec)
    cdef _Real ceps = real_in(ctx, eps, prec)
    cdef _Cplx out = _Cplx(prec)
    cdef _Real tail = _Real(prec)
    cdef _Real scale = _Real(prec)
    cdef qk_cplx *ca = <qk_cplx *> malloc(sizeof(qk_cplx) * (na if na else 1))
    cdef qk_cplx *cb = <qk_cplx *> malloc(sizeof(qk_cplx) * (nb if nb else 1))
    cdef int ia = 0, ib = 0
    if ca == NULL or cb == NULL:
        free(ca)
        free(cb)
        raise MemoryError()
    try:
        for i in range(na):
            qk_cinit(&ca[i], prec)
            ia += 1
            re, im = ctx.mpc(alphas[i])._mpc_
            set_mpfr(ca[i].re, re)
            set_mpfr(ca[i].im, im)
        for i in range(nb):
            qk_cinit(&cb[i], prec)
            ib += 1
            re, im = ctx.mpc(betas[i])._mpc_
            set_mpfr(cb[i].re, re)
            set_mpfr(cb[i].im, im)
        status = qk_hyper_sum(&out.v, tail.v, scale.v, &terms, &cz.v, cP.v,
                              cR.v, ca, na, cb, nb, cq.v, ceps.v, max_terms,
                              nterms, prec)
        check_status(status, "series")
        return (cplx_out(ctx, &out.v, prec), real_out(ctx, tail.v, prec),
                terms, real_out(ctx, scale.v, prec))
    finally:
        for i in range(ia):
            qk_cclear(&ca[i])
        for i in range(ib):
            qk_cclear(&cb[i])
        free(ca)
        free(cb)


def gauss_sum(ctx, y, g, w0, alphas, betas, q, long M, wmax, eps, long max_terms):
    """See ``qtheta._pykernels.gauss_sum``."""
    cdef long prec = ctx.prec
    cdef int na = len(alphas), nb = len(betas), i, status
    cdef long terms = 0
    cdef _Cplx cy = cplx_in(ctx, y, prec)
    cdef _Real cg = real_in(ctx, g, prec)
    cdef _Cplx cw0 = cplx_in(ctx, w0, prec)
    cdef _Real cq = real_in(ctx, q, prec)
    cdef _Real cwmax = real_in(ctx, wmax, prec)
    cdef _Real ceps = real_in(ctx, eps, prec)
    cdef _Cplx out = _Cplx(prec)
    cdef _Real tail = _Real(prec)
    cdef _Real scale = _Real(prec)
    cdef __mpfr_struct *ra = <__mpfr_struct *> malloc(sizeof(__mpfr_struct) * (na if na else 1))
    cdef __mpfr_struct *rb = <__mpfr_struct *> malloc(sizeof(__mpfr_struct) * (nb if nb else 1))
    cdef int ia = 0, ib = 0
    if ra == NULL or rb == NULL:
        free(ra)
        free(rb)
        raise MemoryError()
    try:
        for i in range(na):
            mpfr_init2(&ra[i], prec)
            ia += 1
            set_mpfr(&ra[i], ctx.mpf(alphas[i])._mpf_)
        for i in range(nb):
            mpfr_init2(&rb[i], prec)
            ib += 1
            set_mpfr(&rb[i], ctx.mpf(betas[i])._mpf_)
        status = qk_gauss_sum(&out.v, tail.v, scale.v, &terms, &cy.v, cg.v,
                              &cw0.v, ra, na, rb, nb, cq.v, M, cwmax.v,
                              ceps.v, max_terms, prec)
        check_status(status, "gauss sum")
        return (cplx_out(ctx, &out.v, prec), real_out(ctx, tail.v, prec),
                terms, real_out(ctx, scale.v, prec))
    finally:
        for i in range(ia):
            mpfr_clear(&ra[i])
        for i in range(ib):
            mpfr_clear(&rb[i])
        free(ra)
        free(rb)


def frac_scan(T, B, unsigned long P, long n_max):
    """See ``qtheta._pykernels.frac_scan``."""
    cdef mpz_t zT, zB
    cdef long cap = 4096, found
    cdef long *buf
    mpz_init(zT)
    mpz_init(zB)
    try:
        set_mpz(zT, T)
        set_mpz(zB, B)
        while True:
            buf = <long *> malloc(sizeof(long) * cap)
            if buf == NULL:
                raise MemoryError()
            try:
                found = qk_frac_scan(buf, cap, zT, zB, P, n_max)
                if found <= cap:
                    return [buf[i] for i in range(found)]
            finally:
                free(buf)
            cap = found
    finally:
        mpz_clear(zT)
        mpz_clear(zB)
