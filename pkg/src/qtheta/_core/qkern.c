/*
 * MPFR kernels for q-series summation.  Every routine mirrors the pure-Python
 * twin in qtheta/_pykernels.py step for step, so truncation decisions agree.
 */
#include <stdlib.h>
#include "qkern.h"

#define RND MPFR_RNDN
#define LO_PREC 64

void qk_cinit(qk_cplx *z, mpfr_prec_t prec)
{
    mpfr_init2(z->re, prec);
    mpfr_init2(z->im, prec);
    mpfr_set_zero(z->re, 1);
    mpfr_set_zero(z->im, 1);
}

void qk_cclear(qk_cplx *z)
{
    mpfr_clear(z->re);
    mpfr_clear(z->im);
}

/* scratch registers shared by the complex helpers */
typedef struct {
    mpfr_t a, b, c, d;
} scratch;

static void scratch_init(scratch *s, mpfr_prec_t prec)
{
    mpfr_inits2(prec, s->a, s->b, s->c, s->d, (mpfr_ptr) 0);
}

static void scratch_clear(scratch *s)
{
    mpfr_clears(s->a, s->b, s->c, s->d, (mpfr_ptr) 0);
}

static void cset(qk_cplx *r, const qk_cplx *x)
{
    mpfr_set(r->re, x->re, RND);
    mpfr_set(r->im, x->im, RND);
}

/* r = x * y; r may alias x or y */
static void cmul(qk_cplx *r, const qk_cplx *x, const qk_cplx *y, scratch *s)
{
    mpfr_mul(s->a, x->re, y->re, RND);
    mpfr_mul(s->b, x->im, y->im, RND);
    mpfr_mul(s->c, x->re, y->im, RND);
    mpfr_mul(s->d, x->im, y->re, RND);
    mpfr_sub(r->re, s->a, s->b, RND);
    mpfr_add(r->im, s->c, s->d, RND);
}

/* r = x * v for real v */
static void cmul_real(qk_cplx *r, const qk_cplx *x, mpfr_srcptr v)
{
    mpfr_mul(r->re, x->re, v, RND);
    mpfr_mul(r->im, x->im, v, RND);
}

/* r = x / y; returns nonzero when y == 0 */
static int cdiv(qk_cplx *r, const qk_cplx *x, const qk_cplx *y, scratch *s)
{
    if (mpfr_zero_p(y->re) && mpfr_zero_p(y->im))
        return 1;
    mpfr_sqr(s->a, y->re, RND);
    mpfr_fma(s->a, y->im, y->im, s->a, RND);        /* |y|^2 */
    mpfr_mul(s->b, x->re, y->re, RND);
    mpfr_fma(s->b, x->im, y->im, s->b, RND);        /* re(x conj y) */
    mpfr_mul(s->c, x->im, y->re, RND);
    mpfr_mul(s->d, x->re, y->im, RND);
    mpfr_sub(s->c, s->c, s->d, RND);                /* im(x conj y) */
    mpfr_div(r->re, s->b, s->a, RND);
    mpfr_div(r->im, s->c, s->a, RND);
    return 0;
}

/* r = 1 - x * v for real v */
static void one_minus(qk_cplx *r, const qk_cplx *x, mpfr_srcptr v)
{
    mpfr_mul(r->re, x->re, v, RND);
    mpfr_mul(r->im, x->im, v, RND);
    mpfr_ui_sub(r->re, 1, r->re, RND);
    mpfr_neg(r->im, r->im, RND);
}

static void cabs_lo(mpfr_ptr r, const qk_cplx *x)
{
    mpfr_hypot(r, x->re, x->im, RND);
}

int qk_qpoch_product(qk_cplx *out, const qk_cplx *a, mpfr_srcptr q, long K,
                     mpfr_prec_t prec)
{
    qk_cplx acc, f;
    mpfr_t qk;
    scratch s;
    long k;

    qk_cinit(&acc, prec);
    qk_cinit(&f, prec);
    mpfr_init2(qk, prec);
    scratch_init(&s, prec);

    mpfr_set_ui(acc.re, 1, RND);
    mpfr_set_ui(qk, 1, RND);
    for (k = 0; k < K; k++) {
        one_minus(&f, a, qk);
        cmul(&acc, &acc, &f, &s);
        mpfr_mul(qk, qk, q, RND);
    }
    cset(out, &acc);

    scratch_clear(&s);
    mpfr_clear(qk);
    qk_cclear(&f);
    qk_cclear(&acc);
    return QK_OK;
}

int qk_hyper_sum(qk_cplx *out, mpfr_ptr tail, mpfr_ptr scale, long *terms,
                 const qk_cplx *z, mpfr_srcptr P, mpfr_srcptr R,
                 const qk_cplx *alpha, int nalpha,
                 const qk_cplx *beta, int nbeta,
                 mpfr_srcptr q, mpfr_srcptr eps, long max_terms, long nterms,
                 mpfr_prec_t prec)
{
    qk_cplx t, S, zP, r, f;
    mpfr_t qk, Rk;
    mpfr_t lo_zp, lo_qk, lo_Rk, rho, at, thr, lim, tmp, eps_lo, sc;
    mpfr_t *abs_a = NULL, *abs_b = NULL;
    scratch s;
    long k = 0, summed;
    int i, bad, status = QK_OK, strict;

    qk_cinit(&t, prec);
    qk_cinit(&S, prec);
    qk_cinit(&zP, prec);
    qk_cinit(&r, prec);
    qk_cinit(&f, prec);
    mpfr_inits2(prec, qk, Rk, (mpfr_ptr) 0);
    mpfr_inits2(LO_PREC, lo_zp, lo_qk, lo_Rk, rho, at, thr, lim, tmp, eps_lo,
                sc, (mpfr_ptr) 0);
    scratch_init(&s, prec);
    abs_a = malloc(sizeof(mpfr_t) * (nalpha > 0 ? nalpha : 1));
    abs_b = malloc(sizeof(mpfr_t) * (nbeta > 0 ? nbeta : 1));
    for (i = 0; i < nalpha; i++) {
        mpfr_init2(abs_a[i], LO_PREC);
        cabs_lo(abs_a[i], &alpha[i]);
    }
    for (i = 0; i < nbeta; i++) {
        mpfr_init2(abs_b[i], LO_PREC);
        cabs_lo(abs_b[i], &beta[i]);
    }

    mpfr_set_ui(t.re, 1, RND);
    mpfr_set_ui(S.re, 1, RND);
    cmul_real(&zP, z, P);
    cabs_lo(lo_zp, z);
    mpfr_mul(lo_zp, lo_zp, P, RND);
    mpfr_set_ui(qk, 1, RND);
    mpfr_set_ui(Rk, 1, RND);
    mpfr_set_ui(sc, 1, RND);
    mpfr_set(eps_lo, eps, RND);
    strict = mpfr_cmp_ui(R, 1) >= 0;
    if (strict)
        mpfr_set_ui(thr, 1, RND);
    else
        mpfr_set_d(thr, 0.5, RND);
    mpfr_set_inf(tail, 1);

    for (;;) {
        summed = k + 1;
        mpfr_set(lo_qk, qk, RND);
        mpfr_set(lo_Rk, Rk, RND);
        mpfr_mul(rho, lo_zp, lo_Rk, RND);
        for (i = 0; i < nalpha; i++) {
            mpfr_mul(tmp, abs_a[i], lo_qk, RND);
            mpfr_add_ui(tmp, tmp, 1, RND);
            mpfr_mul(rho, rho, tmp, RND);
        }
        bad = 0;
        for (i = 0; i < nbeta; i++) {
            mpfr_mul(tmp, abs_b[i], lo_qk, RND);
            mpfr_ui_sub(tmp, 1, tmp, RND);
            if (mpfr_sgn(tmp) <= 0) {
                bad = 1;
                break;
            }
            mpfr_div(rho, rho, tmp, RND);
        }
        cabs_lo(at, &t);

        if (nterms == 0) {
            if (mpfr_zero_p(at)) {
                mpfr_set_zero(tail, 1);
                break;
            }
            if (!bad && (strict ? mpfr_cmp(rho, thr) < 0
                                : mpfr_cmp(rho, thr) <= 0)) {
                mpfr_ui_sub(tmp, 1, rho, RND);
                mpfr_mul(lim, at, rho, RND);
                mpfr_div(lim, lim, tmp, RND);
                mpfr_mul(tmp, eps_lo, sc, RND);
                if (mpfr_cmp(lim, tmp) <= 0) {
                    mpfr_set(tail, lim, RND);
                    break;
                }
            }
        } else if (summed >= nterms) {
            if (mpfr_zero_p(at)) {
                mpfr_set_zero(tail, 1);
            } else if (!bad && mpfr_cmp_ui(rho, 1) < 0) {
                mpfr_ui_sub(tmp, 1, rho, RND);
                mpfr_mul(lim, at, rho, RND);
                mpfr_div(tail, lim, tmp, RND);
            } else {
                mpfr_set_inf(tail, 1);
            }
            break;
        }
        if (summed >= max_terms) {
            status = QK_MAXTERMS;
            break;
        }

        cmul_real(&r, &zP, Rk);
        for (i = 0; i < nalpha; i++) {
            one_minus(&f, &alpha[i], qk);
            cmul(&r, &r, &f, &s);
        }
        for (i = 0; i < nbeta; i++) {
            one_minus(&f, &beta[i], qk);
            if (cdiv(&r, &r, &f, &s)) {
                status = QK_ZERODIV;
                break;
            }
        }
        if (status != QK_OK)
            break;
        cmul(&t, &t, &r, &s);
        mpfr_add(S.re, S.re, t.re, RND);
        mpfr_add(S.im, S.im, t.im, RND);
        cabs_lo(tmp, &S);
        if (mpfr_cmp(tmp, sc) > 0)
            mpfr_set(sc, tmp, RND);
        k++;
        mpfr_mul(qk, qk, q, RND);
        mpfr_mul(Rk, Rk, R, RND);
    }

    cset(out, &S);
    mpfr_set(scale, sc, RND);
    *terms = k + 1;

    for (i = 0; i < nalpha; i++)
        mpfr_clear(abs_a[i]);
    for (i = 0; i < nbeta; i++)
        mpfr_clear(abs_b[i]);
    free(abs_a);
    free(abs_b);
    scratch_clear(&s);
    mpfr_clears(lo_zp, lo_qk, lo_Rk, rho, at, thr, lim, tmp, eps_lo, sc,
                (mpfr_ptr) 0);
    mpfr_clears(qk, Rk, (mpfr_ptr) 0);
    qk_cclear(&f);
    qk_cclear(&r);
    qk_cclear(&zP);
    qk_cclear(&S);
    qk_cclear(&t);
    return status;
}

/*
 * Majorant tail of sum_{i > j} wmax g^{i^2} a^i, valid once the ratio bound
 * g^{2j+3} a is at most 1/2.  Returns 0 when it is not yet applicable.
 */
static int gauss_tail(mpfr_ptr out, mpfr_srcptr g_lo, mpfr_srcptr a_lo,
                      mpfr_srcptr wmax_lo, long j, mpfr_ptr tmp, mpfr_ptr rho)
{
    unsigned long e = (unsigned long) (2 * j + 3);
    unsigned long jj = (unsigned long) (j + 1);

    mpfr_pow_ui(rho, g_lo, e, RND);
    mpfr_mul(rho, rho, a_lo, RND);
    if (mpfr_cmp_d(rho, 0.5) > 0)
        return 0;
    mpfr_pow_ui(out, g_lo, jj * jj, RND);
    mpfr_pow_ui(tmp, a_lo, jj, RND);
    mpfr_mul(out, out, tmp, RND);
    mpfr_mul(out, out, wmax_lo, RND);
    mpfr_ui_sub(tmp, 1, rho, RND);
    mpfr_div(out, out, tmp, RND);
    return 1;
}

int qk_gauss_sum(qk_cplx *out, mpfr_ptr tail, mpfr_ptr scale, long *terms,
                 const qk_cplx *y, mpfr_srcptr g, const qk_cplx *w0,
                 mpfr_srcptr alpha, int nalpha, mpfr_srcptr beta, int nbeta,
                 mpfr_srcptr q, long M, mpfr_srcptr wmax, mpfr_srcptr eps,
                 long max_terms, mpfr_prec_t prec)
{
    qk_cplx S, T, r, yinv, one;
    mpfr_t gp, g2, qm, fac;
    mpfr_t g_lo, ay, ayinv, wm_lo, eps_lo, sc, tmp, rho, tl, tail_dn, tail_up;
    scratch s;
    long j, count = 1;
    int i, status = QK_OK;

    qk_cinit(&S, prec);
    qk_cinit(&T, prec);
    qk_cinit(&r, prec);
    qk_cinit(&yinv, prec);
    qk_cinit(&one, prec);
    mpfr_inits2(prec, gp, g2, qm, fac, (mpfr_ptr) 0);
    mpfr_inits2(LO_PREC, g_lo, ay, ayinv, wm_lo, eps_lo, sc, tmp, rho, tl,
                tail_dn, tail_up, (mpfr_ptr) 0);
    scratch_init(&s, prec);

    cset(&S, w0);
    cabs_lo(sc, w0);
    mpfr_set(g_lo, g, RND);
    cabs_lo(ay, y);
    mpfr_ui_div(ayinv, 1, ay, RND);
    mpfr_set(wm_lo, wmax, RND);
    mpfr_set(eps_lo, eps, RND);
    mpfr_sqr(g2, g, RND);
    mpfr_set_zero(tail_dn, 1);
    mpfr_set_zero(tail_up, 1);
    mpfr_set_ui(one.re, 1, RND);

    /* downward: j = 1 .. M */
    if (M > 0) {
        cdiv(&yinv, &one, y, &s);
        cset(&T, w0);
        mpfr_set(gp, g, RND);
        mpfr_pow_ui(qm, q, (unsigned long) M, RND);
        for (j = 1;; j++) {
            mpfr_div(qm, qm, q, RND);
            cmul_real(&r, &yinv, gp);
            for (i = 0; i < nbeta; i++) {
                mpfr_mul(fac, beta + i, qm, RND);
                mpfr_ui_sub(fac, 1, fac, RND);
                cmul_real(&r, &r, fac);
            }
            for (i = 0; i < nalpha; i++) {
                mpfr_mul(fac, alpha + i, qm, RND);
                mpfr_ui_sub(fac, 1, fac, RND);
                if (mpfr_zero_p(fac)) {
                    status = QK_ZERODIV;
                    break;
                }
                mpfr_div(r.re, r.re, fac, RND);
                mpfr_div(r.im, r.im, fac, RND);
            }
            if (status != QK_OK)
                break;
            cmul(&T, &T, &r, &s);
            mpfr_add(S.re, S.re, T.re, RND);
            mpfr_add(S.im, S.im, T.im, RND);
            count++;
            cabs_lo(tmp, &S);
            if (mpfr_cmp(tmp, sc) > 0)
                mpfr_set(sc, tmp, RND);
            if (j == M)
                break;
            if (gauss_tail(tl, g_lo, ayinv, wm_lo, j, tmp, rho)) {
                mpfr_mul(tmp, eps_lo, sc, RND);
                if (mpfr_cmp(tl, tmp) <= 0) {
                    mpfr_set(tail_dn, tl, RND);
                    break;
                }
            }
            if (count >= max_terms) {
                status = QK_MAXTERMS;
                break;
            }
            mpfr_mul(gp, gp, g2, RND);
        }
    }

    /* upward: j = 1, 2, ... */
    if (status == QK_OK) {
        cset(&T, w0);
        mpfr_set(gp, g, RND);
        mpfr_pow_ui(qm, q, (unsigned long) M, RND);
        for (j = 1;; j++) {
            cmul_real(&r, y, gp);
            for (i = 0; i < nalpha; i++) {
                mpfr_mul(fac, alpha + i, qm, RND);
                mpfr_ui_sub(fac, 1, fac, RND);
                cmul_real(&r, &r, fac);
            }
            for (i = 0; i < nbeta; i++) {
                mpfr_mul(fac, beta + i, qm, RND);
                mpfr_ui_sub(fac, 1, fac, RND);
                if (mpfr_zero_p(fac)) {
                    status = QK_ZERODIV;
                    break;
                }
                mpfr_div(r.re, r.re, fac, RND);
                mpfr_div(r.im, r.im, fac, RND);
            }
            if (status != QK_OK)
                break;
            cmul(&T, &T, &r, &s);
            mpfr_add(S.re, S.re, T.re, RND);
            mpfr_add(S.im, S.im, T.im, RND);
            count++;
            cabs_lo(tmp, &S);
            if (mpfr_cmp(tmp, sc) > 0)
                mpfr_set(sc, tmp, RND);
            if (gauss_tail(tl, g_lo, ay, wm_lo, j, tmp, rho)) {
                mpfr_mul(tmp, eps_lo, sc, RND);
                if (mpfr_cmp(tl, tmp) <= 0) {
                    mpfr_set(tail_up, tl, RND);
                    break;
                }
            }
            if (count >= max_terms) {
                status = QK_MAXTERMS;
                break;
            }
            mpfr_mul(gp, gp, g2, RND);
            mpfr_mul(qm, qm, q, RND);
        }
    }

    cset(out, &S);
    mpfr_add(tail, tail_dn, tail_up, RND);
    mpfr_set(scale, sc, RND);
    *terms = count;

    scratch_clear(&s);
    mpfr_clears(g_lo, ay, ayinv, wm_lo, eps_lo, sc, tmp, rho, tl, tail_dn,
                tail_up, (mpfr_ptr) 0);
    mpfr_clears(gp, g2, qm, fac, (mpfr_ptr) 0);
    qk_cclear(&one);
    qk_cclear(&yinv);
    qk_cclear(&r);
    qk_cclear(&T);
    qk_cclear(&S);
    return status;
}

long qk_frac_scan(long *out, long cap, mpz_srcptr T, mpz_srcptr B,
                  unsigned long P, long n_max)
{
    mpz_t x, r, d, half, lim, tmp;
    long n, found = 0;

    mpz_inits(x, r, d, half, lim, tmp, (mpz_ptr) 0);
    mpz_neg(x, B);
    mpz_set_ui(half, 0);
    if (P > 0)
        mpz_setbit(half, P - 1);
    mpz_set_ui(lim, 0);
    mpz_setbit(lim, P);
    mpz_mul_ui(lim, lim, 3);
    for (n = 1; n <= n_max; n++) {
        mpz_add(x, x, T);
        mpz_add(r, x, half);
        mpz_fdiv_q_2exp(r, r, P);
        mpz_mul_2exp(d, r, P);
        mpz_sub(d, x, d);
        mpz_abs(d, d);
        mpz_mul_ui(d, d, (unsigned long) n);
        mpz_set_ui(tmp, (unsigned long) n);
        mpz_mul_ui(tmp, tmp, (unsigned long) (n + 1));
        mpz_add(tmp, tmp, lim);
        if (mpz_cmp(d, tmp) <= 0) {
            if (found < cap)
                out[found] = n;
            found++;
        }
    }
    mpz_clears(x, r, d, half, lim, tmp, (mpz_ptr) 0);
    return found;
}
