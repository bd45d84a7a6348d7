#ifndef QKERN_H
#define QKERN_H

#include <gmp.h>
#include <mpfr.h>

typedef struct {
    mpfr_t re;
    mpfr_t im;
} qk_cplx;

enum {
    QK_OK = 0,
    QK_MAXTERMS = -1,
    QK_ZERODIV = -2
};

void qk_cinit(qk_cplx *z, mpfr_prec_t prec);
void qk_cclear(qk_cplx *z);

/* out = prod_{k<K} (1 - a q^k) */
int qk_qpoch_product(qk_cplx *out, const qk_cplx *a, mpfr_srcptr q, long K,
                     mpfr_prec_t prec);

/*
 * Sum of t_0 = 1, t_{k+1} = t_k * z P R^k prod(1 - alpha_i q^k) / prod(1 - beta_i q^k).
 * Dynamic stop (nterms == 0) once the ratio majorant rho_k allows a geometric
 * tail bound below eps * scale; with nterms > 0 exactly nterms terms are summed.
 */
int qk_hyper_sum(qk_cplx *out, mpfr_ptr tail, mpfr_ptr scale, long *terms,
                 const qk_cplx *z, mpfr_srcptr P, mpfr_srcptr R,
                 const qk_cplx *alpha, int nalpha,
                 const qk_cplx *beta, int nbeta,
                 mpfr_srcptr q, mpfr_srcptr eps, long max_terms, long nterms,
                 mpfr_prec_t prec);

/*
 * Re-centred sum  sum_{j >= -M} w_{M+j} g^{j^2} y^j  with
 * w_k = prod (beta_i q^k; q)_inf / prod (alpha_i q^k; q)_inf, w_M = w0 given
 * and |w_k| <= wmax for every k.
 */
int qk_gauss_sum(qk_cplx *out, mpfr_ptr tail, mpfr_ptr scale, long *terms,
                 const qk_cplx *y, mpfr_srcptr g, const qk_cplx *w0,
                 mpfr_srcptr alpha, int nalpha, mpfr_srcptr beta, int nbeta,
                 mpfr_srcptr q, long M, mpfr_srcptr wmax, mpfr_srcptr eps,
                 long max_terms, mpfr_prec_t prec);

/* Fixed-point scan for n <= n_max with |n T - B - r 2^P| n <= 3 2^P + n(n+1). */
long qk_frac_scan(long *out, long cap, mpz_srcptr T, mpz_srcptr B,
                  unsigned long P, long n_max);

#endif
