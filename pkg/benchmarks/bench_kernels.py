"""Time the compiled (MPFR) kernels against the pure-Python twins.

    python3 benchmarks/bench_kernels.py [--digits 60,200,1000] [--repeat 5]
"""
import argparse
import sys
import timeit

from qtheta import kernels
from qtheta.numerics import make_context, mp_at


def cases(digits):
    ctx = make_context(digits)
    W, eps = ctx.work, ctx.eps
    q = W.mpf("0.9")
    H = mp_at(ctx.prec + 64)
    T = int(H.nint(H.ldexp(H.sqrt(2), ctx.prec)))
    B = int(H.nint(H.ldexp(H.mpf("0.3"), ctx.prec)))
    return {
        "qpoch_product(K=2000)": lambda k: k.qpoch_product(W, W.mpc("0.5", "0.2"), q, 2000),
        "hyper_sum A_q(-50)": lambda k: k.hyper_sum(W, W.mpc(50), q, q * q, [], [q], q, eps, 10 ** 6),
        "hyper_sum q-binomial": lambda k: k.hyper_sum(W, W.mpc("0.8"), 1, 1, [W.mpc("0.3")], [q], q,
                                                      eps, 10 ** 6),
        "gauss_sum M=200": lambda k: k.gauss_sum(W, W.mpc(3, 1), W.sqrt(q), W.mpc(1), [], [q], q,
                                                 200, W.mpf(1), eps, 10 ** 6),
        "frac_scan n<=1e5": lambda k: k.frac_scan(T, B, ctx.prec, 100_000),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--digits", default="60,200,1000")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if "c" not in kernels.available_backends():
        print("compiled kernels not built; nothing to compare", file=sys.stderr)
        return 1
    C, P = kernels.get_backend("c"), kernels.get_backend("python")
    print(f"{'digits':>6}  {'kernel':<24} {'python [ms]':>12} {'c [ms]':>10} {'speedup':>8}")
    for d in (int(x) for x in args.digits.split(",")):
        for name, fn in cases(d).items():
            tp = min(timeit.repeat(lambda: fn(P), number=1, repeat=args.repeat))
            tc = min(timeit.repeat(lambda: fn(C), number=1, repeat=args.repeat))
            print(f"{d:>6}  {name:<24} {tp * 1e3:>12.2f} {tc * 1e3:>10.2f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
