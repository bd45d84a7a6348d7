"""q-series, theta functions and limiting relations at arbitrary precision."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError
from .kernels import BACKEND
from .numerics import PrecisionContext, QDomain, default_context, make_context, validate_q
from .qseries import (CertifiedValue, RemainderEstimate, euler_sum, qbinomial_sum,
                      qpoch_finite, qpoch_infinite, remainder_R1, remainder_R2)
from .special import (HypSpec, confluent_phi, entire_f, ramanujan_Aq, theta,
                      triple_product)
from .diophantine import (RationalT, RealT, floor_frac, parse_t, solve_irrational,
                          solve_rational)
from .asymptotics import (AsymptoticInstance, AsymptoticReport, ScanConfig, laplace_split,
                          residual, verify_suite)

__all__ = [
    "BACKEND", "CertifiedValue", "ConvergenceError", "DomainError", "HypSpec",
    "AsymptoticInstance", "AsymptoticReport", "PrecisionContext", "QDomain", "RationalT",
    "RealT", "RemainderEstimate", "ScanConfig", "confluent_phi", "default_context",
    "entire_f", "euler_sum", "floor_frac", "laplace_split", "make_context", "parse_t",
    "qbinomial_sum", "qpoch_finite", "qpoch_infinite", "ramanujan_Aq", "remainder_R1",
    "remainder_R2", "residual", "solve_irrational", "solve_rational", "theta",
    "triple_product", "validate_q", "verify_suite",
]
