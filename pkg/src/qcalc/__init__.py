"""Jackson q-derivative calculus with the value at zero.

D_q f(x) = (f(x) - f(qx)) / ((1 - q) x) for x != 0 and (D_q f)(0) = f'(0);
the n-fold iterate satisfies (D_q^n f)(0) = lim_{x->0} D_q^n f(x)
= f^(n)(0)/n! * (q;q)_n / (1-q)^n.
"""

__version__ = "0.1.0"

from .exactpoly import (
    Polynomial,
    parse_poly,
    poly_closed_form,
    poly_qderiv,
    poly_qderiv_n,
    poly_theorem_value,
    qzero_nth,
)
from .expr import ParseError, eval_jet, eval_scalar, parse, to_pointfn, to_text
from .jets import TaylorJet, jet_apply, jet_arith, jet_derivative, jet_seed
from .qoperator import (
    LimitReport,
    PointFn,
    VerifyReport,
    qderiv_n_value,
    qderiv_value,
    qlimit_estimate,
    theorem_verify,
)
from .qseries import PowerSeries, series_domain_radius, series_qderiv_n
from .qsymbols import (
    alternating_qbinomial_sum,
    gaussian_binomial_poly,
    q_binomial,
    q_pochhammer,
    theorem_constant,
)
from .scalar import DomainError, QCalcError, format_scalar, parse_scalar
