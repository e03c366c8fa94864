"""Exact q-series arithmetic for multisum identities.

Truncated Laurent series with exact coefficients, theta functions at
q-power arguments, Hecke-type double sums and Appell-Lerch sums, the
B_N(q) multisum with its theta-quotient form, and high-precision
numerical evaluation.
"""

from .errors import *  # noqa: F401,F403
from .series import (Monomial, TruncSeries, add, invert, monomial_series, mul, one,
                     pochhammer_finite, pochhammer_infinite, zero)
from .theta import (J, JSymbol, Jm, divide_by_j, expand_j, expand_j_inverse, j_list, jbar,
                    normalize_j, parse_jsymbol, triple_product_oracle)
from .hecke import (AppellArgs, HeckeParams, appell_m, appell_pole_free,
                    find_generic_monomials, hecke_f, hecke_g, hecke_g_terms, theta_block,
                    theta_quotient, verify_hm)
from .identities import (andrews_gordon, bn_from_string_function, bn_hecke, bn_multisum,
                         bn_theta, cartan_inverse, StringParams, slater_product,
                         string_function)
from .numeric import (EvalResult, Route, eval_bn_series, eval_bn_theta_numeric,
                      eval_pochhammer_numeric, eval_series_partial, table1)

__version__ = "0.1.0"
