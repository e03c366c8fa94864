"""High-precision evaluation of B_N(q) at rational 0 < q < 1.

Two routes:

* ``theta``  -- each of the N^2 theta quotients is a finite product of
  factors (1 -+ q^e) once the infinite products are cut off by an explicit
  tail bound; works for any N, including N = 100.
* ``series`` -- partial sums of the exact q-series with a geometric tail
  estimate; only for N small enough that the series can be computed.

Errors are estimates (tail bounds plus guard digits), not interval
enclosures; the two routes are cross-checked against each other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

import mpmath

from .errors import PrecisionError, TailEstimateUnreliable
from .identities import bn_multisum, bn_theta_terms
from .theta import jbar, normalize_j

__all__ = [
    "Route",
    "EvalResult",
    "eval_bn_theta_numeric",
    "eval_series_partial",
    "eval_bn_series",
    "eval_pochhammer_numeric",
    "table1",
    "TABLE1_N",
    "TABLE1_Q",
    "round_half_away",
    "table1_csv",
]

GUARD = 10
TABLE1_N = (2, 3, 4, 5, 6, 7, 8, 9, 10, 100)
TABLE1_Q = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7), Fraction(1, 11))
SERIES_MAX_N = 10


class Route(str, enum.Enum):
    THETA_PRODUCT = "theta_product"
    SERIES_PARTIAL_SUM = "series_partial_sum"


@dataclass
class EvalResult:
    value: mpmath.mpf
    err_est: mpmath.mpf
    route: Route
    digits: int
    work: dict = field(default_factory=dict)

    def reciprocal(self):
        """``1 / value`` with the error estimate carried through."""
        with mpmath.workdps(self.digits + 2 * GUARD):
            v = 1 / self.value
            err = self.err_est / (self.value * self.value) * (1 + self.err_est / self.value)
        return EvalResult(v, err, self.route, self.digits, dict(self.work, reciprocal=True))

    def rounded(self, digits=None):
        return round_half_away(self.value, self.digits if digits is None else digits)

    def as_dict(self):
        return {
            "value": self.rounded(),
            "value_full": mpmath.nstr(self.value, self.digits + GUARD),
            "err_est": mpmath.nstr(self.err_est, 3),
            "route": self.route.value,
            "work": dict(self.work),
        }


def round_half_away(x, digits):
    """Decimal string of ``x`` rounded half away from zero to ``digits`` places."""
    d = Decimal(mpmath.nstr(x, digits + 20, strip_zeros=False, min_fixed=-math.inf,
                            max_fixed=math.inf))
    return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP))


def _as_fraction(q):
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError(f"q must lie strictly between 0 and 1, got {q}")
    return q


# -- products with tail control -------------------------------------------


def _qprod(sign, e0, step, qm, eps, work):
    """``prod_{k>=0} (1 - sign q^(e0 + k step))`` and its relative tail bound.

    Stops after factor K once
    ``log prod_{k>K} (1 + u_k) <= u_{K+1} / ((1 - q^step)(1 - u_{K+1})) < eps``.
    """
    val = mpmath.mpf(1)
    Q = qm ** step
    e = e0
    while True:
        u = qm ** e
        val *= 1 - sign * u
        work["factors"] = work.get("factors", 0) + 1
        nxt = u * Q
        bound = nxt / ((1 - Q) * (1 - nxt))
        if bound < eps:
            return val, bound
        e += step


def _j_numeric(sym, qm, eps, work, cache):
    """Canonical ``j(sign q^a; q^m)`` (0 <= a < m) with its relative error bound."""
    key = (sym.sign, sym.a, sym.m)
    if key in cache:
        return cache[key]
    s, a, m = sym.sign, sym.a, sym.m
    if a == 0:
        # (-1; Q) = 2 (-Q; Q), (Q/x; Q) = (-Q; Q)
        v1, b1 = _qprod(s, m, m, qm, eps, work)
        v1 *= 2
    else:
        v1, b1 = _qprod(s, a, m, qm, eps, work)
    v2, b2 = _qprod(s, m - a, m, qm, eps, work)
    v3, b3 = _qprod(1, m, m, qm, eps, work)
    out = (v1 * v2 * v3, b1 + b2 + b3)
    cache[key] = out
    return out


def _theta_sum(N, q, digits, extra):
    terms = bn_theta_terms(N)
    dps = digits + GUARD + math.ceil(math.log10(len(terms))) + extra
    eps = mpmath.mpf(10) ** (-(digits + GUARD))
    work = {"terms": len(terms), "factors": 0}
    cache = {}
    with mpmath.workdps(dps):
        qm = mpmath.mpf(q.numerator) / q.denominator
        vals = []
        for t in terms:
            sign, E, rel = t.mono.sign, t.mono.exp, mpmath.mpf(0)
            mag = mpmath.mpf(1)
            for sym, power in [(s, 1) for s in t.num] + [(s, -1) for s in t.den]:
                nj = normalize_j(sym)
                if nj.is_zero:
                    if power < 0:
                        raise PrecisionError(f"vanishing denominator {sym} at N={N}")
                    mag = mpmath.mpf(0)
                    break
                sign *= nj.prefactor.sign
                E += power * nj.prefactor.exp
                v, b = _j_numeric(nj.canonical, qm, eps, work, cache)
                mag = mag * v if power > 0 else mag / v
                rel += b
            vals.append((sign * qm ** E * mag, rel))
        # ascending magnitude for a reproducible summation order
        vals.sort(key=lambda p: abs(p[0]))
        total = mpmath.fsum(v for v, _ in vals)
        tail_err = mpmath.fsum(abs(v) * r for v, r in vals)
        big = max(abs(v) for v, _ in vals)
        pre_q, b1 = _qprod(1, 1, 1, qm, eps, work)
        pre_j, b2 = _j_numeric(normalize_j(jbar(0, N * (N + 2))).canonical, qm, eps, work, cache)
        pre = pre_q * pre_q * pre_j
        value = total / pre
        err = (tail_err + abs(total) * (2 * b1 + b2)) / pre
        err += big / pre * len(vals) * mpmath.mpf(10) ** (-dps + 1)
    return value, err, work, dps


def eval_bn_theta_numeric(N, q, target_digits=5, extra_digits=0):
    """B_N(q) from the N^2 theta quotients, evaluated in mpmath."""
    if N < 2:
        raise ValueError(f"B_N needs N >= 2, got {N}")
    q = _as_fraction(q)
    value, err, work, dps = _theta_sum(N, q, target_digits, extra_digits)
    work["dps"] = dps
    if not value > 0:
        raise PrecisionError(f"B_{N}({q}) evaluated to a nonpositive value {value}")
    if err >= mpmath.mpf(10) ** (-(target_digits + 1)):
        raise PrecisionError(f"B_{N}({q}): error estimate {err} too large for "
                             f"{target_digits} digits")
    return EvalResult(value, err, Route.THETA_PRODUCT, target_digits, work)


def eval_series_partial(series, q, target_digits=5, window=10):
    """``sum_{k<=T} c_k q^k`` for an exact series, with a geometric tail estimate.

    The decay ratio is read off the last ``window`` terms: the ratio of the
    largest |c_k q^k| in the last half-window to that of the first half,
    per step.  A ratio above 0.9 is rejected.
    """
    q = _as_fraction(q)
    T = series.trunc_order
    if T < window:
        raise TailEstimateUnreliable(f"need at least {window} terms, series stops at q^{T}")
    if series.scale != 1:
        raise ValueError("eval_series_partial expects integral exponents")
    with mpmath.workdps(target_digits + GUARD + 10):
        qm = mpmath.mpf(q.numerator) / q.denominator
        total = series.evaluate(qm)
        last = []
        for k in range(T - window + 1, T + 1):
            c = Fraction(series.coeff(k))
            last.append(abs(mpmath.mpf(c.numerator) / c.denominator) * qm ** k)
        h = window // 2
        a = max(last[:h])
        b = max(last[h:])
        if b == 0:
            ratio = mpmath.mpf(0)
        elif a == 0:
            raise TailEstimateUnreliable("terms grow across the estimation window")
        else:
            ratio = (b / a) ** (mpmath.mpf(1) / h)
        if ratio > mpmath.mpf("0.9"):
            raise TailEstimateUnreliable(f"terms decay too slowly (ratio {mpmath.nstr(ratio, 4)})")
        tail = b * ratio / (1 - ratio) if ratio else mpmath.mpf(0)
        err = tail + abs(total) * mpmath.mpf(10) ** (-(target_digits + GUARD))
    return EvalResult(total, err, Route.SERIES_PARTIAL_SUM, target_digits,
                      {"order": T, "terms": sum(1 for _ in series.items()),
                       "ratio": float(ratio)})


def _series_order(q, target_digits):
    # initial guess: q^T below 10^-(digits + guard)
    return max(40, math.ceil((target_digits + GUARD) * math.log(10) / -math.log(float(q))) + 20)


def eval_bn_series(N, q, target_digits=5, T=None, series=None):
    """B_N(q) from partial sums of the brute-force multisum series.

    The order is doubled until the tail estimate drops below
    ``10^-(target_digits + 3)``.
    """
    if N > SERIES_MAX_N:
        raise ValueError(f"the series route is limited to N <= {SERIES_MAX_N}")
    q = _as_fraction(q)
    goal = mpmath.mpf(10) ** (-(target_digits + 3))
    if series is not None:
        return eval_series_partial(series, q, target_digits)
    T = T or _series_order(q, target_digits)
    for _ in range(6):
        res = eval_series_partial(bn_multisum(N, T), q, target_digits)
        if res.err_est < goal:
            return res
        T *= 2
    raise TailEstimateUnreliable(f"B_{N}({q}): series did not converge by order {T}")


def eval_pochhammer_numeric(q, target_digits=5):
    """``(q; q)_oo`` with the same tail-bounded truncation."""
    q = _as_fraction(q)
    work = {"factors": 0}
    dps = target_digits + GUARD + 5
    with mpmath.workdps(dps):
        qm = mpmath.mpf(q.numerator) / q.denominator
        eps = mpmath.mpf(10) ** (-(target_digits + GUARD))
        v, b = _qprod(1, 1, 1, qm, eps, work)
        err = abs(v) * b + mpmath.mpf(10) ** (-dps + 2)
    work["dps"] = dps
    return EvalResult(v, err, Route.THETA_PRODUCT, target_digits, work)


@dataclass
class Table1Cell:
    """One table entry: 1/B_N(q) for a row ``N=<n>``, or (q)_oo for the last row."""

    row: str
    N: int | None
    q: Fraction
    result: EvalResult
    cross: EvalResult | None = None

    @property
    def dual_gap(self):
        if self.cross is None:
            return None
        return abs(self.result.value - self.cross.value)

    def as_dict(self):
        d = {"row": self.row, "N": self.N, "q": f"{self.q.numerator}/{self.q.denominator}",
             "inv_q": self.q.denominator // self.q.numerator}
        d.update(self.result.as_dict())
        if self.cross is not None:
            d["cross_route"] = self.cross.route.value
            d["cross_value"] = mpmath.nstr(self.cross.value, self.result.digits + GUARD)
            d["dual_gap"] = mpmath.nstr(self.dual_gap, 3)
        return d


def table1(digits=5, Ns=TABLE1_N, qs=TABLE1_Q, dual_route=True, dual_tol=1e-6,
           extra_digits=0):
    """The densities 1/B_N(q) on the (N, q) grid plus the (q)_oo row.

    Cells with N <= 10 are also evaluated from the multisum series; the two
    routes must agree within ``dual_tol`` or :class:`PrecisionError` is raised
    with the cell coordinates.
    """
    cells = []
    for N in Ns:
        series = None
        if dual_route and N <= SERIES_MAX_N:
            T = _series_order(min(qs, key=lambda x: -x), digits)
            # grow until every q in the row has a reliable tail
            for _ in range(6):
                series = bn_multisum(N, T)
                if all(eval_series_partial(series, q, digits).err_est
                       < mpmath.mpf(10) ** (-(digits + 3)) for q in qs):
                    break
                T *= 2
        for q in qs:
            try:
                res = eval_bn_theta_numeric(N, q, digits, extra_digits)
            except PrecisionError as exc:
                raise PrecisionError(f"cell (N={N}, q={q}): {exc}") from exc
            cross = None
            if series is not None:
                cross = eval_series_partial(series, q, digits)
                gap = abs(res.value - cross.value)
                if gap > dual_tol or gap > res.err_est + cross.err_est + mpmath.mpf(10) ** -(
                        digits + GUARD - 2):
                    raise PrecisionError(
                        f"cell (N={N}, q={q}): routes disagree by {mpmath.nstr(gap, 3)}")
            cells.append(Table1Cell(f"N={N}", N, q, res.reciprocal(),
                                    cross.reciprocal() if cross is not None else None))
    for q in qs:
        cells.append(Table1Cell("(q)_inf", None, q, eval_pochhammer_numeric(q, digits)))
    return cells


def table1_csv(cells):
    """CSV in the layout of the original table: rows N, columns 1/q."""
    qs = []
    for c in cells:
        if c.q not in qs:
            qs.append(c.q)
    rows = {}
    for c in cells:
        rows.setdefault(c.row, {})[c.q] = c.result.rounded()
    lines = ["N \\ 1/q," + ",".join(str(q.denominator // q.numerator) for q in qs)]
    for row, vals in rows.items():
        label = row[2:] if row.startswith("N=") else row
        lines.append(label + "," + ",".join(vals.get(q, "") for q in qs))
    return "\n".join(lines) + "\n"
