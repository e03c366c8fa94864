"""Hecke-type double sums, Appell-Lerch sums and the Hickerson-Mortenson expansion.

All arguments ``x, y, z`` are signed powers of ``q`` (:class:`Monomial`), so
every object below is a Laurent series in ``q`` alone.

``hecke_f``      f_{a,b,c}(x, y, q), the signed sum over two lattice quadrants
``appell_m``     m(x, q^M, z)
``hecke_g``      g_{a,b,c}(x, y, q, z1, z0), a combination of theta factors and m
``theta_block``  theta_{n,p}(x, y, q)
``verify_hm``    f_{n,n+p,n} == g_{n,n+p,n}(x, y, q, -1, -1) + theta_{n,p} / Jbar_{0,np(2n+p)}
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NonTruncatableError, PoleError, ZeroDenominatorError
from .series import Monomial, TruncSeries, mul, zero
from .theta import JSymbol, Jm, expand_j, expand_j_inverse, jbar, normalize_j

__all__ = [
    "HeckeParams",
    "AppellArgs",
    "GTerm",
    "hecke_f",
    "appell_m",
    "appell_pole_free",
    "hecke_g",
    "hecke_g_terms",
    "theta_block",
    "theta_block_terms",
    "theta_quotient",
    "verify_hm",
    "find_generic_monomials",
]

MINUS_ONE = Monomial(-1, 0)


@dataclass(frozen=True)
class HeckeParams:
    a: int
    b: int
    c: int
    x: Monomial
    y: Monomial

    @property
    def disc(self):
        return self.b * self.b - self.a * self.c


@dataclass(frozen=True)
class AppellArgs:
    """Arguments of ``m(x, q^M, z)``."""

    x: Monomial
    modulus_exp: int
    z: Monomial


def _binom2(k):
    return k * (k - 1) // 2


# -- quadratic-form enumeration ------------------------------------------


def _quadrant(a, b, c, ex, ey, const, T, slack=0):
    """Yield ``(r, s, E)`` for r, s >= 0 with E(r, s) <= T where

        E = a C(r,2) + b r s + c C(s,2) + ex r + ey s + const.

    Row r is abandoned once it can no longer reach T: its minimum over s is
    then at s = 0 (b r + ey >= 0), the row minima increase from r on
    (a r + ex >= 0) and that minimum already exceeds T.  ``slack`` scans that
    many extra rows and columns past every stopping point.
    """
    if a <= 0 or c <= 0 or b < 0:
        raise NonTruncatableError(
            f"quadratic form (a, b, c) = ({a}, {b}, {c}) is not bounded below on a quadrant")
    r = 0
    extra_rows = 0
    limit = 10 ** 7
    while True:
        row_base = a * _binom2(r) + ex * r + const
        settled = b * r + ey >= 0 and a * r + ex >= 0
        if settled and row_base > T:
            if extra_rows >= slack:
                return
            extra_rows += 1
        s = 0
        extra_cols = 0
        lin = b * r + ey
        while True:
            e = row_base + lin * s + c * _binom2(s)
            if e <= T:
                yield r, s, e
            elif lin + c * s >= 0:  # row is increasing from here on
                if extra_cols >= slack:
                    break
                extra_cols += 1
            s += 1
        r += 1
        if r > limit:
            raise NonTruncatableError("row scan did not terminate")


def hecke_f(p, T, slack=0):
    """``f_{a,b,c}(x, y, q)`` truncated at ``T``.

    ``(sum_{r,s >= 0} - sum_{r,s < 0}) (-1)^(r+s) x^r y^s q^(a C(r,2) + b r s + c C(s,2))``
    """
    a, b, c, x, y = p.a, p.b, p.c, p.x, p.y
    terms = {}
    for r, s, e in _quadrant(a, b, c, x.exp, y.exp, 0, T, slack):
        sign = (-1) ** ((r + s) % 2) * (x.sign ** (r % 2)) * (y.sign ** (s % 2))
        terms[e] = terms.get(e, 0) + sign
    # r = -1-R, s = -1-S
    ex2 = 2 * a + b - x.exp
    ey2 = 2 * c + b - y.exp
    const2 = a + b + c - x.exp - y.exp
    for R, S, e in _quadrant(a, b, c, ex2, ey2, const2, T, slack):
        sign = (-1) ** ((R + S) % 2) * (x.sign ** ((R + 1) % 2)) * (y.sign ** ((S + 1) % 2))
        terms[e] = terms.get(e, 0) - sign
    return TruncSeries.from_dict(terms, T)


# -- Appell-Lerch sums ----------------------------------------------------


def appell_pole_free(args):
    """True when neither ``z`` nor ``x z`` lies in ``+q^(M Z)``."""
    M = args.modulus_exp
    xz = args.x * args.z
    for w in (args.z, xz):
        if w.sign == 1 and w.exp % M == 0:
            return False
    return True


def appell_m(args, T):
    """``m(x, q^M, z)`` truncated at ``T``.

    Each ``1/(1 - w)`` is expanded geometrically in ``w`` when ``w`` has a
    positive exponent and in ``1/w`` when it is negative; ``w = -1`` gives
    the exact coefficient 1/2.
    """
    M = args.modulus_exp
    x, z = args.x, args.z
    if not appell_pole_free(args):
        raise PoleError(f"m({x}, q^{M}, {z}) has a pole")
    xz = x * z
    zsym = JSymbol.of(z, M)
    pz = normalize_j(zsym).prefactor.exp
    To = T + pz  # order needed for the bilateral sum before dividing by j(z)
    terms = {}

    def add_row(r):
        """Add row r; return the exponent of its leading term."""
        eu = M * _binom2(r) + z.exp * r
        su = (-1) ** (r % 2) * z.sign ** (r % 2)
        d = M * (r - 1) + xz.exp
        sw = xz.sign
        if d > 0:
            e, coef, k = eu, su, 0
            while e <= To:
                terms[e] = terms.get(e, 0) + coef
                coef *= sw
                e += d
            return eu
        if d < 0:
            # 1/(1-w) = -sum_{k>=1} w^-k
            coef = -su * sw
            e = eu - d
            lead = e
            while e <= To:
                terms[e] = terms.get(e, 0) + coef
                coef *= sw
                e -= d
            return lead
        if sw == 1:
            raise PoleError(f"m({x}, q^{M}, {z}): denominator 1 - q^0 in row {r}")
        if eu <= To:
            terms[eu] = terms.get(eu, 0) + Fraction(su, 2)
        return eu

    def lead(r):
        eu = M * _binom2(r) + z.exp * r
        d = M * (r - 1) + xz.exp
        return eu - d if d < 0 else eu

    r = 0
    while True:
        L = add_row(r)
        if M * (r - 1) + xz.exp > 0 and lead(r + 1) >= L and L > To:
            break
        r += 1
    r = -1
    while True:
        L = add_row(r)
        if M * (r - 1) + xz.exp < 0 and lead(r - 1) >= L and L > To:
            break
        r -= 1
    S = TruncSeries.from_dict(terms, To)
    if S.is_zero():
        return zero(T)
    inv = expand_j_inverse(zsym, T - min(S.valuation, To + 1))
    return mul(S, inv).truncate(T)


# -- g_{a,b,c} ------------------------------------------------------------


@dataclass(frozen=True)
class GTerm:
    """One summand ``coef * j(theta; q^k) * m(appell)`` of g_{a,b,c}."""

    half: int  # 0 for the t-sum over range(a), 1 for range(c)
    t: int
    coef: Monomial
    theta: JSymbol
    appell: AppellArgs

    @property
    def theta_vanishes(self):
        return normalize_j(self.theta).is_zero

    @property
    def pole_free(self):
        return appell_pole_free(self.appell)


def hecke_g_terms(p, z1, z0):
    """Symbolic summands of ``g_{a,b,c}(x, y, q, z1, z0)``, in display order."""
    a, b, c, x, y = p.a, p.b, p.c, p.x, p.y
    D = p.disc
    if D <= 0:
        raise ValueError("g_{a,b,c} needs b^2 - ac > 0")
    out = []
    for t in range(a):
        coef = ((-y) ** t) * Monomial(1, c * _binom2(t))
        theta = JSymbol.of(Monomial(1, b * t) * x, a)
        arg = (Monomial(-1, a * _binom2(b + 1) - c * _binom2(a + 1) - t * D)
               * ((-y) ** a) / ((-x) ** b))
        out.append(GTerm(0, t, coef, theta, AppellArgs(arg, a * D, z0)))
    for t in range(c):
        coef = ((-x) ** t) * Monomial(1, a * _binom2(t))
        theta = JSymbol.of(Monomial(1, b * t) * y, c)
        arg = (Monomial(-1, c * _binom2(b + 1) - a * _binom2(c + 1) - t * D)
               * ((-x) ** c) / ((-y) ** b))
        out.append(GTerm(1, t, coef, theta, AppellArgs(arg, c * D, z1)))
    return out


def hecke_g(p, z1, z0, T):
    """``g_{a,b,c}(x, y, q, z1, z0)`` truncated at ``T``.

    A summand whose theta factor vanishes identically contributes zero and
    its Appell-Lerch factor is never evaluated.
    """
    total = zero(T)
    for term in hecke_g_terms(p, z1, z0):
        if term.theta_vanishes:
            continue
        if not term.pole_free:
            raise PoleError(
                f"g term (half={term.half}, t={term.t}): m({term.appell.x}, "
                f"q^{term.appell.modulus_exp}, {term.appell.z}) has a pole")
        pj = normalize_j(term.theta).prefactor.exp
        m_part = appell_m(term.appell, T - term.coef.exp - pj)
        if m_part.is_zero():
            continue
        j_part = expand_j(term.theta, T - term.coef.exp - m_part.valuation)
        total = total + mul(j_part, m_part).mul_monomial(term.coef)
    return total


# -- theta quotients ------------------------------------------------------


def theta_quotient(mono, num, den, T):
    """``mono * prod j(num) / prod j(den)`` truncated exactly at ``T``."""
    nn = [normalize_j(s) for s in num]
    if any(v.is_zero for v in nn):
        return zero(T)
    nd = [normalize_j(s) for s in den]
    for s, v in zip(den, nd):
        if v.is_zero:
            raise ZeroDenominatorError(f"{s} vanishes identically", where=s)
    vals = [v.prefactor.exp for v in nn] + [-v.prefactor.exp for v in nd]
    total = mono.exp + sum(vals)
    if total > T:
        return zero(T)
    out = None
    for i, s in enumerate(list(num) + list(den)):
        Ti = T - (total - vals[i])
        f = expand_j(s, Ti) if i < len(num) else expand_j_inverse(s, Ti)
        out = f if out is None else mul(out, f)
    if out is None:
        return TruncSeries([mono.sign], mono.exp, T)
    return out.mul_monomial(mono)


@dataclass(frozen=True)
class ThetaTerm:
    r_star: int
    s_star: int
    mono: Monomial
    num: tuple
    den: tuple


def _as_int(v, what):
    v = Fraction(v)
    if v.denominator != 1:
        raise ValueError(f"non-integral exponent {v} in {what}")
    return v.numerator


def theta_block_terms(n, p, x, y):
    """The ``p^2`` symbolic summands of ``theta_{n,p}(x, y, q)``."""
    if n < 1 or p < 1 or gcd(n, p) != 1:
        raise ValueError(f"theta_{{n,p}} needs coprime positive n, p; got ({n}, {p})")
    frac = Fraction(n - 1, 2) % 1
    P = p * p * (2 * n + p)
    out = []
    for rs in range(p):
        for ss in range(p):
            r = rs + frac
            s = ss + frac
            rho = _as_int(r - Fraction(n - 1, 2), "power of -x")
            sig = _as_int(s + Fraction(n + 1, 2), "power of -y")
            e = n * _binom2(rho) + (n + p) * rho * sig + n * _binom2(sig)
            mono = Monomial(1, e) * ((-x) ** rho) * ((-y) ** sig)
            d = _as_int(s - r, "s - r")
            num1 = JSymbol.of(Monomial(-1, n * p * d) * (x ** n) / (y ** n), n * p * p)
            e2 = _as_int(p * (2 * n + p) * (r + s) + p * (n + p), "numerator theta")
            num2 = JSymbol.of(Monomial(1, e2) * ((x * y) ** p), P)
            e3 = _as_int(p * (2 * n + p) * r + Fraction(p * (n + p), 2), "denominator theta")
            den1 = JSymbol.of(Monomial(1, e3) * ((-y) ** (n + p)) / ((-x) ** n), P)
            e4 = _as_int(p * (2 * n + p) * s + Fraction(p * (n + p), 2), "denominator theta")
            den2 = JSymbol.of(Monomial(1, e4) * ((-x) ** (n + p)) / ((-y) ** n), P)
            out.append(ThetaTerm(rs, ss, mono, (Jm(P),) * 3 + (num1, num2), (den1, den2)))
    return out


def theta_block(n, p, x, y, T):
    """``theta_{n,p}(x, y, q)`` truncated at ``T``."""
    total = zero(T)
    for term in theta_block_terms(n, p, x, y):
        try:
            total = total + theta_quotient(term.mono, term.num, term.den, T)
        except ZeroDenominatorError as exc:
            raise ZeroDenominatorError(
                f"theta_{{{n},{p}}} term (r*, s*) = ({term.r_star}, {term.s_star}): {exc}",
                where=(term.r_star, term.s_star)) from exc
    return total


def verify_hm(n, p, x, y, T):
    """Check ``f_{n,n+p,n} = g_{n,n+p,n}(x,y,q,-1,-1) + theta_{n,p}/Jbar_{0,np(2n+p)}``.

    Returns ``(ok, difference)`` with the difference series ``lhs - rhs``.
    """
    params = HeckeParams(n, n + p, n, x, y)
    lhs = hecke_f(params, T)
    g = hecke_g(params, MINUS_ONE, MINUS_ONE, T)
    th = theta_block(n, p, x, y, T)
    th = mul(th, expand_j_inverse(jbar(0, n * p * (2 * n + p)), max(T - th.valuation, 0)))
    diff = lhs - (g + th)
    return diff.is_zero(), diff


def _generic(n, p, x, y):
    params = HeckeParams(n, n + p, n, x, y)
    live = 0
    for term in hecke_g_terms(params, MINUS_ONE, MINUS_ONE):
        if term.theta_vanishes:
            continue
        live += 1
        if not term.pole_free:
            return False, 0
        M = term.appell.modulus_exp
        if term.appell.x.sign == 1 and term.appell.x.exp % M == 0:
            return False, 0
    for term in theta_block_terms(n, p, x, y):
        if any(normalize_j(d).is_zero for d in term.den):
            return False, 0
    return True, live


def find_generic_monomials(n, p, max_exp=6):
    """First pair ``(x, y)`` of signed q-powers that is generic for (n, p).

    Generic: every theta denominator of theta_{n,p} is nonzero and every
    Appell-Lerch factor with a nonvanishing theta prefactor is pole-free.
    Pairs for which every summand of g survives are preferred.
    """
    best = None
    for ex in range(1, max_exp + 1):
        for ey in range(1, max_exp + 1):
            for sx in (-1, 1):
                for sy in (-1, 1):
                    x, y = Monomial(sx, ex), Monomial(sy, ey)
                    ok, live = _generic(n, p, x, y)
                    if not ok:
                        continue
                    if live == 2 * n:
                        return x, y
                    if best is None:
                        best = (x, y)
    if best is None:
        raise ValueError(f"no generic monomials for (n, p) = ({n}, {p}) up to q^{max_exp}")
    return best
