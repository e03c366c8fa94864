"""Theta functions j(x; q^m) at signed q-power arguments.

``j(x; q) = (x)_oo (q/x)_oo (q)_oo``.  Arguments are restricted to
``x = sign * q^a``; the modulus is ``q^m``.  Before expansion every symbol
is moved into the canonical range ``0 <= a < m`` with

    j(q^(m n) x; q^m) = (-1)^n q^(-m n(n-1)/2) x^(-n) j(x; q^m),

so negative or oversized exponents cost nothing but a monomial prefactor.
The symbol vanishes exactly when ``x = +q^(k m)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .errors import ZeroDenominatorError
from .series import Monomial, TruncSeries, invert, mul, one, pochhammer_infinite, zero

__all__ = [
    "JSymbol",
    "NormalizedJ",
    "normalize_j",
    "expand_j",
    "expand_j_inverse",
    "triple_product_oracle",
    "j_list",
    "jbar",
    "J",
    "Jm",
    "parse_jsymbol",
]


@dataclass(frozen=True)
class JSymbol:
    """The theta symbol ``j(sign * q^a; q^m)``."""

    sign: int
    a: int
    m: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if self.m < 1:
            raise ValueError(f"modulus exponent must be positive, got {self.m}")

    @classmethod
    def of(cls, x, m):
        """``j(x; q^m)`` for a monomial ``x``."""
        return cls(x.sign, x.exp, m)

    @property
    def argument(self):
        return Monomial(self.sign, self.a)

    def __str__(self):
        s = "+" if self.sign > 0 else "-"
        return f"j({s} q^{self.a} ; q^{self.m})"


@dataclass(frozen=True)
class NormalizedJ:
    prefactor: Monomial
    canonical: JSymbol
    is_zero: bool


def J(a, m):
    """``J_{a,m} = j(q^a; q^m)``."""
    return JSymbol(1, a, m)


def jbar(a, m):
    """``Jbar_{a,m} = j(-q^a; q^m)``."""
    return JSymbol(-1, a, m)


def Jm(m):
    """``J_m = J_{m,3m} = (q^m; q^m)_oo``."""
    return JSymbol(1, m, 3 * m)


def normalize_j(sym):
    """Shift ``sym`` into the canonical range ``0 <= a < m``."""
    n, a0 = divmod(sym.a, sym.m)
    canonical = JSymbol(sym.sign, a0, sym.m)
    is_zero = sym.sign == 1 and a0 == 0
    sign = (-sym.sign) ** (n % 2) if n % 2 else 1
    exp = -sym.m * n * (n - 1) // 2 - a0 * n
    return NormalizedJ(Monomial(sign, exp), canonical, is_zero)


@lru_cache(maxsize=4096)
def _expand_canonical(sym, T):
    # 0 <= a < m and not the zero case
    m = sym.m
    x = Monomial(sym.sign, sym.a)
    qx = Monomial(sym.sign, m - sym.a)
    out = pochhammer_infinite(x, T, step=m)
    out = mul(out, pochhammer_infinite(qx, T, step=m))
    return mul(out, pochhammer_infinite(Monomial(1, m), T, step=m))


def expand_j(sym, T):
    """Expand ``j(sign q^a; q^m)`` from the product definition, truncated at ``T``."""
    nj = normalize_j(sym)
    if nj.is_zero:
        return zero(T)
    inner = _expand_canonical(nj.canonical, T - nj.prefactor.exp)
    return inner.mul_monomial(nj.prefactor)


def expand_j_inverse(sym, T):
    """``1 / j(sym)`` truncated at ``T``; raises when the symbol vanishes."""
    nj = normalize_j(sym)
    if nj.is_zero:
        raise ZeroDenominatorError(f"{sym} vanishes identically", where=sym)
    inner = invert(_expand_canonical(nj.canonical, T + nj.prefactor.exp))
    return inner.mul_monomial(Monomial(nj.prefactor.sign, -nj.prefactor.exp))


def triple_product_oracle(sym, T):
    """``sum_n (-1)^n q^(m n(n-1)/2) x^n`` truncated at ``T``.

    Independent of :func:`expand_j`; only used to cross-check it.
    """
    m, a = sym.m, sym.a
    # exponent E(n) = m n^2/2 + (a - m/2) n ; E(n) <= T  <=>  m n^2 + (2a - m) n - 2T <= 0
    b = 2 * a - m
    disc = b * b + 8 * m * T
    terms = {}
    if disc >= 0:
        r = isqrt(disc) + 1
        lo = (-b - r) // (2 * m) - 1
        hi = (-b + r) // (2 * m) + 1
        for n in range(lo, hi + 1):
            e = m * n * (n - 1) // 2 + a * n
            if e <= T:
                s = (-sym.sign) ** (n % 2)
                terms[e] = terms.get(e, 0) + s
    return TruncSeries.from_dict(terms, T)


def j_list(syms, T):
    """Product ``j(x_1) j(x_2) ... j(x_n)`` truncated at ``T``."""
    norms = [normalize_j(s) for s in syms]
    if any(nj.is_zero for nj in norms):
        return zero(T)
    vals = [nj.prefactor.exp for nj in norms]
    total = sum(vals)
    out = one(T)
    for s, v in zip(syms, vals):
        out = mul(out, expand_j(s, T - (total - v)))
    return out


_J_RE = re.compile(r"^\s*j\(\s*([+-])\s*q\^\s*(-?\d+)\s*;\s*q\^\s*(\d+)\s*\)\s*$")
_JBAR_RE = re.compile(r"^\s*Jbar\(\s*(-?\d+)\s*,\s*(\d+)\s*\)\s*$")
_JAM_RE = re.compile(r"^\s*J\(\s*(-?\d+)\s*,\s*(\d+)\s*\)\s*$")
_JM_RE = re.compile(r"^\s*J\(\s*(\d+)\s*\)\s*$")


def parse_jsymbol(text):
    """Parse ``j(s q^a ; q^m)``, ``Jbar(a,m)``, ``J(a,m)`` or ``J(m)``."""
    if mt := _J_RE.match(text):
        return JSymbol(1 if mt[1] == "+" else -1, int(mt[2]), int(mt[3]))
    if mt := _JBAR_RE.match(text):
        return jbar(int(mt[1]), int(mt[2]))
    if mt := _JAM_RE.match(text):
        return J(int(mt[1]), int(mt[2]))
    if mt := _JM_RE.match(text):
        return Jm(int(mt[1]))
    raise ValueError(f"cannot parse theta symbol {text!r}")


def divide_by_j(series, sym):
    """``series / j(sym)``; raises :class:`ZeroDenominatorError` for a vanishing symbol."""
    nj = normalize_j(sym)
    if nj.is_zero:
        raise ZeroDenominatorError(f"{sym} vanishes identically", where=sym)
    T = series.trunc_order - series.valuation - nj.prefactor.exp
    return mul(series, expand_j_inverse(sym, T))
