"""Truncated Laurent series in q with exact rational coefficients.

A :class:`TruncSeries` stores the coefficients of a Laurent series

    c_0 q^{e/D} + c_1 q^{(e+1)/D} + ...    (e = min_exp, D = scale)

together with its truncation order ``T``: the series is known modulo
``q^{(T+1)/D}``.  Coefficients are Python ``int`` whenever they are integral
and :class:`fractions.Fraction` otherwise, which keeps the common integer
case fast while staying exact.

Arithmetic never invents precision.  The truncation order of a result is the
one that is provably correct given the operands:

    add:    min(Ta, Tb)
    mul:    min(Ta + vb, Tb + va)        (v = valuation)
    invert: Ta - 2 va

Values are immutable; all operations return new series.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational

from .errors import DivergentProductError, ZeroDivisorError, ZeroFactorError

__all__ = [
    "Monomial",
    "TruncSeries",
    "add",
    "mul",
    "invert",
    "pochhammer_finite",
    "pochhammer_infinite",
    "monomial_series",
    "one",
    "zero",
]


def _norm(c):
    """Return ``c`` as an int when integral, else as a Fraction."""
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        c = Fraction(c.numerator, c.denominator)
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        return _norm(Fraction(c))
    raise TypeError(f"coefficient {c!r} is not an exact rational")


@dataclass(frozen=True)
class Monomial:
    """The signed power ``sign * q^exp`` (exponent in units of 1/scale)."""

    sign: int = 1
    exp: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return Monomial(self.sign * other.sign, self.exp + other.exp)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Monomial):
            return Monomial(self.sign * other.sign, self.exp - other.exp)
        return NotImplemented

    def __pow__(self, k):
        k = int(k)
        return Monomial(self.sign if k % 2 else 1, self.exp * k)

    def __neg__(self):
        return Monomial(-self.sign, self.exp)

    def __str__(self):
        s = "-" if self.sign < 0 else "+"
        return f"{s}q^{self.exp}"


class TruncSeries:
    """Exact truncated Laurent series; see the module docstring."""

    __slots__ = ("scale", "min_exp", "coeffs", "trunc_order")

    def __init__(self, coeffs=(), min_exp=0, trunc_order=None, scale=1):
        scale = int(scale)
        if scale < 1:
            raise ValueError("scale must be a positive integer")
        cs = [_norm(c) for c in coeffs]
        if trunc_order is None:
            trunc_order = min_exp + len(cs) - 1
        trunc_order = int(trunc_order)
        keep = trunc_order - min_exp + 1
        if keep < len(cs):
            cs = cs[: max(keep, 0)]
        lo = 0
        while lo < len(cs) and cs[lo] == 0:
            lo += 1
        hi = len(cs)
        while hi > lo and cs[hi - 1] == 0:
            hi -= 1
        self.scale = scale
        self.trunc_order = trunc_order
        if lo == hi:
            self.coeffs = ()
            self.min_exp = trunc_order + 1
        else:
            self.coeffs = tuple(cs[lo:hi])
            self.min_exp = int(min_exp) + lo

    # -- construction -------------------------------------------------

    @classmethod
    def from_dict(cls, terms, trunc_order, scale=1):
        """Build from a mapping ``exponent -> coefficient``."""
        terms = {e: c for e, c in terms.items() if e <= trunc_order and c != 0}
        if not terms:
            return cls((), 0, trunc_order, scale)
        lo = min(terms)
        dense = [0] * (max(terms) - lo + 1)
        for e, c in terms.items():
            dense[e - lo] = c
        return cls(dense, lo, trunc_order, scale)

    # -- inspection ---------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    @property
    def valuation(self):
        """Exponent of the leading term (``T + 1`` for the zero series)."""
        return self.min_exp

    @property
    def max_exp(self):
        return self.min_exp + len(self.coeffs) - 1

    def coeff(self, e):
        if e > self.trunc_order:
            raise ValueError(f"q^{e} lies beyond the truncation order {self.trunc_order}")
        i = e - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def dense(self, start=0, stop=None):
        """Coefficients for exponents ``start..stop`` inclusive (default: up to T)."""
        if stop is None:
            stop = self.trunc_order
        return [self.coeff(e) for e in range(start, stop + 1)]

    def items(self):
        """Yield ``(exponent, coefficient)`` for every nonzero term."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.min_exp + i, c

    def is_integral(self):
        return all(type(c) is int for c in self.coeffs)

    # -- scale handling -----------------------------------------------

    def rescale(self, k):
        """Re-express with scale ``k * D``; the represented series is unchanged."""
        k = int(k)
        if k == 1:
            return self
        dense = [0] * ((len(self.coeffs) - 1) * k + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            dense[i * k] = c
        return TruncSeries(dense, self.min_exp * k, self.trunc_order * k + (k - 1),
                           self.scale * k)

    def to_scale(self, scale):
        """Re-express with another scale; raises if exponents do not fit."""
        if scale == self.scale:
            return self
        if scale % self.scale == 0:
            return self.rescale(scale // self.scale)
        if self.scale % scale:
            return self.to_scale(scale * self.scale // gcd(scale, self.scale)).to_scale(scale)
        k = self.scale // scale
        terms = {}
        for e, c in self.items():
            if e % k:
                raise ValueError(f"exponent {e}/{self.scale} is not a multiple of 1/{scale}")
            terms[e // k] = c
        return TruncSeries.from_dict(terms, (self.trunc_order + 1) // k - 1, scale)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.min_exp, self.trunc_order, self.scale)

    def __sub__(self, other):
        return add(self, -_coerce(other, self))

    def __rsub__(self, other):
        return add(_coerce(other, self), -self)

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return self.mul_monomial(other)
        if isinstance(other, (int, Rational)):
            return self.scale_by(other)
        if isinstance(other, TruncSeries):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisorError("division by the scalar 0")
            return self.scale_by(Fraction(1) / other)
        if isinstance(other, Monomial):
            return self.mul_monomial(Monomial(other.sign, -other.exp))
        if isinstance(other, TruncSeries):
            return mul(self, invert(other))
        return NotImplemented

    def __rtruediv__(self, other):
        return _coerce(other, self) / self

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return invert(self) ** (-k)
        if k == 0:
            return one(self.trunc_order - self.min_exp, self.scale)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def scale_by(self, c):
        c = _norm(c)
        return TruncSeries([c * x for x in self.coeffs], self.min_exp, self.trunc_order,
                           self.scale)

    def shift(self, e):
        """Multiply by ``q^(e/D)``."""
        return TruncSeries(self.coeffs, self.min_exp + e, self.trunc_order + e, self.scale)

    def mul_monomial(self, m):
        s = self.shift(m.exp)
        return -s if m.sign < 0 else s

    def truncate(self, T):
        if T > self.trunc_order:
            raise ValueError(f"cannot raise truncation order {self.trunc_order} to {T}")
        return TruncSeries(self.coeffs, self.min_exp, T, self.scale)

    # -- comparison ---------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.scale == other.scale and self.trunc_order == other.trunc_order
                and self.min_exp == other.min_exp and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.scale, self.trunc_order, self.min_exp, self.coeffs))

    def agrees_with(self, other):
        """True when both series coincide up to the smaller truncation order."""
        return (self - other).is_zero()

    def first_difference(self, other):
        """``(exponent, self_coeff, other_coeff)`` of the first mismatch, or None."""
        d = self - other
        if d.is_zero():
            return None
        e = d.min_exp
        return e, self.coeff(e), other.coeff(e)

    # -- evaluation and I/O -------------------------------------------

    def evaluate(self, x, **kw):
        """Sum ``c_e x^(e/D)`` over the stored terms with mpmath."""
        import mpmath

        x = mpmath.mpf(x)
        root = x ** (mpmath.mpf(1) / self.scale) if self.scale > 1 else x
        total = mpmath.mpf(0)
        for e, c in self.items():
            if isinstance(c, Fraction):
                c = mpmath.mpf(c.numerator) / c.denominator
            total += c * root ** e
        return total

    def to_json_dict(self):
        # exact strings: "5" or "-3/2"
        cs = [str(c) for c in self.coeffs]
        return {"scale": self.scale, "min_exp": self.min_exp,
                "trunc_order": self.trunc_order, "coeffs": cs}

    def to_json(self, **kw):
        return json.dumps(self.to_json_dict(), **kw)

    @classmethod
    def from_json_dict(cls, d):
        return cls([Fraction(c) for c in d["coeffs"]], d["min_exp"], d["trunc_order"],
                   d.get("scale", 1))

    @classmethod
    def from_json(cls, text):
        return cls.from_json_dict(json.loads(text))

    def __repr__(self):
        return (f"TruncSeries({list(self.coeffs)!r}, min_exp={self.min_exp}, "
                f"trunc_order={self.trunc_order}, scale={self.scale})")

    def __str__(self):
        parts = []
        for e, c in self.items():
            ex = f"{e}/{self.scale}" if self.scale > 1 else str(e)
            parts.append(f"{c}*q^{ex}")
        tail = f"O(q^{self.trunc_order + 1}" + (f"/{self.scale})" if self.scale > 1 else ")")
        return " + ".join(parts + [tail])


def _coerce(x, like):
    if isinstance(x, TruncSeries):
        return x
    if isinstance(x, (int, Rational)):
        return TruncSeries([x], 0, like.trunc_order, like.scale)
    raise TypeError(f"cannot combine {type(x).__name__} with TruncSeries")


def _common_scale(a, b):
    if a.scale == b.scale:
        return a, b
    lcm = a.scale * b.scale // gcd(a.scale, b.scale)
    return a.to_scale(lcm), b.to_scale(lcm)


def zero(T, scale=1):
    return TruncSeries((), 0, T, scale)


def one(T, scale=1):
    return TruncSeries([1], 0, T, scale)


def monomial_series(m, T, scale=1):
    """The monomial ``m`` as a series truncated at ``T``."""
    return TruncSeries([m.sign], m.exp, T, scale)


def add(a, b):
    """Coefficientwise sum; truncation order is the smaller of the two."""
    a, b = _common_scale(a, b)
    T = min(a.trunc_order, b.trunc_order)
    if a.is_zero():
        return b.truncate(T)
    if b.is_zero():
        return a.truncate(T)
    lo = min(a.min_exp, b.min_exp)
    hi = min(max(a.max_exp, b.max_exp), T)
    if hi < lo:
        return zero(T, a.scale)
    out = [0] * (hi - lo + 1)
    for s in (a, b):
        off = s.min_exp - lo
        for i, c in enumerate(s.coeffs):
            j = off + i
            if j > hi - lo:
                break
            out[j] += c
    return TruncSeries(out, lo, T, a.scale)


def mul(a, b):
    """Cauchy product, truncated at ``min(Ta + vb, Tb + va)``."""
    a, b = _common_scale(a, b)
    T = min(a.trunc_order + b.valuation, b.trunc_order + a.valuation)
    if a.is_zero() or b.is_zero():
        return zero(T, a.scale)
    lo = a.min_exp + b.min_exp
    n = T - lo + 1
    if n <= 0:
        return zero(T, a.scale)
    ac = a.coeffs[:n]
    bc = b.coeffs[:n]
    if len(ac) > len(bc):
        ac, bc = bc, ac
    out = [0] * min(n, len(ac) + len(bc) - 1)
    nb = len(bc)
    for i, x in enumerate(ac):
        if not x:
            continue
        m = min(nb, n - i)
        for j in range(m):
            y = bc[j]
            if y:
                out[i + j] += x * y
    return TruncSeries(out, lo, T, a.scale)


def invert(a):
    """Multiplicative inverse modulo the truncation order.

    ``a * invert(a) == 1`` up to ``a.trunc_order``; the inverse has valuation
    ``-a.min_exp``.
    """
    if a.is_zero():
        raise ZeroDivisorError(
            f"series vanishes identically up to q^{a.trunc_order}; cannot invert")
    v = a.min_exp
    n = a.trunc_order - v + 1  # number of known relative coefficients
    c = a.coeffs
    c0 = c[0]
    inv0 = _norm(Fraction(1) / c0) if c0 not in (1, -1) else c0
    out = [inv0]
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, len(c) - 1) + 1):
            ci = c[i]
            if ci:
                s += ci * out[k - i]
        out.append(_norm(-s * inv0) if s else 0)
    return TruncSeries(out, -v, a.trunc_order - 2 * v, a.scale)


def _mul_binomial_inplace(cs, coef, e):
    """cs <- cs * (1 + coef*q^e) for a dense list starting at q^0, e > 0."""
    for k in range(len(cs) - 1, e - 1, -1):
        x = cs[k - e]
        if x:
            cs[k] += coef * x


def _div_binomial_inplace(cs, coef, e):
    """cs <- cs / (1 - coef*q^e) for a dense list starting at q^0, e > 0."""
    for k in range(e, len(cs)):
        x = cs[k - e]
        if x:
            cs[k] += coef * x


def pochhammer_finite(a, n, T, step=1):
    """``(a; q^step)_n`` truncated at ``T``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if T < 0:
        return zero(T)
    const = 1
    cs = [1] + [0] * T
    for k in range(n):
        e = a.exp + k * step
        if e == 0:
            const *= 1 - a.sign
        elif e > 0:
            if e <= T:
                _mul_binomial_inplace(cs, -a.sign, e)
        else:
            raise ValueError("pochhammer_finite with negative exponents is not supported")
    return TruncSeries(cs, 0, T).scale_by(const)


def pochhammer_infinite(a, T, step=1):
    """``(a; q^step)_oo`` truncated at ``T``.

    Factors with exponent beyond ``T`` are 1 modulo the truncation and are
    skipped, so the product is finite and exact.
    """
    if a.exp < 0:
        raise DivergentProductError(f"(a; q)_oo with a = {a} has factors that blow up")
    if a.exp == 0 and a.sign == 1:
        raise ZeroFactorError("(1; q)_oo contains the factor 1 - 1")
    if step < 1:
        raise DivergentProductError("the product base must be a positive power of q")
    if T < 0:
        return zero(T)
    const = 1
    cs = [1] + [0] * T
    e = a.exp
    while e <= T:
        if e == 0:
            const *= 2  # a = -1
        else:
            _mul_binomial_inplace(cs, -a.sign, e)
        e += step
    return TruncSeries(cs, 0, T).scale_by(const)


def inverse_pochhammer_finite(n, T, step=1):
    """``1 / (q^step; q^step)_n`` truncated at ``T``, built by repeated geometric division."""
    cs = [1] + [0] * max(T, -1)
    for k in range(1, n + 1):
        e = k * step
        if e > T:
            break
        _div_binomial_inplace(cs, 1, e)
    return TruncSeries(cs, 0, T)
