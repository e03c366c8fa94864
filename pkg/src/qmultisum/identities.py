"""The finite-chain-ring multisum B_N(q) and the identities around it.

Three independent routes to B_N(q):

* :func:`bn_multisum` -- brute-force enumeration of the (N-1)-fold sum;
* :func:`bn_hecke`    -- q^(-m^2/4N) f_{1,N+1,1}(q^(1+m/2), q^(1-m/2), q) / (q)_oo^2;
* :func:`bn_theta`    -- the double sum of N^2 theta quotients.

Plus the level-N string function of A_1^(1), the Slater product for B_2 and
the Andrews-Gordon identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisibilityError, QSeriesError, RangeError
from .hecke import HeckeParams, hecke_f, theta_quotient
from .series import (
    Monomial,
    TruncSeries,
    _div_binomial_inplace,
    invert,
    mul,
    pochhammer_infinite,
    zero,
)
from .theta import JSymbol, Jm, expand_j, jbar

__all__ = [
    "IntegralityError",
    "MultisumIndex",
    "StringParams",
    "cartan_inverse",
    "multisum_indices",
    "bn_multisum",
    "bn_theta",
    "bn_theta_terms",
    "bn_hecke",
    "string_function",
    "slater_product",
    "slater_residues",
    "andrews_gordon",
    "check_nonnegative_integral",
    "bn_from_string_function",
]


class IntegralityError(QSeriesError):
    """A series that must have nonnegative integer coefficients does not."""


def check_nonnegative_integral(s, what="series"):
    for e, c in s.items():
        if type(c) is not int or c < 0:
            raise IntegralityError(f"{what}: coefficient of q^{e} is {c}")
    return s


# -- the multisum ---------------------------------------------------------


@dataclass(frozen=True)
class MultisumIndex:
    """Nondecreasing ``K = (K_2, ..., K_N)`` and its differences ``k``."""

    K: tuple
    k: tuple

    @property
    def N(self):
        return len(self.K) + 1

    def exponent(self):
        """``sum K_i^2 - (sum K_i)^2 / N`` (a Fraction unless N divides sum K)."""
        S = sum(self.K)
        return Fraction(sum(x * x for x in self.K)) - Fraction(S * S, self.N)

    def exponent_from_k(self):
        """The same exponent rebuilt from ``k`` via ``K_i = k_2 + ... + k_i``."""
        K, acc = [], 0
        for kj in self.k:
            acc += kj
            K.append(acc)
        S = sum(K)
        return Fraction(sum(x * x for x in K)) - Fraction(S * S, self.N)


def _multisum_dfs(N, T, visit, bound_factor=1, stats=None):
    """Enumerate nondecreasing ``0 = K_1 <= K_2 <= ... <= K_N`` with exponent <= T.

    With K_1 = 0 the exponent is ``(1/N) sum_{i<j} (K_j - K_i)^2``.  Every
    pair term is nonnegative and a later K is at least the current one, so

        N * exponent >= sum_{i<j<=c} (K_j-K_i)^2 + (N-c) * sum_{i<=c} (K_c-K_i)^2

    bounds every completion of a prefix of length c.  The prefix is also cut
    once K_c exceeds sqrt(T N (N-1)), the Cauchy-Schwarz bound on sum K.
    ``bound_factor`` loosens both cuts; it exists to test their soundness.
    """
    budget = N * T * bound_factor
    # sum K <= sqrt(T N (N-1)), and K_N <= sum K
    kmax_sq = T * N * (N - 1) * bound_factor * bound_factor
    Ks = [0]

    nodes = 0

    def rec(pair_sum, parent):
        nonlocal nodes
        nodes += 1
        c = len(Ks)
        cur = Ks[-1]
        if c == N:
            S = sum(Ks)
            if S % N == 0:
                Q = (N * sum(x * x for x in Ks) - S * S) // N
                if Q <= T:
                    visit(tuple(Ks[1:]), Q, parent)
            return
        v = cur
        while v * v <= kmax_sq or v == 0:
            add = 0
            for x in Ks:
                add += (v - x) * (v - x)
            ps = pair_sum + add
            if ps + (N - c - 1) * add > budget:
                break
            Ks.append(v)
            rec(ps, (parent, v - cur))
            Ks.pop()
            v += 1

    rec(0, None)
    if stats is not None:
        stats["nodes"] = stats.get("nodes", 0) + nodes


def multisum_indices(N, T, bound_factor=1):
    """All :class:`MultisumIndex` of B_N with exponent <= T (divisibility enforced)."""
    out = []

    def visit(K, Q, _):
        k = tuple(b - a for a, b in zip((0,) + K[:-1], K))
        out.append(MultisumIndex(K, k))

    _multisum_dfs(N, T, visit, bound_factor)
    return out


def bn_multisum(N, T, bound_factor=1, stats=None):
    """B_N(q) by direct enumeration of the (N-1)-fold sum, truncated at ``T``.

    ``stats``, if given, receives the number of search nodes and of summed
    indices (``nodes``, ``leaves``).
    """
    if N < 2:
        raise RangeError(f"B_N needs N >= 2, got {N}")
    if T < 0:
        return zero(T)
    total = [0] * (T + 1)

    leaves = 0

    def visit(K, Q, path):
        nonlocal leaves
        leaves += 1
        L = T - Q + 1
        w = [1] + [0] * (L - 1)
        while path is not None:
            path, kj = path
            for j in range(1, kj + 1):
                if j >= L:
                    break
                _div_binomial_inplace(w, 1, j)
        for i, c in enumerate(w):
            total[Q + i] += c

    _multisum_dfs(N, T, visit, bound_factor, stats)
    if stats is not None:
        stats["leaves"] = stats.get("leaves", 0) + leaves
    return TruncSeries(total, 0, T)


# -- the theta-quotient formula --------------------------------------------


@dataclass(frozen=True)
class BnThetaTerm:
    r: int
    s: int
    mono: Monomial
    num: tuple
    den: tuple


def bn_theta_terms(N):
    """The ``N^2`` summands of the theta formula, as symbolic quotients."""
    M = N * N * (N + 2)
    sgn = (-1) ** (N % 2)
    half = N * (N + 3) // 2
    out = []
    for r in range(N):
        for s in range(N):
            e = (r * (r - 1) // 2 + (s + 1) * s // 2 + r * (s + 1) * (N + 1) + r + s + 1)
            mono = Monomial((-1) ** ((r + s + 1) % 2), e)
            num = (Jm(M), Jm(M), Jm(M),
                   JSymbol(-1, N * (s - r), N * N),
                   JSymbol(1, N * (N + 2) * (r + s) + N * (N + 3), M))
            den = (JSymbol(sgn, N * (N + 2) * r + half, M),
                   JSymbol(sgn, N * (N + 2) * s + half, M))
            out.append(BnThetaTerm(r, s, mono, num, den))
    return out


def bn_theta(N, T):
    """B_N(q) from the sum of N^2 theta quotients, truncated at ``T``."""
    if N < 2:
        raise RangeError(f"B_N needs N >= 2, got {N}")
    total = zero(T)
    for term in bn_theta_terms(N):
        total = total + theta_quotient(term.mono, term.num, term.den, T)
    pre = mul(pochhammer_infinite(Monomial(1, 1), T) ** 2,
              _expand_jbar(N * (N + 2), T))
    out = mul(total, invert(pre))
    return check_nonnegative_integral(out, f"bn_theta({N})")


def _expand_jbar(m, T):
    return expand_j(jbar(0, m), T)


# -- the Hecke-series route ------------------------------------------------


def bn_hecke(N, m, T):
    """``q^(-m^2/4N) f_{1,N+1,1}(q^(1+m/2), q^(1-m/2), q) / (q)_oo^2``.

    Requires ``2N | m``.  The prefactor is applied at exponent scale 4N and
    the result is collapsed back to integral exponents.
    """
    if N < 2:
        raise RangeError(f"B_N needs N >= 2, got {N}")
    if m % (2 * N):
        raise DivisibilityError(f"bn_hecke needs 2N | m; got N={N}, m={m}")
    D = 4 * N
    shift = m * m  # in units of 1/D
    pad = -(-shift // D)
    h = m // 2
    f = hecke_f(HeckeParams(1, N + 1, 1, Monomial(1, 1 + h), Monomial(1, 1 - h)), T + pad)
    qinf = pochhammer_infinite(Monomial(1, 1), T + pad)
    g = mul(f, invert(mul(qinf, qinf)))
    out = g.rescale(D).shift(-shift).to_scale(1).truncate(T)
    return check_nonnegative_integral(out, f"bn_hecke({N}, {m})")


# -- string functions ------------------------------------------------------


@dataclass(frozen=True)
class StringParams:
    N: int
    m: int
    ell: int

    def cartan_inverse(self):
        return cartan_inverse(self.N)


def cartan_inverse(N):
    """``(C^-1)_{ij} = min(i, j) - i j / N`` for the A_{N-1} Cartan matrix."""
    return [[Fraction(min(i, j)) - Fraction(i * j, N) for j in range(1, N)]
            for i in range(1, N)]


def _ball(dim, r2):
    """Nonnegative integer vectors of length ``dim`` with squared norm <= r2."""
    vec = [0] * dim

    def rec(i, left):
        if i == dim:
            yield tuple(vec)
            return
        v = 0
        while v * v <= left:
            vec[i] = v
            yield from rec(i + 1, left - v * v)
            v += 1
        vec[i] = 0

    yield from rec(0, r2)


def string_function(sp, T):
    """Level-N string function ``C^N_{m,ell}(q)`` at exponent scale ``4N``.

    ``T`` counts whole powers of q: the result is known modulo q^(T+1), i.e.
    its ``trunc_order`` is ``4N (T+1) - 1``.
    """
    N, m, ell = sp.N, sp.m, sp.ell
    if N < 2:
        raise RangeError(f"string functions need level N >= 2, got {N}")
    if not 0 <= ell <= N:
        raise RangeError(f"ell must lie in [0, N], got {ell}")
    D = 4 * N
    base = m * m - ell * ell  # units of 1/D
    dim = N - 1
    # n C^-1 n >= |n|^2 / 4 and (C^-1 n)_ell <= (N/4) sum n_j <= (N/4) sqrt(N-1) |n|
    mu = Fraction(N, 4) * (dim ** 0.5)
    limit = T + 1 - Fraction(base, D)
    R = float(2 * mu + 2 * (mu * mu + max(limit, 0)) ** 0.5) + 1
    classes = {}
    for n in _ball(dim, int(R * R) + 1):
        B = sum((j + 1) * nj for j, nj in enumerate(n))
        if (m + ell - 2 * B) % (2 * N):
            continue
        A = 0
        for i in range(dim):
            if n[i]:
                for j in range(dim):
                    A += n[i] * n[j] * min(i + 1, j + 1)
        Lell = sum(min(ell, j + 1) * nj for j, nj in enumerate(n)) if 0 < ell < N else 0
        lin = N * Lell - ell * B if 0 < ell < N else 0
        E = base + 4 * (N * A - B * B) - 4 * lin  # units of 1/D
        whole, rho = divmod(E, D)
        if whole > T:
            continue
        classes.setdefault(rho, []).append((whole, n))
    out = zero(D * (T + 1) - 1, D)
    qinv = invert(pochhammer_infinite(Monomial(1, 1), T + 1))
    for rho, entries in sorted(classes.items()):
        lo = min(w for w, _ in entries)
        Tc = T
        dense = [0] * (Tc - lo + 1)
        for whole, n in entries:
            L = Tc - whole + 1
            w = [1] + [0] * (L - 1)
            for nj in n:
                for j in range(1, min(nj, L - 1) + 1):
                    _div_binomial_inplace(w, 1, j)
            for i, c in enumerate(w):
                dense[whole - lo + i] += c
        part = mul(TruncSeries(dense, lo, Tc), qinv)
        part = part.rescale(D).shift(rho)
        out = out + part.truncate(part.trunc_order)
    return out.truncate(D * (T + 1) - 1)


# -- Slater and Andrews-Gordon products ------------------------------------


def slater_residues():
    return sorted({r % 16 for r in (2, 3, 4, 5, -2, -3, -4, -5)})


def _product_over_residues(mod, residues, T):
    cs = [1] + [0] * T
    for s in range(1, T + 1):
        if s % mod in residues:
            _div_binomial_inplace(cs, 1, s)
    return TruncSeries(cs, 0, T)


def slater_product(T):
    """``prod 1/(1 - q^s)`` over ``s = +-2, +-3, +-4, +-5 (mod 16)``."""
    return _product_over_residues(16, set(slater_residues()), T)


def andrews_gordon(k, i, T):
    """Both sides of the Andrews-Gordon identity for ``(k, i)``.

    lhs: sum over n_1..n_{k-1} >= 0 of
         q^(N_1^2 + ... + N_{k-1}^2 + N_i + ... + N_{k-1}) / ((q)_{n_1} ... (q)_{n_{k-1}})
         with N_j = n_j + ... + n_{k-1};
    rhs: prod over s != 0, +-i (mod 2k+1) of 1/(1 - q^s).
    """
    if k < 2 or not 1 <= i <= k:
        raise RangeError(f"Andrews-Gordon needs k >= 2 and 1 <= i <= k; got k={k}, i={i}")
    mod = 2 * k + 1
    excluded = {0, i % mod, (-i) % mod}
    rhs = _product_over_residues(mod, set(range(mod)) - excluded, T)

    total = [0] * (T + 1)
    # enumerate N_{k-1} <= N_{k-2} <= ... <= N_1, index j running downward
    Ns = {}

    def rec(j, prev, partial):
        if j == 0:
            L = T - partial + 1
            w = [1] + [0] * (L - 1)
            for jj in range(1, k):
                nj = Ns[jj] - Ns.get(jj + 1, 0)
                for t in range(1, min(nj, L - 1) + 1):
                    _div_binomial_inplace(w, 1, t)
            for idx, c in enumerate(w):
                total[partial + idx] += c
            return
        v = prev
        while True:
            e = partial + v * v + (v if j >= i else 0)
            if e > T:
                break
            Ns[j] = v
            rec(j - 1, v, e)
            v += 1
        Ns.pop(j, None)

    rec(k - 1, 0, 0)
    return TruncSeries(total, 0, T), rhs


def bn_from_string_function(N, m, T):
    """``q^(-m^2/4N) (q)_oo C^N_{m,0}(q)``, collapsed to integral exponents."""
    if m % (2 * N):
        raise DivisibilityError(f"the string-function bridge needs 2N | m; got N={N}, m={m}")
    D = 4 * N
    pad = -(-m * m // D)
    C = string_function(StringParams(N, m, 0), T + pad)
    qinf = pochhammer_infinite(Monomial(1, 1), T + pad + 1).rescale(D)
    return mul(C, qinf).shift(-m * m).to_scale(1).truncate(T)
