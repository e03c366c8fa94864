from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qmultisum import (HeckeParams, Monomial, StringParams, andrews_gordon, bn_from_string_function,
                       bn_hecke, bn_multisum, bn_theta, cartan_inverse, hecke_f, mul,
                       pochhammer_infinite, slater_product, string_function)
from qmultisum.errors import DivisibilityError, RangeError
from qmultisum.identities import (MultisumIndex, bn_theta_terms, check_nonnegative_integral,
                                  multisum_indices, slater_residues)


def partitions_with_parts(residues, mod, T):
    p = [1] + [0] * T
    for part in range(1, T + 1):
        if part % mod in residues:
            for n in range(part, T + 1):
                p[n] += p[n - part]
    return p


def rr_sum(T, shift):
    # sum_n q^(n^2 + shift n) / (q)_n, summed directly
    out = [0] * (T + 1)
    n = 0
    while n * n + shift * n <= T:
        w = [0] * (T + 1)
        w[n * n + shift * n] = 1
        for j in range(1, n + 1):
            for e in range(j, T + 1):
                w[e] += w[e - j]
        out = [a + b for a, b in zip(out, w)]
        n += 1
    return out


def test_b2_first_terms():
    assert bn_multisum(2, 8).dense() == [1, 0, 1, 1, 2, 2, 3, 3, 5]


def test_slater_product():
    assert slater_residues() == [2, 3, 4, 5, 11, 12, 13, 14]
    s = slater_product(200)
    assert s.coeff(0) == 1
    assert s.dense() == partitions_with_parts({2, 3, 4, 5, 11, 12, 13, 14}, 16, 200)
    assert bn_multisum(2, 200) == s
    assert bn_theta(2, 200) == s


@pytest.mark.parametrize("N", range(2, 11))
def test_constant_term_is_one(N):
    s = bn_multisum(N, 12)
    assert s.coeff(0) == 1
    check_nonnegative_integral(s)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_three_routes_agree(N):
    m = bn_multisum(N, 60)
    assert m == bn_theta(N, 60)
    assert m == bn_hecke(N, 0, 60)
    check_nonnegative_integral(m)


def test_hecke_route_is_independent_of_m():
    assert bn_hecke(2, 4, 40) == bn_hecke(2, 0, 40)
    assert bn_hecke(3, 6, 40) == bn_multisum(3, 40)
    assert bn_hecke(2, -8, 30) == bn_multisum(2, 30)
    with pytest.raises(DivisibilityError):
        bn_hecke(3, 2, 20)


@pytest.mark.parametrize("N,T", [(3, 30), (4, 25)])
def test_multisum_search_bound_is_sound(N, T):
    assert bn_multisum(N, T, bound_factor=2) == bn_multisum(N, T)


def test_multisum_index_exponent():
    for idx in multisum_indices(4, 20):
        assert idx.exponent() == idx.exponent_from_k()
        assert idx.exponent() <= 20
        assert idx.exponent().denominator == 1
        K = idx.K
        assert all(a <= b for a, b in zip(K, K[1:]))


@given(st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_exponent_equals_pairwise_form(k):
    K, acc = [], 0
    for x in k:
        acc += x
        K.append(acc)
    idx = MultisumIndex(tuple(K), tuple(k))
    N = len(K) + 1
    full = [0] + K
    pairs = sum((full[j] - full[i]) ** 2 for i in range(N) for j in range(i + 1, N))
    assert idx.exponent() == Fraction(pairs, N)


def test_theta_formula_has_n_squared_terms():
    for N in (2, 5, 9):
        assert len(bn_theta_terms(N)) == N * N


def test_cartan_inverse():
    for N in (2, 3, 5):
        Ci = cartan_inverse(N)
        C = [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(N - 1)]
             for i in range(N - 1)]
        prod = [[sum(C[i][k] * Ci[k][j] for k in range(N - 1)) for j in range(N - 1)]
                for i in range(N - 1)]
        assert prod == [[int(i == j) for j in range(N - 1)] for i in range(N - 1)]


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("mult", [0, 1])
def test_string_function_bridge(N, mult):
    m = 2 * N * mult
    assert bn_from_string_function(N, m, 40) == bn_multisum(N, 40)


@pytest.mark.parametrize("N,m", [(2, 0), (2, 2), (2, 4), (3, 4), (3, 6), (4, 2)])
def test_string_function_hecke_relation(N, m):
    # (q)_oo^3 C^N_{m,0} = f_{1,N+1,1}(q^(1+m/2), q^(1-m/2))
    T = 20
    D = 4 * N
    C = string_function(StringParams(N, m, 0), T)
    e = pochhammer_infinite(Monomial(1, 1), T + 1)
    lhs = mul(C, (e ** 3).rescale(D))
    f = hecke_f(HeckeParams(1, N + 1, 1, Monomial(1, 1 + m // 2), Monomial(1, 1 - m // 2)), T + 2)
    rhs = f.rescale(D)
    cut = min(lhs.trunc_order, rhs.trunc_order)
    assert lhs.truncate(cut) == rhs.truncate(cut)


def test_string_function_range():
    with pytest.raises(RangeError):
        string_function(StringParams(1, 0, 0), 5)
    with pytest.raises(RangeError):
        string_function(StringParams(3, 0, 5), 5)


def test_rogers_ramanujan():
    T = 100
    lhs, rhs = andrews_gordon(2, 2, T)
    assert lhs == rhs
    assert lhs.dense() == rr_sum(T, 0)
    lhs, rhs = andrews_gordon(2, 1, T)
    assert lhs == rhs
    assert lhs.dense() == rr_sum(T, 1)
    assert lhs.coeff(0) == rhs.coeff(0) == 1


@pytest.mark.parametrize("k,i", [(k, i) for k in (2, 3, 4) for i in range(1, k + 1)])
def test_andrews_gordon(k, i):
    lhs, rhs = andrews_gordon(k, i, 100 if k < 4 else 60)
    assert lhs == rhs


def test_andrews_gordon_range():
    with pytest.raises(RangeError):
        andrews_gordon(2, 3, 10)
    with pytest.raises(RangeError):
        andrews_gordon(1, 1, 10)
