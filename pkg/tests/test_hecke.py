import pytest
from hypothesis import given, strategies as st

from qmultisum import (AppellArgs, HeckeParams, Monomial, appell_m, appell_pole_free,
                       bn_multisum, expand_j_inverse, find_generic_monomials, hecke_f, hecke_g,
                       invert, jbar, mul, pochhammer_infinite, theta_block, theta_quotient,
                       verify_hm)
from qmultisum.errors import PoleError
from qmultisum.hecke import MINUS_ONE, hecke_g_terms, theta_block_terms

q = Monomial(1, 1)


def qp(e, sign=1):
    return Monomial(sign, e)


monos = st.builds(Monomial, st.sampled_from([1, -1]), st.integers(1, 4))


def test_f131_constant_term_and_b2():
    T = 40
    f = hecke_f(HeckeParams(1, 3, 1, q, q), T)
    assert f.coeff(0) == 1
    e = pochhammer_infinite(q, T)
    assert mul(f, invert(mul(e, e))) == bn_multisum(2, T)


@given(st.integers(1, 3), st.integers(0, 5), st.integers(1, 3), monos, monos)
def test_f_relabel_symmetry(a, b, c, x, y):
    T = 30
    assert hecke_f(HeckeParams(a, b, c, x, y), T) == hecke_f(HeckeParams(c, b, a, y, x), T)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_f_summation_radius_is_sound(N):
    p = HeckeParams(1, N + 1, 1, q, q)
    assert hecke_f(p, 50, slack=5) == hecke_f(p, 50)


def test_f_generic_radius_soundness():
    for n, pp in [(1, 2), (1, 3), (2, 3)]:
        x, y = find_generic_monomials(n, pp)
        p = HeckeParams(n, n + pp, n, x, y)
        assert hecke_f(p, 40, slack=5) == hecke_f(p, 40)


def test_appell_half_integer_coefficients():
    N = 2
    m = appell_m(AppellArgs(qp(N * (N + 1) // 2), N * (N + 2), MINUS_ONE), 60)
    assert not m.is_integral()
    assert m.scale_by(2).is_integral()


def test_appell_pole():
    args = AppellArgs(q, 4, qp(8))
    assert not appell_pole_free(args)
    with pytest.raises(PoleError):
        appell_m(args, 20)
    # x z = q^4 is also a pole
    with pytest.raises(PoleError):
        appell_m(AppellArgs(qp(1), 4, qp(3)), 20)


@pytest.mark.parametrize("N", range(2, 7))
def test_g_vanishes_by_theta_prefactors(N):
    p = HeckeParams(1, N + 1, 1, q, q)
    terms = hecke_g_terms(p, MINUS_ONE, MINUS_ONE)
    assert all(t.theta_vanishes for t in terms)
    assert all(t.pole_free for t in terms)
    assert hecke_g(p, MINUS_ONE, MINUS_ONE, 50).is_zero()


@pytest.mark.parametrize("N", range(2, 9))
def test_modular_pole_condition(N):
    mod = N * (N + 2)
    for m in range(0, 4 * mod, 2 * N):
        lhs = m * (N + 2) // 2
        assert (lhs - N * (N + 1) // 2) % mod != 0
        assert (lhs + N * (N + 1) // 2) % mod != 0


def test_theta_block_term_count():
    for n, p in [(1, 2), (1, 5), (2, 3), (3, 2)]:
        x, y = find_generic_monomials(n, p)
        assert len(theta_block_terms(n, p, x, y)) == p * p


def test_theta_block_fractional_shifts_are_integral():
    # (n, p) = (2, 3): every half-integer shift must combine into integer powers
    x, y = find_generic_monomials(2, 3)
    assert x == qp(1, -1) and y == qp(2, -1)
    th = theta_block(2, 3, x, y, 40)
    assert th.is_integral()


def test_theta_quotient_zero_numerator():
    from qmultisum import J
    assert theta_quotient(Monomial(1, 0), (J(3, 3),), (J(1, 3),), 20).is_zero()


@pytest.mark.parametrize("n,p,x,y", [
    (1, 2, qp(2), qp(3)),
    (1, 3, qp(2), qp(3)),
])
def test_hm_identity(n, p, x, y):
    ok, diff = verify_hm(n, p, x, y, 40)
    assert ok, diff


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_hm_identity_at_x_y_equal_q(N):
    ok, diff = verify_hm(1, N, q, q, 50)
    assert ok, diff


@pytest.mark.parametrize("n,p", [(2, 3), (1, 2), (2, 1), (3, 2)])
def test_hm_identity_generic(n, p):
    x, y = find_generic_monomials(n, p)
    ok, diff = verify_hm(n, p, x, y, 40)
    assert ok, diff


def test_hm_detects_a_dropped_term():
    n, p = 2, 3
    x, y = find_generic_monomials(n, p)
    T = 30
    params = HeckeParams(n, n + p, n, x, y)
    lhs = hecke_f(params, T)
    g = hecke_g(params, MINUS_ONE, MINUS_ONE, T)
    terms = theta_block_terms(n, p, x, y)
    inv = expand_j_inverse(jbar(0, n * p * (2 * n + p)), T + 10)
    full = sum((theta_quotient(t.mono, t.num, t.den, T + 10) for t in terms[1:]),
               theta_quotient(terms[0].mono, terms[0].num, terms[0].den, T + 10))
    assert (lhs - (g + mul(full, inv))).is_zero()
    partial = sum((theta_quotient(t.mono, t.num, t.den, T + 10) for t in terms[2:]),
                  theta_quotient(terms[1].mono, terms[1].num, terms[1].den, T + 10))
    assert not (lhs - (g + mul(partial, inv))).is_zero()
