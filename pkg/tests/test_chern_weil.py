from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import half_x_over_sinh, log_half_x_over_sinh
from strategies import fractions, sp_matrices
from weylver.chern_weil import (
    CartanPoint,
    HElement,
    InvariantPoly,
    ahat_ch_component,
    ahat_trace_table,
    chi_eval,
    comb_factor,
    curvature_C,
    cycle_partitions,
    genfun_check,
    half_x_over_sinh_series,
    p_n_cartan_graphsum,
    p_n_cartan_integral,
    p_n_integral_at,
    polarize,
    project_pr,
    rrh_check,
    rrh_tuples,
    special_vectors,
)
from weylver.lie import GlWeylElement, as_gl, gl_bracket
from weylver.scalars import ONE, ZERO, EpsScalar
from weylver.weyl import SpMatrix, WeylElement, bracket

W = WeylElement
one, p1, q1 = W.one(1), W.p(1, 1), W.q(1, 1)


def eps(c, k=0):
    return EpsScalar.monomial(Fraction(c), k)


def gl_diag(N, r):
    return [[ONE if (a == r and b == r) else ZERO for b in range(N)] for a in range(N)]


@st.composite
def h_elements(draw, n=1, N=2):
    A = draw(sp_matrices(n))
    gl = [[EpsScalar(draw(fractions)) for _ in range(N)] for _ in range(N)]
    return HElement(n, N, A, gl)


# projection and curvature


def test_pr_examples():
    sv = special_vectors(1, 1)
    assert project_pr(as_gl(p1)).is_zero()
    assert project_pr(sv["u11"]).is_zero()
    assert project_pr(sv["v11"]).is_zero()
    E11 = GlWeylElement.unit(2, 0, 0, one)
    assert project_pr(E11) == HElement(1, 2, None, gl_diag(2, 0))


def test_pr_averages_the_trace():
    v = GlWeylElement.unit(2, 0, 0, p1 * q1)
    X = project_pr(v)
    assert X == HElement(1, 2, SpMatrix.diag(1, -1).entries, None).scale(Fraction(1, 2))


def test_curvature_examples():
    sv = special_vectors(1, 1)
    C = curvature_C(as_gl(p1), sv["u11"])
    # sp part is the matrix of -q1 p1
    assert C == HElement(1, 1, SpMatrix.diag(-1, 1), None)
    assert curvature_C(as_gl(p1), sv["v11"]) == HElement(1, 1, None, [[eps(-1)]])
    assert curvature_C(sv["u11"], sv["u11"]).is_zero()


def test_special_vector_brackets():
    for n, N in ((1, 1), (2, 2)):
        sv = special_vectors(n, N)
        for i in range(1, n + 1):
            pi = as_gl(W.p(n, i), N)
            for j in range(1, n + 1):
                qj, pj = W.q(n, j), W.p(n, j)
                assert gl_bracket(pi, sv[f"u{i}{j}"]) == as_gl(qj * pj, N)
            for r in range(N):
                assert gl_bracket(pi, sv[f"v{i}{r + 1}"]) == GlWeylElement.unit(N, r, r, W.one(n))
        assert all(project_pr(v).is_zero() for v in sv.values())


def test_special_bracket_matches_q_derivative():
    assert bracket(p1, (q1 ** 2 * p1).scale(Fraction(1, 2))) == q1 * p1


@settings(max_examples=25, deadline=None)
@given(h_elements(), h_elements())
def test_curvature_vanishes_on_h(X, Y):
    assert project_pr(X.to_gl_weyl()) == X
    assert curvature_C(X.to_gl_weyl(), Y.to_gl_weyl()).is_zero()


def test_curvature_antisymmetric_random():
    rng = random.Random(4)
    from weylver.hochschild import random_element

    for _ in range(10):
        v = GlWeylElement(1, 2, {(rng.randrange(2), rng.randrange(2)): random_element(rng, 1, 3) for _ in range(3)})
        w = GlWeylElement(1, 2, {(rng.randrange(2), rng.randrange(2)): random_element(rng, 1, 3) for _ in range(3)})
        assert curvature_C(v, w) == -curvature_C(w, v)


# invariant polynomials


def test_polarize_degree_one_and_two():
    P1 = ahat_ch_component(1, 1, 2)
    X = CartanPoint([3], [eps(1), eps(2)]).to_h()
    assert polarize(P1, X) == P1(X) == eps(3)
    P2 = InvariantPoly.from_table(2, {((), (2,)): Fraction(1, 2)})
    assert polarize(P2, X, X) == P2(X) == eps(5)


def test_polarize_diagonal_is_j_factorial_taylor():
    for j in range(4):
        P = ahat_ch_component(j, 1, 2)
        X = CartanPoint([Fraction(1, 2)], [eps(2), eps(-1)]).to_h()
        assert polarize(P, *[X] * j) == P.taylor(X) * factorial(j)


def test_pure_type_cross_term_vanishes():
    P = ahat_ch_component(2, 1, 2)
    Y1 = CartanPoint([2], [ZERO, ZERO]).to_h()
    Y2 = CartanPoint([0], [eps(1), eps(3)]).to_h()
    assert polarize(P, Y1, Y2).is_zero()
    assert not polarize(P, Y1, Y1).is_zero()


@settings(max_examples=20, deadline=None)
@given(h_elements(), h_elements(), h_elements())
def test_polarize_symmetric_and_multilinear(X, Y, Z):
    P = ahat_ch_component(2, 1, 2)
    assert polarize(P, X, Y) == polarize(P, Y, X)
    assert polarize(P, X + Z, Y) == polarize(P, X, Y) + polarize(P, Z, Y)


def test_degree_zero_component_is_N():
    for N in (1, 2, 3):
        P0 = ahat_ch_component(0, 1, N)
        assert polarize(P0) == eps(N)


def test_ahat_stated_quadratic_coefficient():
    assert ahat_trace_table(2) == {(2,): Fraction(-1, 48)}
    P2 = ahat_ch_component(2, 1, 3)
    assert P2.table[((2,), (0,))] == eps(Fraction(-1, 48), 2) * 1


def test_ahat_series_matches_sympy():
    assert half_x_over_sinh_series(10) == half_x_over_sinh(10)
    logs = log_half_x_over_sinh(8)
    assert ahat_trace_table(4)[(4,)] == logs[4] / 2


def test_ahat_trace_table_degree_four_from_two_eigenvalue_pairs():
    # X = diag(a, b, -a, -b): Â(X) = prod (x/2)/sinh(x/2) over a, b
    a, b = sp.symbols("a b")
    x = sp.Symbol("x")
    f = sp.series((x / 2) / sp.sinh(x / 2), x, 0, 6).removeO()
    prod = sp.expand(f.subs(x, a) * f.subs(x, b))
    deg4 = sum(prod.coeff(a, i).coeff(b, 4 - i) * a ** i * b ** (4 - i) for i in range(5))
    table = ahat_trace_table(4)
    ours = table[(4,)] * 2 * (a ** 4 + b ** 4) + table[(2, 2)] * (2 * a ** 2 + 2 * b ** 2) ** 2
    ours = sp.nsimplify(ours)
    assert sp.expand(ours - deg4) == 0
    assert table == {(4,): Fraction(1, 5760), (2, 2): Fraction(1, 4608)}


@pytest.mark.parametrize("j", range(7))
def test_ahat_on_single_t_matches_series(j):
    t = Fraction(3, 2)
    P = ahat_ch_component(j, 1, 1)
    X = CartanPoint([t], [ZERO]).to_h()
    ref = half_x_over_sinh(j)[j]
    # Ch(0) contributes tr(1) = 1 at degree 0 only
    assert P.taylor(X) == eps(ref * t ** j, j)


def conj(M, S, Sinv):
    size = len(M)
    mul = lambda A, B: [[sum((A[i][k] * B[k][j] for k in range(size)), ZERO) for j in range(size)] for i in range(size)]
    S = [[EpsScalar(x) for x in r] for r in S]
    Sinv = [[EpsScalar(x) for x in r] for r in Sinv]
    return mul(mul(S, M), Sinv)


@settings(max_examples=15, deadline=None)
@given(h_elements(1, 2), fractions, fractions)
def test_ad_invariance_under_conjugation(X, a, b):
    S, Sinv = [[1, a], [0, 1]], [[1, -a], [0, 1]]  # unipotent, determinant 1, hence symplectic in dimension 2
    G, Ginv = [[1, b], [0, 1]], [[1, -b], [0, 1]]
    Y = HElement(1, 2, conj(X.sp_part, S, Sinv), conj(X.gl_part, G, Ginv))
    for j in range(5):
        P = ahat_ch_component(j, 1, 2)
        assert P(Y) == P(X)


# chi


def test_chi_examples():
    sv = special_vectors(1, 1)
    P1 = ahat_ch_component(1, 1, 1)
    args = [as_gl(p1), sv["v11"]]
    assert -chi_eval(P1, args) == ONE
    assert chi_eval(P1, args[::-1]) == -chi_eval(P1, args)
    assert chi_eval(P1, args) == P1(curvature_C(*args))
    with pytest.raises(ValueError):
        chi_eval(P1, args[:1])


# combinatorics and the Cartan formula


def test_comb_factor_examples():
    assert comb_factor({2: 1}) == Fraction(1, 2)
    assert comb_factor({1: 1}) == 1
    assert comb_factor({2: 2}) == Fraction(3, 4)
    assert comb_factor((0, 1)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        comb_factor({1: -1})


@pytest.mark.parametrize("n", range(1, 7))
def test_comb_factors_count_permutations_by_cycle_type(n):
    # C_l * prod_{j>=2} 2^l_j ... sums to n! over cycle types once the cycle orientations are restored
    total = Fraction(0)
    for ell in cycle_partitions(n):
        c = comb_factor(ell)
        for j, l in ell.items():
            if j >= 2:
                c *= 2 ** l
        total += c
    assert total == factorial(n)


def test_graphsum_examples():
    s = [eps(2), eps(-1, 1)]
    assert p_n_cartan_graphsum(1, CartanPoint([5], s)) == s[0] + s[1]
    t1, t2 = Fraction(1, 2), 3
    assert p_n_cartan_graphsum(2, CartanPoint([t1, t2], [ZERO])) == eps(-(t1 ** 2 + t2 ** 2) / 12, 2)
    assert p_n_cartan_graphsum(2, CartanPoint([0], s)) == s[0] * s[0] + s[1] * s[1]


def test_cartan_integral_examples():
    ident = [[ONE]]
    assert p_n_cartan_integral(1, [(ident, q1 * p1)]).is_zero()
    assert p_n_cartan_integral(1, [(ident, one)]) == ONE
    q2p2, q1p1 = W.q(2, 2) * W.p(2, 2), W.q(2, 1) * W.p(2, 1)
    assert p_n_cartan_integral(2, [(ident, q1p1), (ident, q2p2)]).is_zero()
    # agrees with the graph sum -e^2 t^2/12 at t = -1
    assert p_n_cartan_integral(2, [(ident, q1p1), (ident, q1p1)]) == eps(Fraction(-1, 12), 2)


def test_cartan_integral_errors():
    with pytest.raises(ValueError):
        p_n_cartan_integral(1, [([[ONE, ONE], [ZERO, ONE]], W.one(1))])
    with pytest.raises(ValueError):
        p_n_cartan_integral(1, [([[ONE]], p1 * p1)])
    with pytest.raises(ValueError):
        p_n_cartan_integral(2, [([[ONE]], one)])


@st.composite
def cartan_points(draw, m=2, N=2):
    t = [draw(fractions) for _ in range(m)]
    s = [EpsScalar({draw(st.integers(-1, 1)): draw(fractions)}) for _ in range(N)]
    return CartanPoint(t, s)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 2), cartan_points())
def test_graphsum_equals_integral(n, X):
    assert p_n_cartan_graphsum(n, X) == p_n_integral_at(n, X)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 3), cartan_points())
def test_graphsum_equals_ahat_ch(n, X):
    P = ahat_ch_component(n, X.n, X.N)
    assert p_n_cartan_graphsum(n, X) == P(X.to_h())


@settings(max_examples=10, deadline=None)
@given(cartan_points(), cartan_points())
def test_mixed_arguments_integral_matches_polarization(X, Y):
    P = ahat_ch_component(2, 2, 2)
    assert p_n_integral_at(2, [X, Y]) == polarize(P, X.to_h(), Y.to_h())


# local Riemann-Roch-Hirzebruch


def test_rrh_examples():
    r = rrh_check(1, 1, ("v11",))
    assert r.passed and r.lhs == ONE
    r = rrh_check(2, 1, ("v11", "v21"))
    assert r.passed and r.lhs == ONE
    r = rrh_check(2, 1, ("u11", "u21"))
    assert r.passed and r.lhs == eps(Fraction(-1, 12), 2)


def test_rrh_rejects_inadmissible_tuples():
    with pytest.raises(ValueError):
        rrh_check(2, 1, ("u11", "u12"))
    with pytest.raises(ValueError):
        rrh_check(1, 1, ("u11", "v11"))
    assert rrh_tuples(2, 1) == [("u11", "u21"), ("u11", "u22"), ("u11", "v21"), ("v11", "u21"), ("v11", "u22"), ("v11", "v21")]


@pytest.mark.parametrize("names", rrh_tuples(1, 2))
def test_rrh_all_tuples_n1_N2(names):
    assert rrh_check(1, 2, names).passed


# generating function


def test_genfun_examples():
    r = genfun_check(2, 1, 1)
    assert r.passed
    assert r.closed_series.evaluate([Fraction(2)], [ZERO]) == eps(1) - eps(Fraction(4, 24), 2)
    r = genfun_check(4, 0, 1)
    assert r.passed
    assert r.graph_series.evaluate([], [EpsScalar(1)]) == EpsScalar(sum(Fraction(1, factorial(k)) for k in range(5)))


@pytest.mark.parametrize("m,N,max_n", [(2, 1, 4), (1, 2, 5), (2, 2, 4)])
def test_genfun_matches(m, N, max_n):
    assert genfun_check(max_n, m, N).passed
