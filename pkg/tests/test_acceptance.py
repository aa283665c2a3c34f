"""Acceptance criteria 1-10, all at zero tolerance.

Each test is tagged with its criterion number; conftest prints one PASS/FAIL
line per criterion at the end of the run.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from weylver.chern_weil import (
    CartanPoint,
    ahat_ch_component,
    ahat_trace_table,
    genfun_check,
    p_n_cartan_graphsum,
    p_n_integral_at,
    rrh_check,
    rrh_tuples,
)
from weylver.cocycle import tau_closed_form_n1, tau_eval
from weylver.hochschild import ChainTensor, canonical_cycle, hochschild_boundary, random_chain, random_element
from weylver.integrate import closed_form_I, psi_cycle_integral
from weylver.lie import GlWeylElement, as_gl, flat_trace_density, theta_eval, theta_invariance_sum
from weylver.scalars import ONE, ZERO, EpsScalar
from weylver.weyl import WeylElement, bracket, moyal

W = WeylElement
criterion = pytest.mark.criterion


def quadratic_basis(n):
    ys = [W.var(n, i) for i in range(1, 2 * n + 1)]
    return [ys[i] * ys[j] for i in range(2 * n) for j in range(i, 2 * n)]


def rational(rng, lo=-5, hi=5, den=4):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


@criterion(1)
def test_1_normalization():
    t0 = time.perf_counter()
    assert tau_eval(1, canonical_cycle(1)) == ONE
    t1 = time.perf_counter()
    assert tau_eval(2, canonical_cycle(2)) == ONE
    t2 = time.perf_counter()
    assert t1 - t0 < 1
    assert t2 - t1 < 300


@criterion(2)
def test_2_cocycle():
    rng = random.Random("criterion-2")
    t0 = time.perf_counter()
    nonzero = 0
    for _ in range(200):
        c = random_chain(rng, 1, 3, 3)
        d = hochschild_boundary(c)
        nonzero += not d.is_zero()
        assert tau_eval(1, d) == ZERO
    for _ in range(20):
        c = random_chain(rng, 2, 5, 2)
        assert tau_eval(2, hochschild_boundary(c)) == ZERO
    assert nonzero > 150  # the check is not vacuous
    assert time.perf_counter() - t0 < 600


@criterion(3)
def test_3_moyal_associativity_leibniz_jacobi():
    rng = random.Random("criterion-3")
    t0 = time.perf_counter()
    for i in range(500):
        n = 1 + i % 2
        f, g, h = (random_element(rng, n, 4, eps_window=(-1, 1)) for _ in range(3))
        assert moyal(moyal(f, g), h) == moyal(f, moyal(g, h))
        assert bracket(f, moyal(g, h)) == moyal(bracket(f, g), h) + moyal(g, bracket(f, h))
        assert (bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) + bracket(h, bracket(f, g))).is_zero()
    assert time.perf_counter() - t0 < 60


@criterion(4)
def test_4_closed_form_n1():
    one, p1, q1 = W.one(1), W.p(1, 1), W.q(1, 1)
    # regression values, confirmed against the sympy brute-force oracle in test_cocycle
    for chain, value in (
        (ChainTensor.elementary(one, p1, q1), EpsScalar(Fraction(1, 2))),
        (ChainTensor.elementary(p1, q1, p1 * q1), EpsScalar({1: Fraction(1, 12)})),
    ):
        assert tau_eval(1, chain) == value
        assert tau_closed_form_n1(chain) == value
    rng = random.Random("criterion-4")
    for _ in range(100):
        c = random_chain(rng, 1, 2, 4)
        assert tau_closed_form_n1(c) == tau_eval(1, c)


@criterion(5)
def test_5_cycle_integrals():
    for j in range(2, 9):
        assert psi_cycle_integral(j) == closed_form_I(j)
        if j % 2:
            assert psi_cycle_integral(j) == 0
    assert psi_cycle_integral(2) == Fraction(-1, 3)
    assert psi_cycle_integral(4) == Fraction(1, 45)


# The stated expansion assigns 1/4608 to tr(X^4) and 1/5760 to (tr X^2)^2.
# The exact series of det((X/2)/sinh(X/2))^(1/2) gives the opposite assignment
# (tr X^4 -> 1/5760, (tr X^2)^2 -> 1/4608); with the stated values the
# generating-function identity of the same criterion fails.  The assertion is
# kept exactly as stated and is expected to fail.
@criterion(6)
@pytest.mark.xfail(strict=True, reason="stated tr(X^4) and (tr X^2)^2 coefficients are swapped relative to the exact series")
def test_6_stated_ahat_coefficients():
    assert ahat_trace_table(2)[(2,)] == Fraction(-1, 48)
    table = ahat_trace_table(4)
    assert table[(4,)] == Fraction(1, 4608)
    assert table[(2, 2)] == Fraction(1, 5760)


@criterion(6)
def test_6_quadratic_coefficient_and_genfun():
    for N in (1, 2, 3):
        P = ahat_ch_component(2, 1, N)
        assert P.table[((2,), (0,))] == EpsScalar({2: Fraction(-1, 48)})
    for m, N in ((1, 1), (2, 1), (1, 2), (2, 2)):
        assert genfun_check(4, m, N).passed


@criterion(7)
def test_7_theta_properties():
    for n, N in ((1, 1), (1, 2), (1, 3), (2, 1)):
        args = []
        for i in range(1, n + 1):
            args += [W.p(n, i), W.q(n, i)]
        assert theta_eval(n, N, args, W.one(n)) == EpsScalar(N)

    rng = random.Random("criterion-7")
    N = 2
    quads = quadratic_basis(1)
    cases = nontrivial = 0
    while cases < 120:
        a, f = (GlWeylElement(1, N, {(r, c): random_element(rng, 1, 3) for r in range(N) for c in range(N)}) for _ in range(2))
        b = GlWeylElement(1, N, {(r, c): random_element(rng, 1, 3) for r in range(N) for c in range(N)})
        A = rng.choice(quads).scale(rational(rng) or 1)
        z = W.scalar(1, EpsScalar({rng.randint(-1, 1): rational(rng) or 1}))
        assert theta_eval(1, N, [as_gl(A, N), a], f) == ZERO
        assert theta_eval(1, N, [a, as_gl(z, N)], f) == ZERO
        assert theta_invariance_sum(1, N, A, [a, b], f) == ZERO
        M = GlWeylElement.unit(N, rng.randrange(N), rng.randrange(N), W.one(1))
        assert theta_invariance_sum(1, N, M, [a, b], f) == ZERO
        nontrivial += not theta_eval(1, N, [a, b], f).is_zero()
        cases += 1
    assert nontrivial > 100


@criterion(8)
def test_8_local_rrh():
    t0 = time.perf_counter()
    for names in rrh_tuples(1, 1):
        assert rrh_check(1, 1, names).passed
    values = {}
    for names in rrh_tuples(2, 1):
        r = rrh_check(2, 1, names)
        assert r.passed
        values[names] = r.lhs
    assert values[("v11", "v21")] == ONE
    assert values[("u11", "u21")] == EpsScalar({2: Fraction(-1, 12)})
    assert time.perf_counter() - t0 < 900


@criterion(9)
def test_9_pn_crosscheck():
    rng = random.Random("criterion-9")
    for i in range(60):
        n = 1 + i % 2
        m, N = rng.randint(1, 2), rng.randint(1, 3)
        t = [rational(rng) for _ in range(m)]
        s = [EpsScalar({rng.randint(-1, 1): rational(rng)}) for _ in range(N)]
        X = CartanPoint(t, s)
        graph = p_n_cartan_graphsum(n, X)
        assert graph == p_n_integral_at(n, X)
        assert graph == ahat_ch_component(n, m, N)(X.to_h())


@criterion(10)
def test_10_flat_trace_density():
    assert flat_trace_density(1, W.one(1), [0, 0]) == ONE
    rng = random.Random("criterion-10")
    for _ in range(60):
        f = random_element(rng, 1, 5, n_terms=4, eps_window=(0, 0))
        x = [rational(rng), rational(rng)]
        assert flat_trace_density(1, f, x) == f.evaluate(x)
