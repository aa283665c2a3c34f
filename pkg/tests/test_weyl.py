from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import moyal_oracle, slot_symbols, to_sympy
from strategies import eps_scalars, sp_matrices, weyl_elements
from weylver.scalars import EPS, ONE, EpsScalar
from weylver.weyl import (
    DimensionError,
    SpMatrix,
    WeylElement,
    bracket,
    eval_at_zero,
    graded_degree,
    moyal,
    partial_derivative,
    quadratic_to_sp,
    sp_action,
    sp_to_quadratic,
)

W = WeylElement
p1, q1 = W.p(1, 1), W.q(1, 1)


# EpsScalar


def test_eps_examples():
    assert EPS * EpsScalar({-1: 1}) == ONE
    assert EpsScalar({2: Fraction(1, 2)}) + EpsScalar({2: Fraction(1, 2)}) == EpsScalar({2: 1})
    assert EpsScalar({-1: Fraction(3, 4)}) * EpsScalar({3: Fraction(2, 3)}) == EpsScalar({2: Fraction(1, 2)})


def test_eps_no_stored_zeros():
    x = EpsScalar({0: 1, 1: 0})
    assert x.terms == {0: Fraction(1)}
    assert (x - x).is_zero() and (x - x).terms == {}


@given(eps_scalars, eps_scalars, eps_scalars)
def test_eps_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == EpsScalar()


@given(eps_scalars, st.integers(-3, 3))
def test_eps_shift_is_monomial_product(a, k):
    assert a.shift(k) == a * EpsScalar({k: 1})


def test_eps_division_only_by_monomials():
    assert EpsScalar({3: 2}) / EpsScalar({1: 4}) == EpsScalar({2: Fraction(1, 2)})
    with pytest.raises(ZeroDivisionError):
        ONE / EpsScalar({0: 1, 1: 1})
    with pytest.raises(ValueError):
        EPS.to_fraction()


# derivatives, constant term, grading


def test_partial_derivative_examples():
    assert partial_derivative(p1 ** 2 * q1, 1) == (p1 * q1).scale(2)
    assert partial_derivative(p1, 2).is_zero()
    assert partial_derivative(p1.scale(EPS), 1) == W.scalar(1, EPS)


def test_eval_at_zero_examples():
    assert eval_at_zero(W.one(1) + (p1 * q1).scale(EPS)) == ONE
    assert eval_at_zero(W.q(2, 2) ** 3).is_zero()
    assert eval_at_zero(W.scalar(1, EpsScalar({-1: 1})) + p1) == EpsScalar({-1: 1})


def test_graded_degree_examples():
    assert graded_degree(p1.scale(EPS)) == 3
    assert graded_degree(p1 * q1 + W.scalar(1, EPS)) == 2
    assert graded_degree(W.one(1) + p1) is None


# Moyal product


def test_moyal_examples():
    assert moyal(p1, q1) - moyal(q1, p1) == W.scalar(1, EPS)
    f = p1 ** 2 * q1 + W.scalar(1, 3)
    assert moyal(W.one(1), f) == f
    expected = p1 ** 2 * q1 ** 2 + (p1 * q1).scale(EpsScalar({1: 2})) + W.scalar(1, EpsScalar({2: Fraction(1, 2)}))
    assert moyal(p1 ** 2, q1 ** 2) == expected


def test_moyal_dimension_mismatch():
    with pytest.raises(DimensionError):
        moyal(p1, W.p(2, 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(weyl_elements(n, 3), weyl_elements(n, 3))))
def test_moyal_matches_bidifferential_oracle(fg):
    f, g = fg
    merged = slot_symbols(f.n, "m")
    assert sp.expand(moyal_oracle(f, g) - to_sympy(moyal(f, g), merged)) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(*[weyl_elements(n, 4, eps_lo=-1)] * 3)))
def test_associativity_leibniz_jacobi(fgh):
    f, g, h = fgh
    assert moyal(moyal(f, g), h) == moyal(f, moyal(g, h))
    assert bracket(f, moyal(g, h)) == moyal(bracket(f, g), h) + moyal(g, bracket(f, h))
    assert (bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) + bracket(h, bracket(f, g))).is_zero()


@given(weyl_elements(1, 4))
def test_unit_and_antisymmetry(f):
    assert moyal(W.one(1), f) == f == moyal(f, W.one(1))
    assert bracket(f, f).is_zero()


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))
def test_moyal_preserves_grading(a, b, c, d, e1, e2):
    f = W.monomial(1, (a, b), eps=e1)
    g = W.monomial(1, (c, d), eps=e2)
    assert graded_degree(moyal(f, g)) == graded_degree(f) + graded_degree(g)


def test_bracket_examples():
    assert bracket(p1, q1) == W.one(1)
    assert bracket(p1 * q1, p1) == -p1


# sp_2n


def test_sp_to_quadratic_examples():
    assert sp_to_quadratic(SpMatrix.diag(1, -1)) == p1 * q1
    assert sp_to_quadratic(SpMatrix.zero(1)).is_zero()
    # lowered a_11 = 1 only: since omega[p][q] = -1 this is a^2_1 = -1
    A = SpMatrix(1, [[0, 0], [-1, 0]])
    assert A.lowered() == ((1, 0), (0, 0))
    assert sp_to_quadratic(A) == (p1 ** 2).scale(Fraction(1, 2))


def test_sp_invariant_violation():
    with pytest.raises(ValueError):
        SpMatrix(1, [[1, 0], [0, 1]])


def test_sp_action_examples():
    A = SpMatrix.diag(1, -1)
    assert sp_action(A, p1) == -p1
    assert sp_action(A, q1 ** 2) == (q1 ** 2).scale(2)
    assert sp_action(A, W.one(1)).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(sp_matrices(n), weyl_elements(n, 3, eps_lo=-1))))
def test_sp_action_equals_bracket(af):
    A, f = af
    assert sp_action(A, f) == bracket(sp_to_quadratic(A), f)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(sp_matrices(n), sp_matrices(n))))
def test_quadratic_map_is_a_homomorphism(ab):
    # the sign forced by the derivative definition is +
    A, B = ab
    assert bracket(sp_to_quadratic(A), sp_to_quadratic(B)) == sp_to_quadratic(A.commutator(B))


@given(st.integers(1, 2).flatmap(sp_matrices))
def test_quadratic_roundtrip(A):
    assert quadratic_to_sp(sp_to_quadratic(A)) == A


def test_substitute_shift():
    f = p1 ** 2 * q1 + q1.scale(3)
    shifted = f.substitute_shift([Fraction(1, 2), Fraction(3)])
    assert eval_at_zero(shifted) == f.evaluate([Fraction(1, 2), 3]) == EpsScalar(Fraction(39, 4))
