"""Hypothesis strategies for exact algebraic objects."""
from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from weylver.hochschild import ChainTensor
from weylver.scalars import EpsScalar
from weylver.weyl import SpMatrix, WeylElement, omega

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 5))
nonzero_fractions = fractions.filter(bool)

eps_scalars = st.dictionaries(st.integers(-3, 3), fractions, max_size=3).map(EpsScalar)


@st.composite
def weyl_elements(draw, n: int = 1, max_deg: int = 3, max_terms: int = 3, eps_lo: int = 0, eps_hi: int = 1, min_deg: int = 0):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        d = draw(st.integers(min_deg, max_deg))
        exps = [0] * (2 * n)
        for _ in range(d):
            exps[draw(st.integers(0, 2 * n - 1))] += 1
        e = draw(st.integers(eps_lo, eps_hi))
        terms[(tuple(exps), e)] = draw(nonzero_fractions)
    return WeylElement(n, terms)


@st.composite
def sp_matrices(draw, n: int = 1):
    """Random element of sp_2n: raise a random symmetric matrix with omega^-1 = -omega."""
    size = 2 * n
    sym = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            sym[i][j] = sym[j][i] = draw(st.integers(-3, 3))
    w = omega(n)
    # a^i_j = sum_k (omega^-1)_{ik} a_kj with omega^-1 = -omega
    up = [[sum(-w[i][k] * sym[k][j] for k in range(size)) for j in range(size)] for i in range(size)]
    return SpMatrix(n, up)


@st.composite
def elementary_chains(draw, n: int = 1, k: int = 2, max_deg: int = 3, normalized: bool = True):
    slots = [draw(weyl_elements(n, max_deg, 2))]
    for _ in range(k):
        slots.append(draw(weyl_elements(n, max_deg, 2, min_deg=1 if normalized else 0)))
    return ChainTensor.elementary(*slots)
