from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import elementary_chains
from weylver.hochschild import (
    ChainTensor,
    canonical_cycle,
    hochschild_boundary,
    normalize_chain,
    random_chain,
)
from weylver.scalars import EPS
from weylver.weyl import DimensionError, WeylElement, moyal

W = WeylElement
one, p1, q1 = W.one(1), W.p(1, 1), W.q(1, 1)


def test_boundary_examples():
    d = hochschild_boundary(ChainTensor.elementary(p1, q1))
    assert d == ChainTensor.elementary(moyal(p1, q1) - moyal(q1, p1))
    assert d == ChainTensor.elementary(W.scalar(1, EPS))
    f = p1 ** 2 * q1
    assert hochschild_boundary(ChainTensor.elementary(one, f)).is_zero()


def test_boundary_needs_positive_degree():
    with pytest.raises(ValueError):
        hochschild_boundary(ChainTensor.elementary(p1))


def test_canonical_cycle():
    c1 = canonical_cycle(1)
    assert c1 == ChainTensor.elementary(one, p1, q1) - ChainTensor.elementary(one, q1, p1)
    # the raw boundary is the degenerate chain -1 (x) eps, zero in the normalized complex
    d1 = hochschild_boundary(c1)
    assert d1 == ChainTensor.elementary(one, W.scalar(1, EPS)).scale(-1)
    assert normalize_chain(d1).is_zero()
    c2 = canonical_cycle(2)
    assert c2.k == 4 and len(c2) == 24
    assert normalize_chain(hochschild_boundary(c2)).is_zero()


def test_chain_arity_and_dimension_checks():
    with pytest.raises(ValueError):
        ChainTensor(1, 2, [(1, (one, p1))])
    with pytest.raises(DimensionError):
        ChainTensor.elementary(one, W.p(2, 1))


def test_canonicalization_merges_terms():
    c = ChainTensor(1, 1, [(1, (p1, q1)), (2, (p1, q1)), (-3, (p1, q1))])
    assert c.is_zero()
    # multilinear equality: 2p (x) q == p (x) 2q
    assert ChainTensor.elementary(p1.scale(2), q1) == ChainTensor.elementary(p1, q1.scale(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.integers(1, 4).flatmap(lambda k: elementary_chains(n, k, 3, normalized=False))))
def test_d_squared_is_zero(c):
    if c.k >= 2:
        assert hochschild_boundary(hochschild_boundary(c)).is_zero()


def test_normalize_examples():
    assert normalize_chain(ChainTensor.elementary(one, W.scalar(1, EPS), q1)).is_zero()
    c = ChainTensor.elementary(one, p1 + W.scalar(1, 3), q1)
    assert normalize_chain(c) == ChainTensor.elementary(one, p1, q1)
    assert normalize_chain(canonical_cycle(1)) == canonical_cycle(1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(lambda k: elementary_chains(1, k, 2, normalized=False)))
def test_normalize_idempotent_and_commutes_with_boundary(c):
    nc = normalize_chain(c)
    assert normalize_chain(nc) == nc
    # d preserves the degenerate subcomplex, so N d = N d N
    assert normalize_chain(hochschild_boundary(c)) == normalize_chain(hochschild_boundary(nc))


def test_random_chain_is_seeded_and_normalized():
    a = random_chain(random.Random(5), 1, 3, 3)
    b = random_chain(random.Random(5), 1, 3, 3)
    assert a == b
    ((slots, _),) = a.items()
    assert all(s.y_degree() >= 1 for s in slots[1:])
