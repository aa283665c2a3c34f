"""Exact integration of polynomials over simplices, ordering regions and the cube.

Also the sawtooth cycle integrals ``I_j`` and their Bernoulli closed form.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Mapping, Sequence

from .scalars import EpsScalar, as_scalar, sum_scalars

__all__ = [
    "UPolynomial",
    "OrderedRegion",
    "simplex_monomial_integral",
    "integrate_over_region",
    "integrate_over_cube",
    "psi_branch",
    "psi_cycle_integral",
    "closed_form_I",
    "bernoulli",
]


class UPolynomial:
    """Polynomial in ``u_1..u_k`` with EpsScalar coefficients."""

    __slots__ = ("k", "_t")

    def __init__(self, k: int, terms: Mapping[tuple, object] | None = None):
        self.k = k
        t: dict = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != k:
                raise ValueError(f"exponent vector {exps} does not have {k} entries")
            c = as_scalar(c)
            if not c.is_zero():
                s = t.get(exps)
                s = c if s is None else s + c
                if s.is_zero():
                    t.pop(exps, None)
                else:
                    t[exps] = s
        self._t = t

    @classmethod
    def constant(cls, k: int, c) -> "UPolynomial":
        return cls(k, {(0,) * k: c})

    @classmethod
    def var(cls, k: int, i: int) -> "UPolynomial":
        """``u_i``, 1-based."""
        exps = [0] * k
        exps[i - 1] = 1
        return cls(k, {tuple(exps): 1})

    @classmethod
    def affine(cls, k: int, coeffs: Mapping[int, object], const=0) -> "UPolynomial":
        """``const + sum c_i u_i``; index 0 stands for the fixed point ``u_0 = 0``."""
        t = {(0,) * k: const}
        for i, c in coeffs.items():
            if i == 0:
                continue
            exps = [0] * k
            exps[i - 1] = 1
            t[tuple(exps)] = as_scalar(c) + t.get(tuple(exps), 0)
        return cls(k, t)

    @property
    def terms(self) -> dict[tuple, EpsScalar]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def __add__(self, other: "UPolynomial") -> "UPolynomial":
        if other.k != self.k:
            raise ValueError("arity mismatch")
        return UPolynomial(self.k, _merge(self._t, other._t))

    def __neg__(self) -> "UPolynomial":
        return UPolynomial(self.k, {e: -c for e, c in self._t.items()})

    def __sub__(self, other: "UPolynomial") -> "UPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "UPolynomial":
        if not isinstance(other, UPolynomial):
            c = as_scalar(other)
            return UPolynomial(self.k, {e: v * c for e, v in self._t.items()})
        if other.k != self.k:
            raise ValueError("arity mismatch")
        t: dict = {}
        for a, x in self._t.items():
            for b, y in other._t.items():
                e = tuple(i + j for i, j in zip(a, b))
                p = x * y
                s = t.get(e)
                t[e] = p if s is None else s + p
        return UPolynomial(self.k, t)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "UPolynomial":
        out = UPolynomial.constant(self.k, 1)
        for _ in range(m):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, UPolynomial) and self.k == other.k and self._t == other._t

    def __repr__(self) -> str:
        parts = []
        for e, c in sorted(self._t.items()):
            mono = "*".join(f"u{i + 1}^{m}" if m > 1 else f"u{i + 1}" for i, m in enumerate(e) if m)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return f"UPolynomial(k={self.k}, {' + '.join(parts) or '0'})"


def _merge(a: dict, b: dict) -> dict:
    t = dict(a)
    for e, c in b.items():
        s = t.get(e)
        t[e] = c if s is None else s + c
    return t


class OrderedRegion:
    """``{0 <= u_pi(1) <= ... <= u_pi(k) <= 1}`` with an orientation sign."""

    __slots__ = ("k", "ordering", "orientation")

    def __init__(self, ordering: Sequence[int], orientation: int = 1):
        ordering = tuple(ordering)
        k = len(ordering)
        if sorted(ordering) != list(range(1, k + 1)):
            raise ValueError(f"{ordering} is not a permutation of 1..{k}")
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        self.k = k
        self.ordering = ordering
        self.orientation = orientation

    @classmethod
    def standard(cls, k: int) -> "OrderedRegion":
        return cls(range(1, k + 1))

    def contains_order(self, i: int, j: int) -> bool:
        """True if ``u_i < u_j`` on this region (1-based labels)."""
        pos = {v: p for p, v in enumerate(self.ordering)}
        return pos[i] < pos[j]

    def __repr__(self) -> str:
        return f"OrderedRegion({self.ordering}, orientation={self.orientation})"


def simplex_monomial_integral(k: int, exps: Sequence[int]) -> Fraction:
    """``int_{0<=u_1<=...<=u_k<=1} prod u_i^m_i`` by iterated antidifferentiation.

    Integrating ``u_1`` from 0 to ``u_2`` turns ``u_1^a`` into ``u_2^(a+1)/(a+1)``,
    which merges into the next exponent; repeat up to ``u_k`` and then to 1.
    """
    if len(exps) != k:
        raise ValueError("arity mismatch")
    value = Fraction(1)
    carried = 0
    for m in exps:
        if m < 0:
            raise ValueError("negative exponent")
        carried += m + 1
        value /= carried
    return value


def integrate_over_region(p: UPolynomial, r: OrderedRegion) -> EpsScalar:
    """Exact integral of ``p`` over the region, times its orientation sign."""
    if p.k != r.k:
        raise ValueError(f"arity mismatch: polynomial in {p.k} variables, region in {r.k}")
    out = []
    for exps, c in p.items():
        # substitute u_pi(l) = v_l: the exponent of v_l is that of u_pi(l)
        v_exps = [exps[r.ordering[l] - 1] for l in range(r.k)]
        out.append(c * simplex_monomial_integral(r.k, v_exps))
    total = sum_scalars(out)
    return total if r.orientation == 1 else -total


def integrate_over_cube(p: UPolynomial) -> EpsScalar:
    """Direct integral over ``[0,1]^k``: ``prod 1/(m_i+1)``."""
    out = []
    for exps, c in p.items():
        v = Fraction(1)
        for m in exps:
            v /= m + 1
        out.append(c * v)
    return sum_scalars(out)


def psi_branch(i_first: bool) -> int:
    """Constant of the affine branch: ``psi(u_i - u_j) = 2(u_i - u_j) + psi_branch``.

    On ``u_i < u_j`` the difference lies in [-1, 0) where psi(d) = 2d + 1; on
    ``u_i > u_j`` periodicity gives 2d - 1.
    """
    return 1 if i_first else -1


# Cycle integrals.  Polynomials below are plain dicts exps -> Fraction in the
# sorted position variables v_1 < ... < v_j, which is all these need.


def _poly_mul(a: dict, b: dict) -> dict:
    t: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            t[e] = t.get(e, 0) + ca * cb
    return {e: c for e, c in t.items() if c}


def _cycle_region_integral(j: int, pos: Sequence[int]) -> Fraction:
    """Integral of prod psi(u_i - u_{i+1}) over the region where label i sits at ``pos[i]``.

    Iterated integration over the sorted positions ``v_0 < v_1 < ... < v_{j-1}``:
    each factor is multiplied in just before its lowest variable is integrated
    out, which keeps the intermediate polynomials small.  Exponent vectors of
    the running polynomial are indexed by position.
    """
    buckets: list[list[tuple[int, int, int]]] = [[] for _ in range(j)]
    for i in range(j):
        a, b = pos[i], pos[(i + 1) % j]
        # psi(v_a - v_b) = 2 v_a - 2 v_b + (1 if v_a < v_b else -1)
        buckets[min(a, b)].append((a, b, psi_branch(a < b)))
    poly: dict = {(0,) * j: Fraction(1)}
    for level in range(j):
        for a, b, c in buckets[level]:
            nxt: dict = {}
            for e, v in poly.items():
                for var, w in ((a, 2), (b, -2)):
                    ne = e[:var] + (e[var] + 1,) + e[var + 1:]
                    nxt[ne] = nxt.get(ne, 0) + v * w
                nxt[e] = nxt.get(e, 0) + v * c
            poly = {e: v for e, v in nxt.items() if v}
        # integrate v_level from 0 to v_{level+1} (to 1 for the last one)
        nxt = {}
        for e, v in poly.items():
            m = e[level] + 1
            if level + 1 < j:
                ne = e[:level] + (0, e[level + 1] + m) + e[level + 2:]
            else:
                ne = e[:level] + (0,)
            nxt[ne] = nxt.get(ne, 0) + v / m
        poly = {e: v for e, v in nxt.items() if v}
    return poly.get((0,) * j, Fraction(0))


def _dihedral_canonical(pos: tuple, j: int) -> tuple[tuple, int]:
    """Smallest relabelling of ``pos`` under rotations and reflections of the cycle.

    Returns the representative and the sign relating the two region integrals:
    reversing the cycle flips every psi (psi is odd), a factor ``(-1)^j``.
    """
    best, sign = None, 1
    reflected = tuple(pos[(-i) % j] for i in range(j))
    for cand, sgn in ((pos, 1), (reflected, (-1) ** j)):
        for shift in range(j):
            rot = cand[shift:] + cand[:shift]
            if best is None or rot < best:
                best, sign = rot, sgn
    return best, sign


@lru_cache(maxsize=None)
def psi_cycle_integral(j: int, method: str = "orbits") -> Fraction:
    """``I_j = int_{[0,1]^j} psi(u_1-u_2) psi(u_2-u_3) ... psi(u_j-u_1) du``.

    The cube is cut into the ``j!`` ordering regions; on each one every psi is
    affine.  ``method="full"`` integrates every region separately.  The default
    ``"orbits"`` uses that relabelling ``u_i -> u_{i+1}`` permutes the regions
    and preserves the integrand, while ``u_i -> u_{-i}`` multiplies it by
    ``(-1)^j``; it integrates one region per dihedral orbit and weights it by
    the signed orbit size.
    """
    if j < 2:
        raise ValueError("j must be >= 2")
    if method == "full":
        return sum(
            (_cycle_region_integral(j, pos) for pos in permutations(range(j))), Fraction(0)
        )
    if method != "orbits":
        raise ValueError(f"unknown method {method!r}")
    orbits: dict[tuple, int] = {}
    for pos in permutations(range(j)):
        key, sign = _dihedral_canonical(pos, j)
        orbits[key] = orbits.get(key, 0) + sign
    return sum(
        (mult * _cycle_region_integral(j, key) for key, mult in orbits.items() if mult),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number ``B_m`` with ``B_1 = -1/2``, from ``sum_{k<=m} C(m+1,k) B_k = 0``."""
    if m == 0:
        return Fraction(1)
    return -sum((comb(m + 1, k) * bernoulli(k) for k in range(m)), Fraction(0)) / (m + 1)


def closed_form_I(j: int) -> Fraction:
    """``I_j = 2 (pi i)^-j zeta(j)`` for even j, 0 for odd j; rationally ``-B_j 4^(j/2) / j!``."""
    if j < 2:
        raise ValueError("j must be >= 2")
    if j % 2:
        return Fraction(0)
    return -bernoulli(j) * 4 ** (j // 2) / factorial(j)
