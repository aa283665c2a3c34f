"""Hochschild chains of the Weyl algebra, the boundary map and the normalized complex."""
from __future__ import annotations

import random
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .scalars import EpsScalar, ONE, as_scalar
from .weyl import DimensionError, WeylElement, moyal

__all__ = [
    "ChainTensor",
    "hochschild_boundary",
    "canonical_cycle",
    "normalize_chain",
    "random_element",
    "random_chain",
    "perm_sign",
]


def perm_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct comparable items."""
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


class ChainTensor:
    """A K-linear combination of elementary tensors ``a_0 (x) ... (x) a_k``."""

    __slots__ = ("n", "k", "_t")

    def __init__(self, n: int, k: int, terms: Mapping | Iterable = ()):
        self.n = n
        self.k = k
        t: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, coeff in items:
            # accept both (coeff, slots) and slots -> coeff
            if isinstance(key, tuple) and key and isinstance(key[0], WeylElement):
                slots, c = key, coeff
            else:
                c, slots = key, coeff
            slots = tuple(slots)
            self._validate(slots)
            c = as_scalar(c)
            if c.is_zero() or any(s.is_zero() for s in slots):
                continue
            s = t.get(slots)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(slots, None)
            else:
                t[slots] = s
        self._t = t

    def _validate(self, slots: tuple) -> None:
        if len(slots) != self.k + 1:
            raise ValueError(f"expected {self.k + 1} tensor slots, got {len(slots)}")
        for s in slots:
            if not isinstance(s, WeylElement):
                raise TypeError("tensor slots must be WeylElements")
            if s.n != self.n:
                raise DimensionError(f"dimension mismatch: n={self.n} vs n={s.n}")

    @classmethod
    def elementary(cls, *slots: WeylElement, coeff=ONE) -> "ChainTensor":
        if not slots:
            raise ValueError("need at least one slot")
        return cls(slots[0].n, len(slots) - 1, [(coeff, slots)])

    @classmethod
    def zero(cls, n: int, k: int) -> "ChainTensor":
        return cls(n, k)

    @property
    def degree(self) -> int:
        return self.k

    @property
    def terms(self) -> list[tuple[EpsScalar, tuple]]:
        return [(c, s) for s, c in self._t.items()]

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def __len__(self) -> int:
        return len(self._t)

    def _check(self, other: "ChainTensor") -> None:
        if (self.n, self.k) != (other.n, other.k):
            raise DimensionError("chains differ in n or degree")

    def __add__(self, other: "ChainTensor") -> "ChainTensor":
        self._check(other)
        return ChainTensor(self.n, self.k, list(self._t.items()) + list(other._t.items()))

    def __neg__(self) -> "ChainTensor":
        return ChainTensor(self.n, self.k, {s: -c for s, c in self._t.items()})

    def __sub__(self, other: "ChainTensor") -> "ChainTensor":
        return self + (-other)

    def scale(self, c) -> "ChainTensor":
        c = as_scalar(c)
        return ChainTensor(self.n, self.k, {s: v * c for s, v in self._t.items()})

    __rmul__ = scale

    def expanded(self) -> dict[tuple, EpsScalar]:
        """Fully multilinear expansion: ``(exps_0, ..., exps_k) -> coefficient``.

        Coefficients of every slot are pulled out in front, so two chains that
        agree as elements of the tensor product over K have equal expansions.
        """
        out: dict[tuple, EpsScalar] = {}
        for slots, c in self._t.items():
            acc = {(): c}
            for s in slots:
                nxt = {}
                mono = s.terms
                for key, v in acc.items():
                    for exps, w in mono.items():
                        nk = key + (exps,)
                        prod = v * w
                        prev = nxt.get(nk)
                        nxt[nk] = prod if prev is None else prev + prod
                acc = nxt
            for key, v in acc.items():
                prev = out.get(key)
                out[key] = v if prev is None else prev + v
        return {k: v for k, v in out.items() if not v.is_zero()}

    def equivalent(self, other: "ChainTensor") -> bool:
        """Equality in the tensor product over K (multilinear normal form)."""
        self._check(other)
        return self.expanded() == other.expanded()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainTensor):
            return NotImplemented
        return (self.n, self.k) == (other.n, other.k) and self.expanded() == other.expanded()

    def __hash__(self) -> int:
        return hash((self.n, self.k, frozenset(self.expanded().items())))

    def __repr__(self) -> str:
        return f"ChainTensor(n={self.n}, k={self.k}, {self})"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for slots, c in self._t.items():
            body = " | ".join(f"({s})" for s in slots)
            parts.append(body if c == 1 else f"[{c}] {body}")
        return " + ".join(parts)


def hochschild_boundary(c: ChainTensor) -> ChainTensor:
    """``d(a_0 (x) ... (x) a_k)``: inner products with alternating signs and the wrap-around term."""
    k = c.k
    if k < 1:
        raise ValueError("the boundary needs degree >= 1")
    out = []
    for slots, coeff in c.items():
        for i in range(k):
            merged = slots[:i] + (moyal(slots[i], slots[i + 1]),) + slots[i + 2:]
            out.append((coeff if i % 2 == 0 else -coeff, merged))
        wrap = (moyal(slots[k], slots[0]),) + slots[1:k]
        out.append((coeff if k % 2 == 0 else -coeff, wrap))
    return ChainTensor(c.n, k - 1, out)


def canonical_cycle(n: int) -> ChainTensor:
    """``sum_sigma sign(sigma) 1 (x) y_sigma(1) (x) ... (x) y_sigma(2n)``."""
    one = WeylElement.one(n)
    ys = [WeylElement.var(n, i) for i in range(1, 2 * n + 1)]
    terms = []
    for perm in permutations(range(2 * n)):
        terms.append((perm_sign(perm), (one,) + tuple(ys[i] for i in perm)))
    return ChainTensor(n, 2 * n, terms)


def normalize_chain(c: ChainTensor) -> ChainTensor:
    """Project to ``A (x) (A/K1)^k``: strip constant terms from slots >= 1."""
    out = []
    for slots, coeff in c.items():
        rest = tuple(s.without_constant() for s in slots[1:])
        if any(s.is_zero() for s in rest):
            continue
        out.append((coeff, (slots[0],) + rest))
    return ChainTensor(c.n, c.k, out)


def random_element(
    rng: random.Random,
    n: int,
    max_deg: int,
    n_terms: int = 2,
    eps_window: tuple[int, int] = (0, 1),
    min_deg: int = 0,
    coeff_range: int = 3,
) -> WeylElement:
    """A random element with ``n_terms`` monomials.

    Each monomial picks a total y-degree uniformly in ``[min_deg, max_deg]``,
    distributes it over the 2n variables uniformly at random, an e-exponent
    uniformly in ``eps_window`` and a nonzero integer coefficient in
    ``[-coeff_range, coeff_range]``.  Cancellation may leave fewer terms; the
    result is never zero.
    """
    while True:
        c = {}
        for _ in range(n_terms):
            d = rng.randint(min_deg, max_deg)
            exps = [0] * (2 * n)
            for _ in range(d):
                exps[rng.randrange(2 * n)] += 1
            e = rng.randint(*eps_window)
            v = rng.choice([x for x in range(-coeff_range, coeff_range + 1) if x])
            key = (tuple(exps), e)
            c[key] = c.get(key, 0) + v
        f = WeylElement(n, c)
        if not f.is_zero():
            return f


def random_chain(
    rng: random.Random,
    n: int,
    k: int,
    max_deg: int,
    n_terms: int = 2,
    eps_window: tuple[int, int] = (0, 1),
    normalized: bool = True,
) -> ChainTensor:
    """An elementary random k-chain; slots >= 1 have positive y-degree when normalized."""
    slots = [random_element(rng, n, max_deg, n_terms, eps_window)]
    for _ in range(k):
        slots.append(
            random_element(rng, n, max(max_deg, 1), n_terms, eps_window, min_deg=1 if normalized else 0)
        )
    return ChainTensor.elementary(*slots)
