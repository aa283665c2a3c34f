"""Lie algebra cochains on gl_N of the Weyl algebra and the cocycle Theta.

The Lie bracket on ``gl_N(A)`` is ``[X, Y] = (X*Y - Y*X)/e`` with ``*`` the
matrix product over the Moyal product; on ``M (x) a`` it combines the matrix
commutator with the e-bracket.  Cochains are plain callables: a trivial
p-cochain maps a list of p arguments to an EpsScalar, a coadjoint one maps
``(args, target)`` to an EpsScalar, the target being the argument of the
functional on ``gl_N(A)``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .cocycle import tau_eval
from .hochschild import ChainTensor, perm_sign
from .scalars import EpsScalar, as_scalar, sum_scalars
from .weyl import DimensionError, WeylElement, moyal

__all__ = [
    "GlWeylElement",
    "WedgeTuple",
    "gl_bracket",
    "d_lie_eval",
    "cup_product",
    "phi_n_apply",
    "theta_eval",
    "theta_invariance_sum",
    "horizontal_jet",
    "flat_trace_density",
    "flat_connection_components",
]


class GlWeylElement:
    """An N x N matrix of WeylElements, stored sparsely as ``(row, col) -> entry``."""

    __slots__ = ("n", "N", "_e")

    def __init__(self, n: int, N: int, entries: Mapping[tuple[int, int], WeylElement] | None = None):
        if N < 1:
            raise ValueError("N must be >= 1")
        self.n = n
        self.N = N
        e: dict = {}
        for (r, c), f in (entries or {}).items():
            if not (0 <= r < N and 0 <= c < N):
                raise IndexError(f"entry ({r},{c}) outside a {N}x{N} matrix")
            if f.n != n:
                raise DimensionError(f"entry lives in n={f.n}, expected n={n}")
            if not f.is_zero():
                prev = e.get((r, c))
                g = f if prev is None else prev + f
                if g.is_zero():
                    e.pop((r, c), None)
                else:
                    e[(r, c)] = g
        self._e = e

    @classmethod
    def tensor(cls, M: Sequence[Sequence], a: WeylElement) -> "GlWeylElement":
        """``M (x) a`` for a rational (or EpsScalar) matrix M."""
        N = len(M)
        entries = {}
        for r in range(N):
            if len(M[r]) != N:
                raise ValueError("matrix must be square")
            for c in range(N):
                if M[r][c]:
                    entries[(r, c)] = a.scale(M[r][c])
        return cls(a.n, N, entries)

    @classmethod
    def unit(cls, N: int, r: int, c: int, a: WeylElement) -> "GlWeylElement":
        """``E_rc (x) a`` with 0-based r, c."""
        return cls(a.n, N, {(r, c): a})

    @classmethod
    def scalar(cls, N: int, a: WeylElement) -> "GlWeylElement":
        """``Id_N (x) a``."""
        return cls(a.n, N, {(r, r): a for r in range(N)})

    @classmethod
    def identity(cls, n: int, N: int) -> "GlWeylElement":
        return cls.scalar(N, WeylElement.one(n))

    @classmethod
    def zero(cls, n: int, N: int) -> "GlWeylElement":
        return cls(n, N)

    def entry(self, r: int, c: int) -> WeylElement:
        return self._e.get((r, c)) or WeylElement.zero(self.n)

    def items(self):
        return self._e.items()

    def is_zero(self) -> bool:
        return not self._e

    def _check(self, other: "GlWeylElement") -> None:
        if (self.n, self.N) != (other.n, other.N):
            raise DimensionError(f"mismatch: (n,N)=({self.n},{self.N}) vs ({other.n},{other.N})")

    def __add__(self, other: "GlWeylElement") -> "GlWeylElement":
        self._check(other)
        e = dict(self._e)
        for k, f in other._e.items():
            e[k] = e[k] + f if k in e else f
        return GlWeylElement(self.n, self.N, e)

    def __neg__(self) -> "GlWeylElement":
        return GlWeylElement(self.n, self.N, {k: -f for k, f in self._e.items()})

    def __sub__(self, other: "GlWeylElement") -> "GlWeylElement":
        return self + (-other)

    def scale(self, s) -> "GlWeylElement":
        return GlWeylElement(self.n, self.N, {k: f.scale(s) for k, f in self._e.items()})

    def star(self, other: "GlWeylElement") -> "GlWeylElement":
        """Matrix product with Moyal-multiplied entries."""
        self._check(other)
        out: dict = {}
        for (r, m), f in self._e.items():
            for (m2, c), g in other._e.items():
                if m == m2:
                    h = moyal(f, g)
                    out[(r, c)] = out[(r, c)] + h if (r, c) in out else h
        return GlWeylElement(self.n, self.N, out)

    def map_entries(self, fn: Callable[[WeylElement], WeylElement]) -> "GlWeylElement":
        return GlWeylElement(self.n, self.N, {k: fn(f) for k, f in self._e.items()})

    def pad(self, N2: int) -> "GlWeylElement":
        """Embed into the top-left corner of an ``N2 x N2`` matrix."""
        if N2 < self.N:
            raise ValueError("cannot pad to a smaller size")
        return GlWeylElement(self.n, N2, dict(self._e))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GlWeylElement)
            and (self.n, self.N) == (other.n, other.N)
            and self._e == other._e
        )

    def __hash__(self) -> int:
        return hash((self.n, self.N, frozenset(self._e.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"E{r + 1}{c + 1}*({f})" for (r, c), f in sorted(self._e.items()))
        return f"GlWeylElement(n={self.n}, N={self.N}, {body or '0'})"


def as_gl(x, N: int = 1) -> GlWeylElement:
    if isinstance(x, GlWeylElement):
        return x
    if isinstance(x, WeylElement):
        return GlWeylElement.scalar(N, x)
    raise TypeError(f"cannot use {type(x).__name__} as a gl_N element")


class WedgeTuple:
    """Arguments ``v_1 ^ ... ^ v_k`` of a Lie cochain."""

    __slots__ = ("items",)

    def __init__(self, items: Iterable, N: int | None = None):
        items = list(items)
        if N is None:
            N = next((x.N for x in items if isinstance(x, GlWeylElement)), 1)
        self.items = tuple(as_gl(x, N) for x in items)
        if len({(x.n, x.N) for x in self.items}) > 1:
            raise DimensionError("wedge arguments differ in n or N")

    @property
    def arity(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def swapped(self, i: int, j: int) -> "WedgeTuple":
        items = list(self.items)
        items[i], items[j] = items[j], items[i]
        return WedgeTuple(items)


def gl_bracket(x: GlWeylElement, y: GlWeylElement) -> GlWeylElement:
    """``[x, y] = (x*y - y*x)/e``."""
    comm = x.star(y) - y.star(x)
    return comm.map_entries(lambda f: f.shift_eps(-1))


def _args(args) -> tuple:
    return tuple(args.items) if isinstance(args, WedgeTuple) else tuple(args)


def d_lie_eval(
    c: Callable,
    args,
    target: GlWeylElement | None = None,
    module: str = "trivial",
    bracket: Callable = gl_bracket,
) -> EpsScalar:
    """``d c(a_1 ^ ... ^ a_{p+1})``.

    ``sum_i (-1)^(i-1) a_i . c(..a_i omitted..) + sum_{i<j} (-1)^(i+j) c([a_i,a_j] ^ ...)``.
    With ``module="coadjoint"`` the cochain takes ``(args, target)`` and
    ``(a . phi)(Z) = -phi([a, Z])``; with ``"trivial"`` the action is zero.
    """
    a = _args(args)
    m = len(a)
    if module not in ("trivial", "coadjoint"):
        raise ValueError(f"unknown module {module!r}")
    if module == "coadjoint" and target is None:
        raise ValueError("coadjoint cochains need a target")

    def call(lst, tgt=target):
        return c(list(lst), tgt) if module == "coadjoint" else c(list(lst))

    out = []
    if module == "coadjoint":
        for i in range(m):
            rest = a[:i] + a[i + 1:]
            val = call(rest, bracket(a[i], target))
            out.append(-val if i % 2 == 0 else val)
    for i in range(m):
        for j in range(i + 1, m):
            rest = (bracket(a[i], a[j]),) + a[:i] + a[i + 1:j] + a[j + 1:]
            val = call(rest)
            # 1-based signs (-1)^(i+j) equal the 0-based ones
            out.append(val if (i + j) % 2 == 0 else -val)
    return sum_scalars(as_scalar(v) for v in out)


def cup_product(c1: Callable, p: int, c2: Callable, q: int, args) -> EpsScalar:
    """Shuffle product of trivial-coefficient cochains of degrees p and q."""
    a = _args(args)
    if len(a) != p + q:
        raise ValueError(f"cup product of degrees {p}+{q} needs {p + q} arguments, got {len(a)}")
    out = []
    for first in combinations(range(p + q), p):
        second = tuple(i for i in range(p + q) if i not in first)
        sign = perm_sign(first + second)
        out.append(as_scalar(c1([a[i] for i in first])) * as_scalar(c2([a[i] for i in second])) * sign)
    return sum_scalars(out)


def _trace_chains(slots: Sequence[GlWeylElement]):
    """Yield ``(entries, ...)`` for index cycles ``i_0 -> i_1 -> ... -> i_0``.

    tr(E_{a0 b0} E_{a1 b1} ... ) is 1 exactly when b_l = a_{l+1} cyclically,
    so only chains of consecutive entries contribute.
    """
    by_row = []
    for s in slots:
        rows: dict = {}
        for (r, c), f in s.items():
            rows.setdefault(r, []).append((c, f))
        by_row.append(rows)

    def walk(level: int, start: int, cur: int, acc: list):
        if level == len(slots):
            if cur == start:
                yield tuple(acc)
            return
        for c, f in by_row[level].get(cur, ()):
            acc.append(f)
            yield from walk(level + 1, start, c, acc)
            acc.pop()

    for start in sorted(by_row[0]):
        yield from walk(0, start, start, [])


def phi_chain(args, target: GlWeylElement) -> ChainTensor:
    """The Hochschild chain paired with tau in ``phi^N(tau)(args)(target)``.

    ``sum_sigma sign(sigma) sum_chains X_0[i0,i1] (x) X_sigma(1)[i1,i2] (x) ... (x) X_sigma(k)[ik,i0]``.
    """
    a = _args(args)
    k = len(a)
    n = target.n
    for x in a:
        target._check(x)
    terms = []
    for perm in permutations(range(k)):
        sign = perm_sign(perm)
        slots = [target] + [a[i] for i in perm]
        for entries in _trace_chains(slots):
            terms.append((sign, entries))
    return ChainTensor(n, k, terms)


def phi_n_apply(tau: Callable, args, target: GlWeylElement) -> EpsScalar:
    """``phi^N(tau)(M_1 a_1, ..., M_k a_k)(M_0 a_0)`` extended bilinearly to all of gl_N(A).

    ``tau`` maps a degree-k ChainTensor to an EpsScalar.
    """
    return as_scalar(tau(phi_chain(args, target)))


def theta_eval(n: int, N: int, args, target, method: str = "contraction") -> EpsScalar:
    """``Theta^N_2n = phi^N(tau_2n)``."""
    a = WedgeTuple(_args(args), N)
    if a.arity != 2 * n:
        raise ValueError(f"Theta_{2 * n} takes {2 * n} arguments, got {a.arity}")
    target = as_gl(target, N)
    for x in a:
        if (x.n, x.N) != (n, N):
            raise DimensionError(f"argument has (n,N)=({x.n},{x.N}), expected ({n},{N})")
    if (target.n, target.N) != (n, N):
        raise DimensionError("target has the wrong (n, N)")
    return phi_n_apply(lambda c: tau_eval(n, c, method=method), a, target)


def theta_invariance_sum(n: int, N: int, a, args, target, method: str = "contraction") -> EpsScalar:
    """``sum_j Theta(a_1 ^ ... [a, a_j] ... ^ a_2n)(f) + Theta(a_1 ^ ... ^ a_2n)([a, f])``.

    Zero for ``a`` in sp_2n (a quadratic, embedded as ``Id (x) a``) or gl_N.
    """
    a = as_gl(a, N)
    lst = list(_args(args))
    target = as_gl(target, N)
    out = []
    for j in range(len(lst)):
        changed = lst[:j] + [gl_bracket(a, lst[j])] + lst[j + 1:]
        out.append(theta_eval(n, N, changed, target, method))
    out.append(theta_eval(n, N, lst, gl_bracket(a, target), method))
    return sum_scalars(out)


def horizontal_jet(n: int, f: WeylElement, x: Sequence) -> WeylElement:
    """The horizontal section of the flat connection through ``f`` at ``x``: ``f(x + y)``."""
    if f.n != n:
        raise DimensionError(f"f lives in n={f.n}, expected n={n}")
    if any(e for _, e in f._c):
        raise ValueError("the jet is defined for e-free functions")
    return f.substitute_shift(x)


def flat_connection_components(n: int) -> list[WeylElement]:
    """Components ``A(d_j) = sum_i omega_ij y_i`` of the flat connection's 1-form.

    With the fixed convention this gives ``A(d_{p_i}) = q_i`` and ``A(d_{q_i}) = -p_i``.
    """
    from .weyl import omega

    w = omega(n)
    out = []
    for j in range(2 * n):
        comp = WeylElement.zero(n)
        for i in range(2 * n):
            if w[i][j]:
                comp = comp + WeylElement.var(n, i + 1).scale(w[i][j])
        out.append(comp)
    return out


def flat_trace_density(n: int, f: WeylElement, x: Sequence, method: str = "contraction") -> EpsScalar:
    """Density of the trace of ``f`` at ``x`` with respect to the Liouville form.

    The 2n-form is ``(-1)^n/(2n)! Theta(A ^ ... ^ A)(f_hat)``.  Expanding the
    wedge over the frame gives ``sum_sigma sign(sigma) Theta(A_sigma(1), ...)``
    times ``dx_1 ^ ... ^ dx_2n``, and the Liouville form ``prod dq_i ^ dp_i``
    equals ``(-1)^n dx_1 ^ ... ^ dx_2n`` with ``x_{2i-1} = p_i``,
    ``x_{2i} = q_i``; the two ``(-1)^n`` cancel.
    """
    jet = horizontal_jet(n, f, x)
    comps = flat_connection_components(n)
    target = GlWeylElement.scalar(1, jet)
    total = []
    for perm in permutations(range(2 * n)):
        args = [GlWeylElement.scalar(1, comps[i]) for i in perm]
        total.append(theta_eval(n, 1, args, target, method) * perm_sign(perm))
    form = sum_scalars(total) * Fraction((-1) ** n, factorial(2 * n))
    return form * (-1) ** n
