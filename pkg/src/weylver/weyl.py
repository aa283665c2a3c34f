"""The polynomial Weyl algebra with the Moyal product.

Variables are ``y_1..y_2n`` with ``y_{2i-1} = p_i`` and ``y_{2i} = q_i``.
A :class:`WeylElement` is stored as a flat map ``(y-exponents, e-exponent)
-> Fraction``; ``*`` is the ordinary commutative product of polynomials and
:meth:`WeylElement.star` is the Moyal product.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Mapping, Sequence

from .scalars import EpsScalar, as_fraction, as_scalar, format_scalar

__all__ = [
    "WeylElement",
    "SpMatrix",
    "DimensionError",
    "moyal",
    "bracket",
    "partial_derivative",
    "eval_at_zero",
    "graded_degree",
    "sp_to_quadratic",
    "quadratic_to_sp",
    "sp_action",
    "omega",
    "var_name",
]

HALF = Fraction(1, 2)


class DimensionError(ValueError):
    """Operands live in Weyl algebras of different rank."""


def var_name(index: int) -> str:
    """Name of ``y_index`` (1-based): ``p1, q1, p2, ...``."""
    i, r = divmod(index - 1, 2)
    return f"{'pq'[r]}{i + 1}"


class WeylElement:
    __slots__ = ("n", "_c", "_hash")

    def __init__(self, n: int, terms: Mapping | None = None):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        c: dict = {}
        if terms:
            for key, v in terms.items():
                exps, e = key
                exps = tuple(exps)
                if len(exps) != 2 * n or any(x < 0 for x in exps):
                    raise ValueError(f"bad exponent vector {exps} for n={n}")
                v = as_fraction(v)
                if v:
                    k = (exps, int(e))
                    s = c.get(k, 0) + v
                    if s:
                        c[k] = s
                    else:
                        c.pop(k, None)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, n: int, c: dict) -> "WeylElement":
        obj = cls.__new__(cls)
        obj.n = n
        obj._c = c
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, n: int) -> "WeylElement":
        return cls._raw(n, {})

    @classmethod
    def scalar(cls, n: int, s) -> "WeylElement":
        s = as_scalar(s)
        z = (0,) * (2 * n)
        return cls._raw(n, {(z, e): v for e, v in s.items()})

    @classmethod
    def one(cls, n: int) -> "WeylElement":
        return cls.scalar(n, 1)

    @classmethod
    def var(cls, n: int, index: int) -> "WeylElement":
        if not 1 <= index <= 2 * n:
            raise ValueError(f"variable y{index} out of range for n={n}")
        exps = [0] * (2 * n)
        exps[index - 1] = 1
        return cls._raw(n, {(tuple(exps), 0): Fraction(1)})

    @classmethod
    def p(cls, n: int, i: int) -> "WeylElement":
        return cls.var(n, 2 * i - 1)

    @classmethod
    def q(cls, n: int, i: int) -> "WeylElement":
        return cls.var(n, 2 * i)

    @classmethod
    def monomial(cls, n: int, exps: Sequence[int], coeff=1, eps: int = 0) -> "WeylElement":
        return cls(n, {(tuple(exps), eps): coeff})

    @classmethod
    def from_coefficients(cls, n: int, coeffs: Mapping[tuple, EpsScalar]) -> "WeylElement":
        c = {}
        for exps, s in coeffs.items():
            for e, v in as_scalar(s).items():
                c[(tuple(exps), e)] = v
        return cls(n, c)

    # views

    @property
    def terms(self) -> dict[tuple, EpsScalar]:
        """Map y-exponent vector -> EpsScalar coefficient."""
        acc: dict[tuple, dict] = {}
        for (exps, e), v in self._c.items():
            acc.setdefault(exps, {})[e] = v
        return {k: EpsScalar._raw(v) for k, v in acc.items()}

    def raw_items(self):
        return self._c.items()

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_scalar(self) -> bool:
        """True if there is no y-dependence (zero counts as a scalar)."""
        return all(not any(exps) for exps, _ in self._c)

    def y_degree(self) -> int:
        """Maximal total y-degree; -1 for zero."""
        return max((sum(exps) for exps, _ in self._c), default=-1)

    def constant_term(self) -> EpsScalar:
        z = (0,) * (2 * self.n)
        return EpsScalar._raw({e: v for (exps, e), v in self._c.items() if exps == z})

    def y_homogeneous_part(self, d: int) -> "WeylElement":
        return WeylElement._raw(self.n, {k: v for k, v in self._c.items() if sum(k[0]) == d})

    def without_constant(self) -> "WeylElement":
        return WeylElement._raw(self.n, {k: v for k, v in self._c.items() if any(k[0])})

    def monomials(self):
        """Yield ``(exps, EpsScalar)`` pairs."""
        return self.terms.items()

    # arithmetic

    def _check(self, other: "WeylElement") -> None:
        if not isinstance(other, WeylElement):
            raise TypeError(f"expected WeylElement, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other) -> "WeylElement":
        if not isinstance(other, WeylElement):
            other = WeylElement.scalar(self.n, other)
        self._check(other)
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k)
            if s is None:
                c[k] = v
            else:
                s += v
                if s:
                    c[k] = s
                else:
                    del c[k]
        return WeylElement._raw(self.n, c)

    __radd__ = __add__

    def __neg__(self) -> "WeylElement":
        return WeylElement._raw(self.n, {k: -v for k, v in self._c.items()})

    def __sub__(self, other) -> "WeylElement":
        if not isinstance(other, WeylElement):
            other = WeylElement.scalar(self.n, other)
        return self + (-other)

    def __rsub__(self, other) -> "WeylElement":
        return (-self) + other

    def scale(self, s) -> "WeylElement":
        if isinstance(s, (int, Fraction)):
            if not s:
                return WeylElement.zero(self.n)
            return WeylElement._raw(self.n, {k: v * s for k, v in self._c.items()})
        s = as_scalar(s)
        c: dict = {}
        for (exps, e), v in self._c.items():
            for e2, v2 in s.items():
                k = (exps, e + e2)
                c[k] = c.get(k, 0) + v * v2
        return WeylElement._raw(self.n, {k: v for k, v in c.items() if v})

    def __mul__(self, other) -> "WeylElement":
        """Commutative (pointwise) product; scalars are accepted."""
        if not isinstance(other, WeylElement):
            return self.scale(other)
        self._check(other)
        c: dict = {}
        for (a, ea), va in self._c.items():
            for (b, eb), vb in other._c.items():
                k = (tuple(x + y for x, y in zip(a, b)), ea + eb)
                c[k] = c.get(k, 0) + va * vb
        return WeylElement._raw(self.n, {k: v for k, v in c.items() if v})

    def __rmul__(self, other) -> "WeylElement":
        return self.scale(other)

    def __pow__(self, k: int) -> "WeylElement":
        out = WeylElement.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def star(self, other: "WeylElement") -> "WeylElement":
        return moyal(self, other)

    def partial(self, index: int) -> "WeylElement":
        return partial_derivative(self, index)

    def shift_eps(self, k: int) -> "WeylElement":
        return WeylElement._raw(self.n, {(exps, e + k): v for (exps, e), v in self._c.items()})

    def substitute_shift(self, point: Sequence) -> "WeylElement":
        """Return ``f(point + y)`` for an exact rational ``point`` of length 2n."""
        if len(point) != 2 * self.n:
            raise DimensionError("point has wrong length")
        pt = [as_fraction(x) for x in point]
        out = WeylElement.zero(self.n)
        for (exps, e), v in self._c.items():
            term = WeylElement.scalar(self.n, EpsScalar.monomial(v, e))
            for idx, m in enumerate(exps):
                if m:
                    lin = WeylElement.var(self.n, idx + 1) + pt[idx]
                    term = term * lin ** m
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> EpsScalar:
        """Value at a rational point (e is kept symbolic)."""
        return self.substitute_shift(point).constant_term()

    def __eq__(self, other) -> bool:
        if isinstance(other, WeylElement):
            return self.n == other.n and self._c == other._c
        if isinstance(other, (int, Fraction, EpsScalar)):
            return self == WeylElement.scalar(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._c.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"WeylElement(n={self.n}, {self})"

    def __str__(self) -> str:
        return format_weyl(self)


def format_weyl(f: WeylElement) -> str:
    """Render in the CLI grammar, e.g. ``p1*q1 + 1/2*e``."""
    if f.is_zero():
        return "0"
    pieces = []
    for exps in sorted(f.terms, key=lambda x: (sum(x), x)):
        coeff = f.terms[exps]
        mono = "*".join(
            var_name(i + 1) + (f"^{m}" if m > 1 else "") for i, m in enumerate(exps) if m
        )
        if not mono:
            pieces.append(format_scalar(coeff))
            continue
        if coeff == 1:
            pieces.append(mono)
        elif coeff == -1:
            pieces.append("-" + mono)
        elif len(coeff.terms) == 1:
            pieces.append(f"{format_scalar(coeff)}*{mono}")
        else:
            # a*m + b*e*m written out termwise to stay inside the grammar
            for e, v in sorted(coeff.items()):
                pieces.append(f"{format_scalar(EpsScalar.monomial(v, e))}*{mono}")
    out = pieces[0]
    for piece in pieces[1:]:
        out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
    return out


def partial_derivative(f: WeylElement, index: int) -> WeylElement:
    """Formal derivative in ``y_index`` (1-based)."""
    if not 1 <= index <= 2 * f.n:
        raise ValueError(f"variable y{index} out of range for n={f.n}")
    j = index - 1
    c: dict = {}
    for (exps, e), v in f._c.items():
        m = exps[j]
        if m:
            new = exps[:j] + (m - 1,) + exps[j + 1:]
            c[(new, e)] = v * m
    return WeylElement._raw(f.n, c)


def eval_at_zero(f: WeylElement) -> EpsScalar:
    return f.constant_term()


def graded_degree(f: WeylElement) -> int | None:
    """Common degree with deg y = 1, deg e = 2; ``None`` if f is not homogeneous."""
    degs = {sum(exps) + 2 * e for exps, e in f._c}
    if len(degs) == 1:
        return degs.pop()
    return None


def _falling(m: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= m - i
    return out


@lru_cache(maxsize=None)
def _pair_expansion(ap: int, aq: int, bp: int, bq: int) -> tuple:
    """Terms of exp(e*alpha_r) on p^ap q^aq (x) p^bp q^bq for a single index r.

    alpha_r = 1/2 (d_p (x) d_q - d_q (x) d_p); the two pieces commute, so the
    exponential splits into s applications of the first and t of the second.
    Returns tuples ``(ds_p_f, ds_q_f, ds_p_g, ds_q_g, e_power, coeff)``.
    """
    out = []
    for s in range(min(ap, bq) + 1):
        for t in range(min(aq, bp) + 1):
            coeff = (
                Fraction(_falling(ap, s) * _falling(aq, t) * _falling(bq, s) * _falling(bp, t),
                         factorial(s) * factorial(t) * 2 ** (s + t))
                * (-1) ** t
            )
            out.append((s, t, t, s, s + t, coeff))
    return tuple(out)


def moyal(f: WeylElement, g: WeylElement) -> WeylElement:
    """Moyal product ``m(exp(e*alpha)(f (x) g))``."""
    f._check(g)
    n = f.n
    c: dict = {}
    for (a, ea), va in f._c.items():
        for (b, eb), vb in g._c.items():
            per_r = [
                _pair_expansion(a[2 * r], a[2 * r + 1], b[2 * r], b[2 * r + 1]) for r in range(n)
            ]
            base = va * vb
            for choice in product(*per_r):
                exps = []
                coeff = base
                epow = ea + eb
                for r, (dpf, dqf, dpg, dqg, ep, cf) in enumerate(choice):
                    exps.append(a[2 * r] - dpf + b[2 * r] - dpg)
                    exps.append(a[2 * r + 1] - dqf + b[2 * r + 1] - dqg)
                    coeff = coeff * cf
                    epow += ep
                k = (tuple(exps), epow)
                c[k] = c.get(k, 0) + coeff
    return WeylElement._raw(n, {k: v for k, v in c.items() if v})


def bracket(f: WeylElement, g: WeylElement) -> WeylElement:
    """``[f, g]_e = (f*g - g*f)/e``; the e^0 part of the commutator must vanish."""
    f._check(g)
    # Only the terms with at least one contraction survive the antisymmetrisation,
    # so the commutator is e times something; we build it from those terms directly
    # and check the zero-contraction part really cancels.
    comm = moyal(f, g) - moyal(g, f)
    if (f * g - g * f).is_zero() is False:
        raise ArithmeticError("zeroth-order part of the commutator does not cancel")
    return comm.shift_eps(-1)


# symplectic structure and sp_2n


def omega(n: int) -> tuple:
    """The 2n x 2n matrix of the standard symplectic form (0-based).

    omega[q_i][p_i] = +1 and omega[p_i][q_i] = -1.
    """
    w = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        w[2 * i + 1][2 * i] = 1
        w[2 * i][2 * i + 1] = -1
    return tuple(tuple(row) for row in w)


def _matmul(a, b):
    m = len(a)
    k = len(b)
    cols = len(b[0])
    return tuple(
        tuple(sum((a[i][l] * b[l][j] for l in range(k)), Fraction(0)) for j in range(cols))
        for i in range(m)
    )


class SpMatrix:
    """A 2n x 2n rational matrix ``a^i_j`` whose lowered form is symmetric."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries: Sequence[Sequence], check: bool = True):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in entries)
        if len(rows) != 2 * n or any(len(r) != 2 * n for r in rows):
            raise DimensionError(f"expected a {2 * n}x{2 * n} matrix")
        self.n = n
        self.entries = rows
        if check and not self.is_symplectic():
            raise ValueError("matrix is not in sp_2n: lowered matrix is not symmetric")

    @classmethod
    def zero(cls, n: int) -> "SpMatrix":
        return cls(n, [[0] * (2 * n) for _ in range(2 * n)])

    @classmethod
    def diag(cls, *values) -> "SpMatrix":
        n = len(values) // 2
        m = [[0] * (2 * n) for _ in range(2 * n)]
        for i, v in enumerate(values):
            m[i][i] = v
        return cls(n, m)

    def lowered(self) -> tuple:
        """``a_ij = sum_k omega_ik a^k_j``."""
        return _matmul(omega(self.n), self.entries)

    def is_symplectic(self) -> bool:
        low = self.lowered()
        size = 2 * self.n
        return all(low[i][j] == low[j][i] for i in range(size) for j in range(size))

    def __add__(self, other: "SpMatrix") -> "SpMatrix":
        return SpMatrix(self.n, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], check=False)

    def __sub__(self, other: "SpMatrix") -> "SpMatrix":
        return self + other.scale(-1)

    def scale(self, s) -> "SpMatrix":
        s = as_fraction(s)
        return SpMatrix(self.n, [[a * s for a in r] for r in self.entries], check=False)

    def matmul(self, other: "SpMatrix") -> tuple:
        return _matmul(self.entries, other.entries)

    def commutator(self, other: "SpMatrix") -> "SpMatrix":
        ab = self.matmul(other)
        ba = other.matmul(self)
        return SpMatrix(self.n, [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)], check=False)

    def power_trace(self, k: int) -> Fraction:
        m = self.entries
        acc = tuple(tuple(Fraction(int(i == j)) for j in range(2 * self.n)) for i in range(2 * self.n))
        for _ in range(k):
            acc = _matmul(acc, m)
        return sum((acc[i][i] for i in range(2 * self.n)), Fraction(0))

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def __eq__(self, other) -> bool:
        return isinstance(other, SpMatrix) and self.n == other.n and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.n, self.entries))

    def __repr__(self) -> str:
        return f"SpMatrix(n={self.n}, {[[str(x) for x in r] for r in self.entries]})"


def sp_to_quadratic(A: SpMatrix) -> WeylElement:
    """``A~ = 1/2 sum_ij a_ij y_i y_j`` with ``a_ij`` the lowered matrix."""
    if not A.is_symplectic():
        raise ValueError("matrix is not in sp_2n")
    low = A.lowered()
    size = 2 * A.n
    out: dict = {}
    for i in range(size):
        for j in range(size):
            if low[i][j]:
                exps = [0] * size
                exps[i] += 1
                exps[j] += 1
                k = (tuple(exps), 0)
                out[k] = out.get(k, 0) + HALF * low[i][j]
    return WeylElement(A.n, out)


def quadratic_to_sp(f: WeylElement) -> SpMatrix:
    """Inverse of :func:`sp_to_quadratic` on e-free homogeneous quadratics."""
    n = f.n
    size = 2 * n
    low = [[Fraction(0)] * size for _ in range(size)]
    for (exps, e), v in f._c.items():
        if e != 0 or sum(exps) != 2:
            raise ValueError(f"{f} is not an e-free homogeneous quadratic")
        idx = [i for i, m in enumerate(exps) for _ in range(m)]
        i, j = idx
        if i == j:
            low[i][i] += 2 * v
        else:
            low[i][j] += v
            low[j][i] += v
    # a^k_j = sum_i (omega^-1)_ki a_ij and omega^-1 = -omega
    w = omega(n)
    upper = [[-sum((w[k][i] * low[i][j] for i in range(size)), Fraction(0)) for j in range(size)]
             for k in range(size)]
    return SpMatrix(n, upper)


def sp_action(A: SpMatrix, f: WeylElement) -> WeylElement:
    """``(Af)(y) = d/dt f(exp(-tA) y)|_{t=0} = -sum_ij a^i_j y_j d_i f``."""
    if A.n != f.n:
        raise DimensionError(f"dimension mismatch: n={A.n} vs n={f.n}")
    size = 2 * f.n
    out = WeylElement.zero(f.n)
    for i in range(size):
        di = partial_derivative(f, i + 1)
        if di.is_zero():
            continue
        for j in range(size):
            a = A.entries[i][j]
            if a:
                out = out - WeylElement.var(f.n, j + 1) * di.scale(a)
    return out
