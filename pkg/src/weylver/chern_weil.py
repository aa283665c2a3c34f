"""Chern-Weil side: projection, curvature, invariant polynomials and the Cartan formula.

h = sp_2n + gl_N sits in gl_N(A) as ``Id (x) A~`` plus ``M (x) 1``.  Because the
bracket of gl_N(A) carries a factor 1/e, constant matrices bracket as
``[M, M']/e`` while quadratics bracket as the matrix commutator of sp_2n.

Convention for invariant polynomials: ``P.taylor(X)`` is the degree-j Taylor
component ``T_j(X)`` of the generating series and ``P(X) = j! T_j(X)`` is the
diagonal value ``P(X, ..., X)`` of the symmetric j-linear form, so that the
series reads ``sum_j P(X, ..., X)/j!``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .cocycle import cube_value
from .hochschild import perm_sign
from .integrate import psi_cycle_integral
from .lie import GlWeylElement, WedgeTuple, as_gl, gl_bracket, theta_eval
from .scalars import EpsScalar, ONE, ZERO, as_scalar, sum_scalars
from .weyl import DimensionError, SpMatrix, WeylElement, quadratic_to_sp, sp_to_quadratic

__all__ = [
    "HElement",
    "CartanPoint",
    "InvariantPoly",
    "TPoly",
    "project_pr",
    "curvature_C",
    "polarize",
    "ahat_trace_table",
    "ahat_ch_component",
    "chi_eval",
    "special_vectors",
    "comb_factor",
    "cycle_partitions",
    "p_n_cartan_graphsum",
    "p_n_graphsum_series",
    "p_n_cartan_integral",
    "p_n_integral_at",
    "rrh_check",
    "rrh_tuples",
    "genfun_check",
    "ahat_genfun_series",
    "half_x_over_sinh_series",
]


# matrices over EpsScalar as tuples of tuples


def _mat(rows: Iterable[Iterable]) -> tuple:
    return tuple(tuple(as_scalar(x) for x in r) for r in rows)


def _mzero(size: int) -> tuple:
    return tuple(tuple(ZERO for _ in range(size)) for _ in range(size))


def _madd(a: tuple, b: tuple) -> tuple:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def _mscale(a: tuple, c) -> tuple:
    c = as_scalar(c)
    return tuple(tuple(x * c for x in r) for r in a)


def _mmul(a: tuple, b: tuple) -> tuple:
    size = len(a)
    cols = list(zip(*b))
    return tuple(
        tuple(sum_scalars(a[i][l] * cols[j][l] for l in range(size) if a[i][l] and cols[j][l]) for j in range(size))
        for i in range(size)
    )


def _mcomm(a: tuple, b: tuple) -> tuple:
    return _madd(_mmul(a, b), _mscale(_mmul(b, a), -1))


def _mtrace(a: tuple) -> EpsScalar:
    return sum_scalars(a[i][i] for i in range(len(a)))


def _power_trace(a: tuple, k: int) -> EpsScalar:
    size = len(a)
    if k == 0:
        return as_scalar(size)
    acc = a
    for _ in range(k - 1):
        acc = _mmul(acc, a)
    return _mtrace(acc)


def _is_zero_mat(a: tuple) -> bool:
    return all(x.is_zero() for r in a for x in r)


def _quadratic_to_matrix(f: WeylElement) -> tuple:
    """sp matrix (EpsScalar entries) of a homogeneous quadratic, sliced by e-power."""
    size = 2 * f.n
    out = _mzero(size)
    slices: dict[int, dict] = {}
    for (exps, e), v in f.raw_items():
        slices.setdefault(e, {})[(exps, 0)] = v
    for e, c in slices.items():
        A = quadratic_to_sp(WeylElement(f.n, c))
        out = _madd(out, _mat([[EpsScalar.monomial(x, e) for x in row] for row in A.entries]))
    return out


def _matrix_to_quadratic(n: int, m: tuple) -> WeylElement:
    out = WeylElement.zero(n)
    exps_set = {e for r in m for x in r for e, _ in x.items()}
    for e in exps_set:
        A = SpMatrix(n, [[x.coeff(e) for x in r] for r in m])
        out = out + sp_to_quadratic(A).shift_eps(e)
    return out


class HElement:
    """``X = X_1 + X_2`` in sp_2n + gl_N, both parts as EpsScalar matrices."""

    __slots__ = ("n", "N", "sp", "gl")

    def __init__(self, n: int, N: int, sp=None, gl=None):
        self.n = n
        self.N = N
        if sp is None:
            sp = _mzero(2 * n)
        elif isinstance(sp, SpMatrix):
            if sp.n != n:
                raise DimensionError("sp part has the wrong n")
            sp = _mat(sp.entries)
        else:
            sp = _mat(sp)
        gl = _mzero(N) if gl is None else _mat(gl)
        if len(sp) != 2 * n or len(gl) != N:
            raise DimensionError("part sizes do not match (n, N)")
        self.sp = sp
        self.gl = gl
        from .weyl import omega

        w = omega(n)
        size = 2 * n
        low = [[sum_scalars(sp[k][j] * w[i][k] for k in range(size) if w[i][k]) for j in range(size)] for i in range(size)]
        if any(low[i][j] != low[j][i] for i in range(size) for j in range(size)):
            raise ValueError("sp part violates the sp_2n symmetry condition")

    @property
    def sp_part(self) -> tuple:
        return self.sp

    @property
    def gl_part(self) -> tuple:
        return self.gl

    @classmethod
    def zero(cls, n: int, N: int) -> "HElement":
        return cls(n, N)

    def __add__(self, other: "HElement") -> "HElement":
        self._check(other)
        return HElement(self.n, self.N, _madd(self.sp, other.sp), _madd(self.gl, other.gl))

    def __neg__(self) -> "HElement":
        return self.scale(-1)

    def __sub__(self, other: "HElement") -> "HElement":
        return self + (-other)

    def scale(self, c) -> "HElement":
        return HElement(self.n, self.N, _mscale(self.sp, c), _mscale(self.gl, c))

    def _check(self, other: "HElement") -> None:
        if (self.n, self.N) != (other.n, other.N):
            raise DimensionError("HElements differ in (n, N)")

    def bracket(self, other: "HElement") -> "HElement":
        """Bracket inherited from gl_N(A): commutator on sp, commutator/e on gl_N."""
        self._check(other)
        gl = _mcomm(self.gl, other.gl)
        gl = tuple(tuple(x.shift(-1) for x in r) for r in gl)
        return HElement(self.n, self.N, _mcomm(self.sp, other.sp), gl)

    def to_gl_weyl(self) -> GlWeylElement:
        """``Id (x) X_1~ + X_2 (x) 1``."""
        q = _matrix_to_quadratic(self.n, self.sp)
        out = GlWeylElement.scalar(self.N, q)
        one = WeylElement.one(self.n)
        for r in range(self.N):
            for c in range(self.N):
                if self.gl[r][c]:
                    out = out + GlWeylElement.unit(self.N, r, c, one.scale(self.gl[r][c]))
        return out

    def is_zero(self) -> bool:
        return _is_zero_mat(self.sp) and _is_zero_mat(self.gl)

    def __eq__(self, other) -> bool:
        return isinstance(other, HElement) and (self.n, self.N, self.sp, self.gl) == (other.n, other.N, other.sp, other.gl)

    def __repr__(self) -> str:
        sp = [[str(x) for x in r] for r in self.sp]
        gl = [[str(x) for x in r] for r in self.gl]
        return f"HElement(sp={sp}, gl={gl})"


@dataclass(frozen=True)
class CartanPoint:
    """``X = -sum t_i q_i p_i + sum s_r E_rr``."""

    t: tuple
    s: tuple

    def __init__(self, t: Sequence, s: Sequence):
        object.__setattr__(self, "t", tuple(Fraction(x) for x in t))
        object.__setattr__(self, "s", tuple(as_scalar(x) for x in s))

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def N(self) -> int:
        return len(self.s)

    def quadratic(self) -> WeylElement:
        n = self.n
        out = WeylElement.zero(n)
        for i, ti in enumerate(self.t, start=1):
            out = out - (WeylElement.q(n, i) * WeylElement.p(n, i)).scale(ti)
        return out

    def to_h(self) -> HElement:
        gl = [[self.s[r] if r == c else ZERO for c in range(self.N)] for r in range(self.N)]
        return HElement(self.n, self.N, _quadratic_to_matrix(self.quadratic()), gl)

    def to_gl_weyl(self) -> GlWeylElement:
        return self.to_h().to_gl_weyl()


def project_pr(v: GlWeylElement) -> HElement:
    """``pr_1(M a) = tr(M)/N * a_2`` in sp_2n and ``pr_2(M a) = M a_0`` in gl_N."""
    n, N = v.n, v.N
    quad = WeylElement.zero(n)
    for r in range(N):
        quad = quad + v.entry(r, r).y_homogeneous_part(2)
    quad = quad.scale(Fraction(1, N))
    gl = [[v.entry(r, c).constant_term() for c in range(N)] for r in range(N)]
    return HElement(n, N, _quadratic_to_matrix(quad), gl)


def curvature_C(v, w, N: int | None = None) -> HElement:
    """``C(v, w) = [pr v, pr w] - pr [v, w]``."""
    if N is None:
        N = next((x.N for x in (v, w) if isinstance(x, GlWeylElement)), 1)
    v, w = as_gl(v, N), as_gl(w, N)
    if (v.n, v.N) != (w.n, w.N):
        raise DimensionError("arguments differ in (n, N)")
    return project_pr(v).bracket(project_pr(w)) - project_pr(gl_bracket(v, w))


class InvariantPoly:
    """Homogeneous invariant polynomial of degree j on h.

    ``taylor`` computes the Taylor component T_j; calling the object returns
    the diagonal value ``j! T_j``.  ``table`` (if present) maps
    ``(sp_powers, gl_powers)`` to coefficients of
    ``prod tr(X_1^k) prod tr(X_2^m)``.
    """

    def __init__(
        self,
        degree: int,
        taylor: Callable[[HElement], EpsScalar],
        table: Mapping | None = None,
        name: str = "",
        dims: tuple[int, int] | None = None,
    ):
        self.degree = degree
        self.dims = dims
        self.taylor = taylor
        self.table = dict(table) if table is not None else None
        self.name = name

    def __call__(self, X: HElement) -> EpsScalar:
        return self.taylor(X) * factorial(self.degree)

    @classmethod
    def from_table(cls, degree: int, table: Mapping, name: str = "", dims: tuple[int, int] | None = None) -> "InvariantPoly":
        table = {k: as_scalar(v) for k, v in table.items() if not as_scalar(v).is_zero()}

        def taylor(X: HElement) -> EpsScalar:
            cache: dict = {}

            def tr(part: str, k: int) -> EpsScalar:
                key = (part, k)
                if key not in cache:
                    cache[key] = _power_trace(X.sp if part == "sp" else X.gl, k)
                return cache[key]

            out = []
            for (sp_pows, gl_pows), c in table.items():
                v = c
                for k in sp_pows:
                    v = v * tr("sp", k)
                for m in gl_pows:
                    v = v * tr("gl", m)
                out.append(v)
            return sum_scalars(out)

        return cls(degree, taylor, table, name, dims)


def polarize(P: InvariantPoly, *Y: HElement) -> EpsScalar:
    """``(1/j!) sum_{S} (-1)^(j-|S|) P(sum_{i in S} Y_i)`` with ``P`` the diagonal value."""
    j = P.degree
    if len(Y) != j:
        raise ValueError(f"degree-{j} polynomial needs {j} arguments, got {len(Y)}")
    if j == 0:
        if P.dims is None:
            raise ValueError("a degree-0 polynomial needs its (n, N) to be evaluated")
        return P(HElement.zero(*P.dims))
    out = []
    for size in range(1, j + 1):
        for S in combinations(range(j), size):
            X = Y[S[0]]
            for i in S[1:]:
                X = X + Y[i]
            out.append(P(X) * (-1) ** (j - size))
    return sum_scalars(out) * Fraction(1, factorial(j))


def _series_mul(a: list, b: list, order: int) -> list:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            out[i + j] += x * y
    return out


def half_x_over_sinh_series(order: int) -> list[Fraction]:
    """Coefficients of ``(x/2)/sinh(x/2)`` up to ``x^order`` by exact series division."""
    den = [Fraction(0)] * (order + 1)
    for m in range(0, order + 1, 2):
        # sinh(x/2)/(x/2) = sum (x/2)^(2k)/(2k+1)!
        den[m] = Fraction(1, 2 ** m * factorial(m + 1))
    out = [Fraction(0)] * (order + 1)
    for i in range(order + 1):
        acc = Fraction(int(i == 0))
        for j in range(1, i + 1):
            acc -= den[j] * out[i - j]
        out[i] = acc / den[0]
    return out


def _log_series(f: list, order: int) -> list:
    """log(f) for a series with f[0] = 1."""
    u = [Fraction(0)] + list(f[1: order + 1])
    out = [Fraction(0)] * (order + 1)
    power = [Fraction(1)] + [Fraction(0)] * order
    for k in range(1, order + 1):
        power = _series_mul(power, u, order)
        c = Fraction((-1) ** (k + 1), k)
        for i in range(order + 1):
            out[i] += c * power[i]
    return out


def _partitions(total: int, max_part: int | None = None):
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    for k in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - k, k):
            yield (k,) + rest


def ahat_trace_table(degree: int) -> dict[tuple, Fraction]:
    """Coefficients of the Â-genus in products of ``tr(X^2k)``, at matrix degree ``degree``.

    ``Â(X) = det((X/2)/sinh(X/2))^(1/2) = exp(1/2 sum_k a_k tr X^(2k))`` where
    ``log((x/2)/sinh(x/2)) = sum_k a_k x^(2k)``.  Keys are tuples of even
    powers in decreasing order, e.g. ``(4,)`` and ``(2, 2)``.
    """
    if degree % 2:
        return {}
    logs = _log_series(half_x_over_sinh_series(degree), degree)
    half = {k: logs[2 * k] / 2 for k in range(1, degree // 2 + 1)}
    out = {}
    for part in _partitions(degree // 2):
        c = Fraction(1)
        for k in set(part):
            m = part.count(k)
            c *= half[k] ** m / factorial(m)
        if c:
            out[tuple(2 * k for k in part)] = c
    return out


def ahat_ch_component(j: int, n: int, N: int) -> InvariantPoly:
    """Degree-j Taylor component of ``Â(e X_1) Ch(X_2)``, ``Ch(Y) = tr exp Y``."""
    if j < 0:
        raise ValueError("degree must be >= 0")
    table: dict = {}
    for sp_deg in range(0, j + 1, 2):
        m = j - sp_deg
        for sp_pows, c in ahat_trace_table(sp_deg).items():
            coeff = EpsScalar.monomial(c / factorial(m), sp_deg)
            key = (sp_pows, (m,))
            table[key] = table.get(key, ZERO) + coeff
    return InvariantPoly.from_table(j, table, name=f"(ÂCh)_{j}", dims=(n, N))


def chi_eval(P: InvariantPoly, args, N: int | None = None) -> EpsScalar:
    """``(1/q!) sum' sign(sigma) P(C(v_s1, v_s2), ..., C(v_s(2q-1), v_s(2q)))`` over sigma with s(2i-1) < s(2i)."""
    a = WedgeTuple(list(args.items) if isinstance(args, WedgeTuple) else list(args), N)
    q = P.degree
    if a.arity != 2 * q:
        raise ValueError(f"chi of a degree-{q} polynomial takes {2 * q} arguments, got {a.arity}")
    curv: dict = {}

    def C(i: int, j: int) -> HElement:
        if (i, j) not in curv:
            curv[(i, j)] = curvature_C(a[i], a[j])
        return curv[(i, j)]

    out = []
    for perm in permutations(range(2 * q)):
        if any(perm[2 * i] > perm[2 * i + 1] for i in range(q)):
            continue
        Cs = [C(perm[2 * i], perm[2 * i + 1]) for i in range(q)]
        if any(x.is_zero() for x in Cs):
            continue
        out.append(polarize(P, *Cs) * perm_sign(perm))
    return sum_scalars(out) * Fraction(1, factorial(q))


def special_vectors(n: int, N: int) -> dict[str, GlWeylElement]:
    """``u_ij = q_i^2 p_i/2`` (i = j), ``q_i q_j p_j`` (i != j); ``v_ir = E_rr q_i``.  Keys like ``u21``, ``v13``."""
    out = {}
    for i in range(1, n + 1):
        qi = WeylElement.q(n, i)
        for j in range(1, n + 1):
            if i == j:
                u = (qi * qi * WeylElement.p(n, i)).scale(Fraction(1, 2))
            else:
                u = qi * WeylElement.q(n, j) * WeylElement.p(n, j)
            out[f"u{i}{j}"] = GlWeylElement.scalar(N, u)
        for r in range(1, N + 1):
            out[f"v{i}{r}"] = GlWeylElement.unit(N, r - 1, r - 1, qi)
    return out


def comb_factor(ell: Mapping[int, int] | Sequence[int]) -> Fraction:
    """``n! / (l_1! prod_{j>=2} l_j! (2j)^l_j)`` with ``n = sum j l_j``.

    ``ell`` is either ``{j: l_j}`` or the sequence ``(l_1, l_2, ...)``.
    """
    if not isinstance(ell, Mapping):
        ell = {j: l for j, l in enumerate(ell, start=1)}
    if any(l < 0 for l in ell.values()):
        raise ValueError("multiplicities must be >= 0")
    n = sum(j * l for j, l in ell.items())
    den = 1
    for j, l in ell.items():
        den *= factorial(l)
        if j >= 2:
            den *= (2 * j) ** l
    return Fraction(factorial(n), den)


def cycle_partitions(n: int):
    """All ``{j: l_j}`` with ``sum j l_j = n`` (zero multiplicities omitted)."""
    for part in _partitions(n):
        ell: dict = {}
        for j in part:
            ell[j] = ell.get(j, 0) + 1
        yield ell


class TPoly:
    """Polynomial in ``t_1..t_m, s_1..s_N`` with EpsScalar coefficients."""

    __slots__ = ("m", "N", "terms")

    def __init__(self, m: int, N: int, terms: Mapping | None = None):
        self.m = m
        self.N = N
        t: dict = {}
        for e, c in (terms or {}).items():
            c = as_scalar(c)
            if not c.is_zero():
                s = t.get(e)
                s = c if s is None else s + c
                if s.is_zero():
                    t.pop(e, None)
                else:
                    t[e] = s
        self.terms = t

    @classmethod
    def const(cls, m: int, N: int, c) -> "TPoly":
        return cls(m, N, {(0,) * (m + N): c})

    @classmethod
    def gen(cls, m: int, N: int, idx: int, c=1) -> "TPoly":
        e = [0] * (m + N)
        e[idx] = 1
        return cls(m, N, {tuple(e): c})

    def __add__(self, other: "TPoly") -> "TPoly":
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return TPoly(self.m, self.N, t)

    def __mul__(self, other) -> "TPoly":
        if not isinstance(other, TPoly):
            c = as_scalar(other)
            return TPoly(self.m, self.N, {e: v * c for e, v in self.terms.items()})
        t: dict = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                e = tuple(i + j for i, j in zip(a, b))
                t[e] = t[e] + x * y if e in t else x * y
        return TPoly(self.m, self.N, t)

    def __pow__(self, k: int) -> "TPoly":
        out = TPoly.const(self.m, self.N, 1)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, deg: int) -> "TPoly":
        return TPoly(self.m, self.N, {e: c for e, c in self.terms.items() if sum(e) <= deg})

    def homogeneous(self, deg: int) -> "TPoly":
        return TPoly(self.m, self.N, {e: c for e, c in self.terms.items() if sum(e) == deg})

    def evaluate(self, t: Sequence, s: Sequence) -> EpsScalar:
        vals = [as_scalar(x) for x in t] + [as_scalar(x) for x in s]
        out = []
        for e, c in self.terms.items():
            v = c
            for x, k in zip(vals, e):
                if k:
                    v = v * x ** k
            out.append(v)
        return sum_scalars(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, TPoly) and (self.m, self.N) == (other.m, other.N) and self.terms == other.terms

    def __repr__(self) -> str:
        names = [f"t{i + 1}" for i in range(self.m)] + [f"s{r + 1}" for r in range(self.N)]
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = "*".join(f"{nm}^{k}" if k > 1 else nm for nm, k in zip(names, e) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) or "0"


def p_n_graphsum_series(n: int, m: int, N: int) -> TPoly:
    """``P_n(X, ..., X)`` from the cycle-graph sum, as a polynomial in t_1..t_m, s_1..s_N.

    ``sum_l C_l prod_{j>=2} ((2 I_j/2^j) sum_i (e t_i)^j)^{l_j} sum_r s_r^{l_1}``,
    with ``s_r^0 = 1`` so an empty l_1 contributes N.
    """
    out = TPoly(m, N)
    for ell in cycle_partitions(n):
        term = TPoly.const(m, N, comb_factor(ell))
        for j, l in ell.items():
            if j == 1:
                continue
            power_sum = TPoly(m, N)
            for i in range(m):
                power_sum = power_sum + TPoly.gen(m, N, i) ** j * EpsScalar.monomial(1, j)
            term = term * (power_sum * (2 * psi_cycle_integral(j) / 2 ** j)) ** l
        l1 = ell.get(1, 0)
        s_sum = TPoly(m, N)
        for r in range(N):
            s_sum = s_sum + TPoly.gen(m, N, m + r) ** l1
        out = out + term * s_sum
    return out


def p_n_cartan_graphsum(n: int, X: CartanPoint) -> EpsScalar:
    """The graph-sum value of ``P_n(X, ..., X)`` at a Cartan point."""
    return p_n_graphsum_series(n, X.n, X.N).evaluate(X.t, X.s)


def _cartan_component(n: int, M, a: WeylElement) -> tuple[tuple, dict]:
    """Split ``M (x) a`` into its diagonal matrix and ``a = c_0 + sum c_i q_i p_i``; rejects anything else."""
    M = _mat(M)
    N = len(M)
    if any(M[r][c] for r in range(N) for c in range(N) if r != c):
        raise ValueError("matrix part must be diagonal")
    if a.n != n:
        raise DimensionError("Weyl part has the wrong n")
    parts: dict = {}
    for exps, c in a.terms.items():
        if not any(exps):
            parts[0] = c
            continue
        idx = [k for k, v in enumerate(exps) if v]
        if len(idx) == 2 and all(exps[k] == 1 for k in idx) and idx[0] % 2 == 0 and idx[1] == idx[0] + 1:
            parts[idx[0] // 2 + 1] = c
        else:
            raise ValueError(f"{a} is outside the span of q_i p_i and 1")
    return M, parts


def p_n_cartan_integral(n: int, args: Sequence[tuple]) -> EpsScalar:
    """``tr(M_1 ... M_n) mu int_{[0,1]^n} prod_{i<j} exp(e psi(u_i-u_j) alpha_ij)(a_1 (x) ... (x) a_n)``.

    ``args`` are pairs ``(M_i, a_i)`` with M_i diagonal and a_i in the span of
    ``q_k p_k`` and 1; the expression is expanded multilinearly.
    """
    if len(args) != n:
        raise ValueError(f"P_{n} takes {n} arguments, got {len(args)}")
    comps = []
    m_weyl = None
    for M, a in args:
        Mm, parts = _cartan_component(a.n, M, a)
        comps.append((Mm, parts))
        m_weyl = a.n
    prod_m = comps[0][0]
    for Mm, _ in comps[1:]:
        prod_m = _mmul(prod_m, Mm)
    tr = _mtrace(prod_m)
    if tr.is_zero():
        return ZERO
    out = []
    for choice in product(*[list(parts.items()) for _, parts in comps]):
        coeff = ONE
        key = []
        for idx, c in choice:
            coeff = coeff * c
            e = [0] * (2 * m_weyl)
            if idx:
                e[2 * idx - 2] = 1
                e[2 * idx - 1] = 1
            key.append(tuple(e))
        out.append(coeff * cube_value(tuple(key)))
    return sum_scalars(out) * tr


def _cartan_basis(X: CartanPoint) -> list[tuple[EpsScalar, tuple]]:
    N = X.N
    out = []
    for i, t in enumerate(X.t, start=1):
        if t:
            ident = [[1 if r == c else 0 for c in range(N)] for r in range(N)]
            out.append((as_scalar(-t), (ident, WeylElement.q(X.n, i) * WeylElement.p(X.n, i))))
    for r, s in enumerate(X.s):
        if s:
            E = [[1 if (a == r and b == r) else 0 for b in range(N)] for a in range(N)]
            out.append((s, (E, WeylElement.one(X.n))))
    return out


def p_n_integral_at(n: int, X: CartanPoint | Sequence[CartanPoint]) -> EpsScalar:
    """``P_n(X_1, ..., X_n)`` through the cube integral, expanding each X_i in the Cartan basis.

    A single CartanPoint is repeated n times.
    """
    points = [X] * n if isinstance(X, CartanPoint) else list(X)
    if len(points) != n:
        raise ValueError(f"P_{n} takes {n} arguments")
    out = []
    for choice in product(*[_cartan_basis(x) for x in points]):
        c = ONE
        for coeff, _ in choice:
            c = c * coeff
        out.append(c * p_n_cartan_integral(n, [arg for _, arg in choice]))
    return sum_scalars(out)


def _derivative_q(v: GlWeylElement, i: int) -> GlWeylElement:
    from .weyl import partial_derivative

    return v.map_entries(lambda f: partial_derivative(f, 2 * i))


def rrh_tuples(n: int, N: int) -> list[tuple[str, ...]]:
    """Admissible choices ``(v_1, ..., v_n)``: ``v_j`` is ``u_jk`` with ``j >= k`` or ``v_jr``."""
    per_slot = []
    for j in range(1, n + 1):
        opts = [f"u{j}{k}" for k in range(1, j + 1)] + [f"v{j}{r}" for r in range(1, N + 1)]
        per_slot.append(opts)
    return [tuple(c) for c in product(*per_slot)]


def _gl_to_h(v: GlWeylElement) -> HElement:
    """Identify a Cartan-type element of gl_N(A) with its HElement."""
    if any(f.y_degree() not in (0, 2) or not f.y_homogeneous_part(1).is_zero() for _, f in v.items()):
        raise ValueError("not an element of h")
    return project_pr(v)


@dataclass
class RRHResult:
    names: tuple
    lhs: EpsScalar
    rhs_polarized: EpsScalar
    rhs_chi: EpsScalar | None
    rhs_integral: EpsScalar

    @property
    def passed(self) -> bool:
        ok = self.lhs == self.rhs_polarized == self.rhs_integral
        return ok and (self.rhs_chi is None or self.rhs_chi == self.lhs)


def rrh_check(n: int, N: int, names: Sequence[str], with_chi: bool = True) -> RRHResult:
    """Compare ``ev_1 Theta_2n(p_1 ^ v_1 ^ ... ^ p_n ^ v_n)`` with ``P_n(dv_1/dq_1, ...)``.

    ``rhs_polarized`` polarizes ``(Â_e Ch)_n`` at the derivatives, ``rhs_integral``
    evaluates the Cartan cube integral there, and ``rhs_chi`` is
    ``(-1)^n chi((Â_e Ch)_n)`` on the same wedge.
    """
    names = tuple(names)
    if len(names) != n:
        raise ValueError(f"need {n} special vectors")
    allowed = set(rrh_tuples(n, N))
    if names not in allowed:
        raise ValueError(f"{names} is not an admissible tuple for n={n}, N={N}")
    vecs = special_vectors(n, N)
    args = []
    ders = []
    for i, nm in enumerate(names, start=1):
        args.append(GlWeylElement.scalar(N, WeylElement.p(n, i)))
        args.append(vecs[nm])
        ders.append(_derivative_q(vecs[nm], i))
    lhs = theta_eval(n, N, args, GlWeylElement.identity(n, N))
    P = ahat_ch_component(n, n, N)
    rhs_polarized = polarize(P, *[_gl_to_h(d) for d in ders])
    integral_args = []
    for d in ders:
        # each derivative is Id (x) q_k p_k or E_rr (x) 1
        _, f = next(iter(d.items()))
        M = [[ONE if (a == b and not d.entry(a, a).is_zero()) else ZERO for b in range(N)] for a in range(N)]
        integral_args.append((M, f))
    rhs_integral = p_n_cartan_integral(n, integral_args)
    rhs_chi = chi_eval(P, args) * (-1) ** n if with_chi else None
    return RRHResult(names, lhs, rhs_polarized, rhs_chi, rhs_integral)


def ahat_genfun_series(max_n: int, m: int, N: int) -> TPoly:
    """Taylor expansion of ``prod_i (e t_i/2)/sinh(e t_i/2) * sum_r exp(s_r)`` to total degree max_n."""
    coeffs = half_x_over_sinh_series(max_n)
    out = TPoly.const(m, N, 1)
    for i in range(m):
        factor = TPoly(m, N)
        for k, c in enumerate(coeffs):
            if c:
                factor = factor + TPoly.gen(m, N, i) ** k * EpsScalar.monomial(c, k)
        out = (out * factor).truncate(max_n)
    ch = TPoly(m, N)
    for r in range(N):
        for k in range(max_n + 1):
            ch = ch + TPoly.gen(m, N, m + r) ** k * Fraction(1, factorial(k))
    return (out * ch).truncate(max_n)


@dataclass
class GenfunResult:
    graph_series: TPoly
    closed_series: TPoly
    ahat_series: TPoly

    @property
    def passed(self) -> bool:
        return self.graph_series == self.closed_series == self.ahat_series


def genfun_check(max_n: int, m: int, N: int) -> GenfunResult:
    """``sum_{n<=max_n} P_n/n!`` (graph sum) against the sinh product and against ``(Â_e Ch)_n``.

    The third series applies the trace-table component ``(Â_e Ch)_n`` to the
    Cartan element with symbolic t and s, built from the diagonal traces
    ``tr X_1^(2k) = 2 sum t_i^(2k)`` and ``tr X_2^k = sum s_r^k``.
    """
    graph = TPoly(m, N)
    for n in range(0, max_n + 1):
        graph = graph + p_n_graphsum_series(n, m, N) * Fraction(1, factorial(n))
    closed = ahat_genfun_series(max_n, m, N)
    ahat = TPoly(m, N)
    for n in range(0, max_n + 1):
        P = ahat_ch_component(n, m, N)
        for (sp_pows, gl_pows), c in P.table.items():
            term = TPoly.const(m, N, c)
            for k in sp_pows:
                tr = TPoly(m, N)
                for i in range(m):
                    tr = tr + TPoly.gen(m, N, i) ** k * 2
                term = term * tr
            for k in gl_pows:
                tr = TPoly(m, N)
                for r in range(N):
                    tr = tr + TPoly.gen(m, N, m + r) ** k
                term = term * tr
            ahat = ahat + term
    return GenfunResult(graph.truncate(max_n), closed, ahat.truncate(max_n))
