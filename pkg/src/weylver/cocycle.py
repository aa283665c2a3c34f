"""The Hochschild cocycle tau_2n of the Weyl algebra.

``tau_2n(a) = mu int_{Delta_2n} prod_{i<j} exp(e (2u_i - 2u_j + 1) alpha_ij) pi_2n(a) du``
with ``u_0 = 0``.  Two independent evaluators are provided:

* ``method="operator"`` applies the truncated exponentials literally, one pair
  at a time, on monomial tensors carrying polynomial weights in ``u``;
* ``method="contraction"`` (default) uses that ``mu`` only sees the terms where
  every p_r in one slot is differentiated together with a q_r in another slot.
  Writing ``sum_{i<j} e w_ij alpha_ij = e sum_r sum_{i != j} W_ij d_{p_r}^i d_{q_r}^j``
  with ``W_ij = w_ij/2`` and ``W_ji = -W_ij``, the value on a monomial tensor
  factorizes over r into sums over nonnegative integer matrices K with zero
  diagonal, row sums the p_r-exponents and column sums the q_r-exponents:
  ``prod_i P_i! Q_i! sum_K prod W_ij^K_ij / K_ij!``.

The same kernel serves permuted simplices (sawtooth branches) and the cube
integrals used for the Chern-Weil side.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Sequence

from .hochschild import ChainTensor, perm_sign
from .integrate import psi_branch, simplex_monomial_integral
from .scalars import EpsScalar, sum_scalars
from .weyl import WeylElement, partial_derivative

__all__ = [
    "alpha_apply",
    "pi_apply",
    "mu_apply",
    "tau_eval",
    "tau_sigma_eval",
    "tau_closed_form_n1",
    "closed_form_coefficients",
    "region_for_permutation",
    "cube_value",
    "tau_sp_invariance_sum",
    "tau_quadratic_insertion_sum",
]

HALF = Fraction(1, 2)


# Operators on ChainTensors


def alpha_apply(c: ChainTensor, i: int, j: int) -> ChainTensor:
    """``alpha_ij = 1/2 sum_r (d_{p_r} in slot i (x) d_{q_r} in slot j - d_{q_r} in slot i (x) d_{p_r} in slot j)``."""
    k = c.k
    if not (0 <= i <= k and 0 <= j <= k):
        raise IndexError(f"slot index out of range 0..{k}")
    if i == j:
        raise ValueError("alpha_ij needs i != j")
    out = []
    for slots, coeff in c.items():
        for r in range(1, c.n + 1):
            for di, dj, sign in ((2 * r - 1, 2 * r, HALF), (2 * r, 2 * r - 1, -HALF)):
                ai = partial_derivative(slots[i], di)
                aj = partial_derivative(slots[j], dj)
                if ai.is_zero() or aj.is_zero():
                    continue
                new = list(slots)
                new[i] = ai
                new[j] = aj
                out.append((coeff * sign, tuple(new)))
    return ChainTensor(c.n, k, out)


def pi_apply(c: ChainTensor) -> ChainTensor:
    """``sum_sigma sign(sigma) a_0 (x) d_{y_sigma(1)} a_1 (x) ... (x) d_{y_sigma(2n)} a_2n``."""
    if c.k != 2 * c.n:
        raise ValueError(f"pi needs a chain of degree {2 * c.n}, got {c.k}")
    out = []
    for slots, coeff in c.items():
        for perm in permutations(range(1, 2 * c.n + 1)):
            new = [slots[0]]
            for slot, v in zip(slots[1:], perm):
                d = partial_derivative(slot, v)
                if d.is_zero():
                    break
                new.append(d)
            else:
                out.append((coeff * perm_sign(perm), tuple(new)))
    return ChainTensor(c.n, c.k, out)


def mu_apply(c: ChainTensor) -> EpsScalar:
    """Sum over elementary terms of coefficient times the product of constant terms."""
    out = []
    for slots, coeff in c.items():
        v = coeff
        for s in slots:
            v = v * s.constant_term()
            if v.is_zero():
                break
        out.append(v)
    return sum_scalars(out)


# Monomial-level machinery.  A monomial tensor is a tuple of exponent vectors.


def _pi_monomials(expanded: dict, n: int) -> dict:
    """pi on a fully expanded chain; returns monomial tensor -> EpsScalar."""
    out: dict = {}
    for key, coeff in expanded.items():
        for perm in permutations(range(2 * n)):
            new = [key[0]]
            scale = 1
            for exps, v in zip(key[1:], perm):
                m = exps[v]
                if not m:
                    break
                scale *= m
                new.append(exps[:v] + (m - 1,) + exps[v + 1:])
            else:
                nk = tuple(new)
                val = coeff * (scale * perm_sign(perm))
                prev = out.get(nk)
                out[nk] = val if prev is None else prev + val
    return {k: v for k, v in out.items() if not v.is_zero()}


def _alpha_monomial(key: tuple, i: int, j: int, n: int) -> list[tuple[Fraction, tuple]]:
    out = []
    ei, ej = key[i], key[j]
    for r in range(n):
        p, q = 2 * r, 2 * r + 1
        for a, b, sign in ((p, q, HALF), (q, p, -HALF)):
            if ei[a] and ej[b]:
                new = list(key)
                new[i] = ei[:a] + (ei[a] - 1,) + ei[a + 1:]
                new[j] = ej[:b] + (ej[b] - 1,) + ej[b + 1:]
                out.append((sign * ei[a] * ej[b], tuple(new)))
    return out


# polynomials in u as dicts exps -> Fraction


def _pmul(a: dict, b: dict) -> dict:
    t: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            t[e] = t.get(e, 0) + ca * cb
    return {e: c for e, c in t.items() if c}


def _affine(nvars: int, lin: dict, const) -> dict:
    t = {(0,) * nvars: Fraction(const)} if const else {}
    for v, c in lin.items():
        if c:
            e = [0] * nvars
            e[v] = 1
            t[tuple(e)] = t.get(tuple(e), 0) + Fraction(c)
    return {e: c for e, c in t.items() if c}


class _Geometry:
    """Slot -> integration variable map plus a fixed ordering region.

    ``var_of_slot[s]`` is None for a slot pinned at 0 (below every variable).
    ``ordering`` lists variable indices in increasing order on the region.
    ``w(i, j)`` is the affine weight ``psi(u_i - u_j) = 2u_i - 2u_j +- 1`` for
    the pair of slots, with the branch fixed by the region.
    """

    __slots__ = ("var_of_slot", "nvars", "ordering", "_rank")

    def __init__(self, var_of_slot: tuple, ordering: tuple):
        self.var_of_slot = var_of_slot
        self.nvars = len(ordering)
        self.ordering = ordering
        rank = {v: p for p, v in enumerate(ordering)}
        self._rank = tuple(-1 if v is None else rank[v] for v in var_of_slot)

    def w(self, i: int, j: int) -> dict:
        lin: dict = {}
        vi, vj = self.var_of_slot[i], self.var_of_slot[j]
        if vi is not None:
            lin[vi] = lin.get(vi, 0) + 2
        if vj is not None:
            lin[vj] = lin.get(vj, 0) - 2
        return _affine(self.nvars, lin, psi_branch(self._rank[i] < self._rank[j]))

    def key(self) -> tuple:
        return (self.var_of_slot, self.ordering)

    def integrate(self, poly: dict) -> Fraction:
        total = Fraction(0)
        for e, c in poly.items():
            total += c * simplex_monomial_integral(self.nvars, [e[v] for v in self.ordering])
        return total


@lru_cache(maxsize=None)
def _weight_power(geo_key: tuple, i: int, j: int, m: int) -> tuple:
    """``W_ij^m / m!`` as a frozen polynomial, ``W_ij = w_ij/2`` for i<j and ``-w_ji/2`` otherwise."""
    geo = _Geometry(*geo_key)
    if i < j:
        base = {e: c * HALF for e, c in geo.w(i, j).items()}
    else:
        base = {e: -c * HALF for e, c in geo.w(j, i).items()}
    out = {(0,) * geo.nvars: Fraction(1)}
    for _ in range(m):
        out = _pmul(out, base)
    inv = Fraction(1, factorial(m))
    return tuple((e, c * inv) for e, c in out.items())


@lru_cache(maxsize=None)
def _index_contraction(geo_key: tuple, P: tuple, Q: tuple) -> tuple:
    """Sum over contraction matrices for one index r; returns a frozen u-polynomial."""
    if sum(P) != sum(Q):
        return ()
    nslots = len(P)
    nvars = len(geo_key[1])
    total: dict = {}
    pref = 1
    for x in P + Q:
        pref *= factorial(x)

    def rows(i: int, cols: list, acc: dict) -> None:
        if i == nslots:
            for e, c in acc.items():
                total[e] = total.get(e, 0) + c
            return
        targets = [j for j in range(nslots) if j != i and cols[j]]

        def fill(t: int, left: int, acc2: dict) -> None:
            if left == 0:
                rows(i + 1, cols, acc2)
                return
            if t == len(targets):
                return
            j = targets[t]
            cap = min(left, cols[j])
            for m in range(cap, -1, -1):
                if m:
                    cols[j] -= m
                    nxt = _pmul(acc2, dict(_weight_power(geo_key, i, j, m)))
                    if nxt:
                        fill(t + 1, left - m, nxt)
                    cols[j] += m
                else:
                    fill(t + 1, left, acc2)

        fill(0, P[i], acc)

    rows(0, list(Q), {(0,) * nvars: Fraction(pref)})
    return tuple((e, c) for e, c in total.items() if c)


@lru_cache(maxsize=None)
def _monomial_value(geo_key: tuple, key: tuple) -> tuple[int, Fraction]:
    """Integrated ``mu prod exp(e W d d)`` on one monomial tensor: ``(e-power, value)``."""
    n = len(key[0]) // 2
    poly = {(0,) * len(geo_key[1]): Fraction(1)}
    epow = 0
    for r in range(n):
        P = tuple(exps[2 * r] for exps in key)
        Q = tuple(exps[2 * r + 1] for exps in key)
        part = _index_contraction(geo_key, P, Q)
        if not part:
            return 0, Fraction(0)
        poly = _pmul(poly, dict(part))
        epow += sum(P)
    geo = _Geometry(*geo_key)
    return epow, geo.integrate(poly)


def _operator_value(geo: _Geometry, key: tuple, pairs: Sequence[tuple[int, int]]) -> EpsScalar:
    """The literal pipeline: truncated exponentials pair by pair, then mu and integration."""
    n = len(key[0]) // 2
    nvars = geo.nvars
    state: dict = {key: {((0,) * nvars, 0): Fraction(1)}}
    for i, j in pairs:
        w = geo.w(i, j)
        nxt: dict = {}
        for mono, coeffs in state.items():
            # exp(e w alpha_ij): sum_m (e w)^m/m! alpha_ij^m, stops once alpha^m vanishes
            layer = {mono: Fraction(1)}
            m = 0
            wpow = {(0,) * nvars: Fraction(1)}
            while layer:
                scale = Fraction(1, factorial(m))
                for tgt, c in layer.items():
                    bucket = nxt.setdefault(tgt, {})
                    for (ue, ee), v in coeffs.items():
                        for we, wc in wpow.items():
                            k2 = (tuple(a + b for a, b in zip(ue, we)), ee + m)
                            bucket[k2] = bucket.get(k2, 0) + v * wc * c * scale
                new_layer: dict = {}
                for tgt, c in layer.items():
                    for f, t2 in _alpha_monomial(tgt, i, j, n):
                        new_layer[t2] = new_layer.get(t2, 0) + c * f
                layer = {t: c for t, c in new_layer.items() if c}
                wpow = _pmul(wpow, w)
                m += 1
        state = nxt
    zero = (0,) * (2 * n)
    out: dict = {}
    for mono, coeffs in state.items():
        if any(e != zero for e in mono):
            continue
        by_eps: dict = {}
        for (ue, ee), v in coeffs.items():
            by_eps.setdefault(ee, {})[ue] = by_eps.setdefault(ee, {}).get(ue, 0) + v
        for ee, poly in by_eps.items():
            out[ee] = out.get(ee, 0) + geo.integrate(poly)
    return EpsScalar(out)


def _evaluate(
    expanded_pi: dict,
    geo: _Geometry,
    method: str,
    check_order: bool,
) -> EpsScalar:
    if method not in ("contraction", "operator"):
        raise ValueError(f"unknown method {method!r}")
    nslots = len(geo.var_of_slot)
    pairs = [(i, j) for i in range(nslots) for j in range(i + 1, nslots)]
    out = []
    for key, coeff in expanded_pi.items():
        if method == "contraction":
            epow, val = _monomial_value(geo.key(), key)
            v = EpsScalar.monomial(val, epow)
        else:
            v = _operator_value(geo, key, pairs)
            if check_order:
                other = _operator_value(geo, key, pairs[::-1])
                if other != v:
                    raise AssertionError(f"pair order changed the value on {key}: {v} vs {other}")
        out.append(coeff * v)
    return sum_scalars(out)


def _check_chain(n: int, c: ChainTensor) -> None:
    if c.n != n:
        raise ValueError(f"chain lives in n={c.n}, expected n={n}")
    if c.k != 2 * n:
        raise ValueError(f"tau_{2 * n} needs a chain of degree {2 * n}, got {c.k}")


def tau_eval(n: int, c: ChainTensor, method: str = "contraction", check_order: bool = False) -> EpsScalar:
    """Exact value of ``tau_2n`` on a degree-2n chain.

    ``check_order`` (operator method only) recomputes every term with the pair
    exponentials applied in reverse order and raises if the results differ.
    """
    _check_chain(n, c)
    geo = _Geometry((None,) + tuple(range(2 * n)), tuple(range(2 * n)))
    return _evaluate(_pi_monomials(c.expanded(), n), geo, method, check_order)


def region_for_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    """Variable ordering of ``sigma(Delta)`` for ``sigma`` acting by ``v_i = u_sigma(i)``.

    A point of Delta has ``u_1 < ... < u_k``; its image satisfies
    ``v_{sigma^-1(1)} < ... < v_{sigma^-1(k)}``.  Entries are 1-based labels.
    """
    sigma = tuple(sigma)
    k = len(sigma)
    if sorted(sigma) != list(range(1, k + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{k}")
    inv = [0] * k
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return tuple(inv)


def tau_sigma_eval(
    n: int, sigma: Sequence[int], c: ChainTensor, method: str = "contraction", check_order: bool = False
) -> EpsScalar:
    """``mu int_{sigma(Delta)} prod exp(e psi(u_i - u_j) alpha_ij) pi(c)``.

    The sawtooth branch of every factor is the one valid on the region, and the
    region integral is taken with its natural (unsigned) measure.
    """
    _check_chain(n, c)
    if len(sigma) != 2 * n:
        raise ValueError(f"sigma must permute 1..{2 * n}")
    ordering = tuple(v - 1 for v in region_for_permutation(sigma))
    geo = _Geometry((None,) + tuple(range(2 * n)), ordering)
    return _evaluate(_pi_monomials(c.expanded(), n), geo, method, check_order)


def tau_sp_invariance_sum(n: int, A: WeylElement, c: ChainTensor, method: str = "contraction") -> EpsScalar:
    """``sum_i tau(a_0 (x) ... (x) [A, a_i] (x) ... (x) a_2n)`` for a quadratic ``A``."""
    from .weyl import bracket

    _check_chain(n, c)
    terms = []
    for slots, coeff in c.items():
        for i in range(len(slots)):
            new = slots[:i] + (bracket(A, slots[i]),) + slots[i + 1:]
            terms.append((coeff, new))
    return tau_eval(n, ChainTensor(n, c.k, terms), method=method)


def tau_quadratic_insertion_sum(n: int, A: WeylElement, c: ChainTensor, method: str = "contraction") -> EpsScalar:
    """``sum_{i=1}^{2n} (-1)^i tau(a_0 (x) ... (x) a_{i-1} (x) A (x) a_i (x) ...)`` on a degree-(2n-1) chain."""
    if c.k != 2 * n - 1:
        raise ValueError(f"insertion needs a chain of degree {2 * n - 1}, got {c.k}")
    terms = []
    for slots, coeff in c.items():
        for i in range(1, 2 * n + 1):
            new = slots[:i] + (A,) + slots[i:]
            terms.append((coeff if i % 2 == 0 else -coeff, new))
    return tau_eval(n, ChainTensor(n, 2 * n, terms), method=method)


def cube_value(key: tuple, method: str = "contraction") -> EpsScalar:
    """``mu int_{[0,1]^m} prod_{i<j} exp(e psi(u_i - u_j) alpha_ij)`` on a monomial tensor of m slots."""
    m = len(key)
    slots = tuple(range(m))
    out = []
    for ordering in permutations(range(m)):
        geo = _Geometry(slots, ordering)
        if method == "contraction":
            epow, val = _monomial_value(geo.key(), key)
            out.append(EpsScalar.monomial(val, epow))
        else:
            pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
            out.append(_operator_value(geo, key, pairs))
    return sum_scalars(out)


# The n = 1 closed form.
# F(x,y,z) = -[(x-y)e^{x+y-z} + (y-z)e^{y+z-x} + (z-x)e^{z+x-y}] / [4(x-y)(y-z)(z-x)]
# is a power series; its degree-d part is -N_{d+3}/(4 D) with N_m the degree-m
# part of the numerator and D = (x-y)(y-z)(z-x), computed by exact division.


def _tri_mul(a: dict, b: dict) -> dict:
    return _pmul(a, b)


def _linear_power(coeffs: tuple, m: int) -> dict:
    base = {}
    for idx, c in enumerate(coeffs):
        if c:
            e = [0, 0, 0]
            e[idx] = 1
            base[tuple(e)] = Fraction(c)
    out = {(0, 0, 0): Fraction(1)}
    for _ in range(m):
        out = _pmul(out, base)
    return out


def _divide_by_difference(poly: dict, a: int, b: int) -> dict:
    """Exact quotient of ``poly`` by ``(v_a - v_b)``; raises if not divisible.

    Synthetic division in ``v_a``: writing poly = sum_k c_k(other) v_a^k, the
    quotient coefficients satisfy q_{k-1} = c_k + v_b q_k.
    """
    by_deg: dict[int, dict] = {}
    for e, c in poly.items():
        rest = list(e)
        k = rest[a]
        rest[a] = 0
        by_deg.setdefault(k, {})[tuple(rest)] = c
    if not by_deg:
        return {}
    top = max(by_deg)
    quotient: dict = {}
    carry: dict = {}
    for k in range(top, 0, -1):
        ck = dict(by_deg.get(k, {}))
        for e, c in carry.items():
            ck[e] = ck.get(e, 0) + c
        qk1 = {e: c for e, c in ck.items() if c}
        for e, c in qk1.items():
            ee = list(e)
            ee[a] = k - 1
            quotient[tuple(ee)] = c
        # multiply by v_b for the next step
        carry = {}
        for e, c in qk1.items():
            ee = list(e)
            ee[b] += 1
            carry[tuple(ee)] = c
    rem = dict(by_deg.get(0, {}))
    for e, c in carry.items():
        rem[e] = rem.get(e, 0) + c
    if any(rem.values()):
        raise ArithmeticError("polynomial is not divisible")
    return quotient


@lru_cache(maxsize=None)
def closed_form_coefficients(order: int = 12) -> dict[tuple, Fraction]:
    """Taylor coefficients of F up to total degree ``order``: ``(a, b, c) -> coeff of x^a y^b z^c``."""
    out: dict = {}
    exps3 = [((1, 1, -1), (1, -1, 0)), ((-1, 1, 1), (0, 1, -1)), ((1, -1, 1), (-1, 0, 1))]
    for d in range(order + 1):
        m = d + 3
        num: dict = {}
        for exp_lin, pref_lin in exps3:
            # (pref) * (exp_lin)^(m-1)/(m-1)!
            term = _pmul(_linear_power(pref_lin, 1), _linear_power(exp_lin, m - 1))
            inv = Fraction(1, factorial(m - 1))
            for e, c in term.items():
                num[e] = num.get(e, 0) + c * inv
        num = {e: c for e, c in num.items() if c}
        q = _divide_by_difference(num, 0, 1)
        q = _divide_by_difference(q, 1, 2)
        q = _divide_by_difference(q, 2, 0)
        for e, c in q.items():
            if c:
                out[e] = -c / 4
    return out


def _alpha_power_moment(key: tuple, a: int, b: int, c: int) -> Fraction:
    """``mu(alpha_01^a alpha_12^b alpha_20^c)`` on a 3-slot monomial tensor."""
    n = len(key[0]) // 2
    layer = {key: Fraction(1)}
    for (i, j), m in (((0, 1), a), ((1, 2), b), ((2, 0), c)):
        for _ in range(m):
            nxt: dict = {}
            for t, v in layer.items():
                for f, t2 in _alpha_monomial(t, i, j, n):
                    nxt[t2] = nxt.get(t2, 0) + v * f
            layer = {t: v for t, v in nxt.items() if v}
    zero = (0,) * (2 * n)
    return layer.get((zero, zero, zero), Fraction(0))


def tau_closed_form_n1(c: ChainTensor, order: int = 12) -> EpsScalar:
    """``tau_2 = mu F(e alpha_01, e alpha_12, e alpha_20) pi`` with F taken from its Taylor series.

    Only total degree ``(y-degree)/2`` of F contributes on a given monomial
    tensor; a ValueError is raised if that exceeds ``order``.
    """
    if c.n != 1:
        raise ValueError("the closed form is for n = 1")
    _check_chain(1, c)
    coeffs = closed_form_coefficients(order)
    out = []
    for key, coeff in _pi_monomials(c.expanded(), 1).items():
        total = sum(sum(e) for e in key)
        if total % 2:
            continue
        d = total // 2
        if d > order:
            raise ValueError(f"need F to order {d}, have {order}")
        val = Fraction(0)
        for (a, b, cc), fc in coeffs.items():
            if a + b + cc == d:
                val += fc * _alpha_power_moment(key, a, b, cc)
        if val:
            out.append(coeff * EpsScalar.monomial(val, d))
    return sum_scalars(out)
