"""Exact Laurent polynomials in the formal parameter epsilon.

Every coefficient in the package lives in Q[e, 1/e].  Values are immutable
and kept in canonical form (no zero coefficients), so equality is structural.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = ["EpsScalar", "EPS", "ONE", "ZERO", "as_fraction", "as_scalar"]

RationalLike = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class EpsScalar:
    """Element of Q[e, 1/e], stored as ``{exponent: coefficient}``."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, RationalLike] | RationalLike | None = None):
        if terms is None:
            t = {}
        elif isinstance(terms, Mapping):
            t = {}
            for k, v in terms.items():
                v = as_fraction(v)
                if v:
                    t[int(k)] = v
        else:
            v = as_fraction(terms)
            t = {0: v} if v else {}
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "EpsScalar":
        # caller guarantees canonical form
        obj = cls.__new__(cls)
        obj._t = t
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff: RationalLike, exp: int = 0) -> "EpsScalar":
        c = as_fraction(coeff)
        return cls._raw({exp: c} if c else {})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def coeff(self, exp: int) -> Fraction:
        return self._t.get(exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def min_exp(self) -> int | None:
        return min(self._t) if self._t else None

    def max_exp(self) -> int | None:
        return max(self._t) if self._t else None

    def is_rational(self) -> bool:
        return not self._t or set(self._t) == {0}

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} depends on e")
        return self._t.get(0, Fraction(0))

    # ring operations

    def __add__(self, other) -> "EpsScalar":
        if not isinstance(other, (EpsScalar, int, Fraction)):
            return NotImplemented
        other = as_scalar(other)
        t = dict(self._t)
        for k, v in other._t.items():
            s = t.get(k)
            if s is None:
                t[k] = v
            else:
                s += v
                if s:
                    t[k] = s
                else:
                    del t[k]
        return EpsScalar._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "EpsScalar":
        return EpsScalar._raw({k: -v for k, v in self._t.items()})

    def __sub__(self, other) -> "EpsScalar":
        if not isinstance(other, (EpsScalar, int, Fraction)):
            return NotImplemented
        return self + (-as_scalar(other))

    def __rsub__(self, other) -> "EpsScalar":
        return as_scalar(other) - self

    def __mul__(self, other) -> "EpsScalar":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return EpsScalar._raw({k: v * other for k, v in self._t.items()})
        if not isinstance(other, EpsScalar):
            return NotImplemented
        t: dict[int, Fraction] = {}
        for k1, v1 in self._t.items():
            for k2, v2 in other._t.items():
                k = k1 + k2
                t[k] = t.get(k, 0) + v1 * v2
        return EpsScalar._raw({k: v for k, v in t.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "EpsScalar":
        """Division by a nonzero rational or by a single monomial c*e^k."""
        other = as_scalar(other)
        if len(other._t) != 1:
            raise ZeroDivisionError(f"cannot divide exactly by {other}")
        (k, c), = other._t.items()
        return EpsScalar._raw({e - k: v / c for e, v in self._t.items()})

    def __pow__(self, k: int) -> "EpsScalar":
        if k < 0:
            return ONE / self ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "EpsScalar":
        """Multiply by e^k."""
        if not k:
            return self
        return EpsScalar._raw({e + k: v for e, v in self._t.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, EpsScalar):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"EpsScalar({self})"

    def __str__(self) -> str:
        return format_scalar(self)


def as_scalar(x) -> EpsScalar:
    if isinstance(x, EpsScalar):
        return x
    return EpsScalar(as_fraction(x))


def sum_scalars(values: Iterable[EpsScalar]) -> EpsScalar:
    t: dict[int, Fraction] = {}
    for v in values:
        for k, c in v._t.items():
            t[k] = t.get(k, 0) + c
    return EpsScalar._raw({k: c for k, c in t.items() if c})


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(x: EpsScalar) -> str:
    """Render in the CLI grammar, e.g. ``1/2*e^-1 + 3 - e^2``."""
    if not x._t:
        return "0"
    parts = []
    for k in sorted(x._t):
        c = x._t[k]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = _format_coeff(a)
        else:
            eps = "e" if k == 1 else f"e^{k}"
            body = eps if a == 1 else f"{_format_coeff(a)}*{eps}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


ZERO = EpsScalar._raw({})
ONE = EpsScalar._raw({0: Fraction(1)})
EPS = EpsScalar._raw({1: Fraction(1)})
