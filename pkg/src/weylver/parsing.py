"""Text syntax for Weyl-algebra elements, chains and wedges.

Grammar (whitespace is ignored)::

    rational := int ['/' int]
    atom     := rational | 'e' ['^' int] | var ['^' uint] | 'E(' uint ',' uint ')'
    var      := ('p' | 'q') index
    term     := atom ('*' atom)*
    expr     := ['-'] term (('+' | '-') term)*
    tensor   := expr ('|' expr)*
    wedge    := expr (';' expr)*

``e`` is the formal parameter, ``E(r,c)`` a matrix unit of gl_N (1-based).
An expression with matrix units is a GlWeylElement; a plain one is a
WeylElement.  Wedge items are single expressions.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .hochschild import ChainTensor
from .lie import GlWeylElement, WedgeTuple
from .scalars import EpsScalar, as_scalar, sum_scalars
from .weyl import WeylElement

__all__ = ["ParseError", "parse_weyl_expression", "parse_scalar", "scalar_to_text", "scalar_to_json", "scalar_from_json"]


class ParseError(ValueError):
    """Syntax error or unknown symbol, with the 0-based character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|([pq])(\d+)|(E)\(|(e)|([-+*/^|;,()]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("var", (m.group(2), int(m.group(3))), start))
        elif m.group(4):
            out.append(("E", None, start))
        elif m.group(5):
            out.append(("e", None, start))
        else:
            out.append((m.group(6), None, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, n: int, N: int | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.n = n
        self.N = N

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, kind: str | None = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "a number" if kind == "int" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[0])
            raise ParseError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def signed_int(self) -> int:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        return sign * self.take("int")[1]

    def atom(self):
        """Returns (scalar, exponent vector, matrix unit or None)."""
        kind, val, pos = self.toks[self.i]
        exps = [0] * (2 * self.n)
        if kind == "int":
            self.take()
            num = val
            den = 1
            if self.peek() == "/":
                self.take()
                den = self.take("int")[1]
                if den == 0:
                    raise ParseError("division by zero", self.toks[self.i - 1][2])
            return EpsScalar.monomial(Fraction(num, den), 0), exps, None
        if kind == "e":
            self.take()
            k = 1
            if self.peek() == "^":
                self.take()
                k = self.signed_int()
            return EpsScalar.monomial(1, k), exps, None
        if kind == "var":
            self.take()
            letter, idx = val
            if not 1 <= idx <= self.n:
                raise ParseError(f"unknown variable {letter}{idx} for n={self.n}", pos)
            k = 1
            if self.peek() == "^":
                self.take()
                k = self.take("int")[1]
            exps[2 * idx - 2 + (letter == "q")] = k
            return EpsScalar.monomial(1, 0), exps, None
        if kind == "E":
            self.take()
            r = self.take("int")[1]
            self.take(",")
            c = self.take("int")[1]
            self.take(")")
            if self.N is None or not (1 <= r <= self.N and 1 <= c <= self.N):
                raise ParseError(f"unknown matrix unit E({r},{c}) for N={self.N}", pos)
            return EpsScalar.monomial(1, 0), exps, (r - 1, c - 1)
        got = "end of input" if kind == "end" else repr(kind)
        raise ParseError(f"expected a number, e, a variable or E(r,c), found {got}", pos)

    def term(self):
        scalar, exps, unit = self.atom()
        while self.peek() == "*":
            self.take()
            s2, e2, u2 = self.atom()
            scalar = scalar * s2
            exps = [a + b for a, b in zip(exps, e2)]
            if u2 is not None:
                if unit is not None:
                    if unit[1] != u2[0]:
                        scalar = scalar * 0
                    unit = (unit[0], u2[1])
                else:
                    unit = u2
        return scalar, tuple(exps), unit

    def expr(self):
        terms = []
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        while True:
            scalar, exps, unit = self.term()
            terms.append((scalar * sign, exps, unit))
            if self.peek() not in ("+", "-"):
                break
            sign = -1 if self.take()[0] == "-" else 1
        coeffs: dict = {}
        for scalar, exps, unit in terms:
            d = coeffs.setdefault(unit, {})
            d[exps] = d[exps] + scalar if exps in d else scalar
        if all(u is None for u in coeffs):
            return WeylElement.from_coefficients(self.n, coeffs.get(None, {}))
        if self.N is None:
            raise ParseError("matrix units need N", 0)
        out = GlWeylElement.zero(self.n, self.N)
        for unit, d in coeffs.items():
            f = WeylElement.from_coefficients(self.n, d)
            if unit is None:
                out = out + GlWeylElement.scalar(self.N, f)
            else:
                out = out + GlWeylElement.unit(self.N, unit[0], unit[1], f)
        return out

    def parse(self):
        items = [self.expr()]
        seps = set()
        while self.peek() in ("|", ";"):
            seps.add(self.take()[0])
            items.append(self.expr())
        if self.peek() != "end":
            tok = self.toks[self.i]
            raise ParseError(f"unexpected {tok[0]!r}", tok[2])
        if len(seps) > 1:
            raise ParseError("cannot mix '|' and ';'", 0)
        if not seps:
            return items[0]
        if "|" in seps:
            if any(isinstance(x, GlWeylElement) for x in items):
                raise ParseError("tensor slots must be plain Weyl elements", 0)
            return ChainTensor.elementary(*items)
        return WedgeTuple(items, self.N)


def parse_weyl_expression(text: str, n: int | None = None, N: int | None = None):
    """Parse an element, a ``|``-separated chain or a ``;``-separated wedge.

    ``n`` defaults to the largest variable index that occurs (at least 1).
    """
    if n is None:
        idx = [tok[1][1] for tok in _tokenize(text) if tok[0] == "var"]
        n = max(idx + [1])
    return _Parser(text, n, N).parse()


def parse_scalar(text: str) -> EpsScalar:
    f = parse_weyl_expression(text, 1)
    if isinstance(f, WeylElement) and f.is_scalar():
        return f.constant_term()
    raise ValueError(f"{text!r} is not a scalar")


def scalar_to_text(x) -> str:
    """``num/den*e^k + ...`` in the grammar above; ``0`` for zero."""
    x = as_scalar(x)
    out = ""
    for k, c in sorted(x.items()):
        body = f"{abs(c.numerator)}/{c.denominator}*e^{k}"
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out or "0"


def scalar_to_json(x) -> dict[str, str]:
    x = as_scalar(x)
    return {str(k): f"{c.numerator}/{c.denominator}" for k, c in sorted(x.items())}


def scalar_from_json(d: dict) -> EpsScalar:
    """Inverse of ``scalar_to_json``, going through the expression parser."""
    if not d:
        return parse_scalar("0")
    return sum_scalars(parse_scalar(f"{v}*e^{k}") for k, v in d.items())
