"""Sparse multivariate polynomials over Q and a small expression parser.

Grammar: integers, identifiers (letters, digits, underscores), ``+ - * / ^``
and parentheses.  Division is allowed only by a nonzero constant.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import SCALARS, UniPoly
from .errors import DomainError


class ParseError(ValueError):
    """Malformed polynomial expression."""


def _mono_mul(m1, m2):
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class MPoly:
    """Polynomial stored as {monomial: coefficient}; a monomial is a sorted
    tuple of (variable, exponent) pairs with positive exponents."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "MPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls({((name, 1),): Fraction(1)})

    @staticmethod
    def coerce(x) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        if isinstance(x, str):
            return parse_poly(x)
        if isinstance(x, SCALARS):
            return MPoly.const(x)
        raise TypeError(f"cannot convert {type(x).__name__} to MPoly")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, SCALARS):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, var: str) -> int:
        return max((dict(m).get(var, 0) for m in self.terms), default=0)

    def __add__(self, other):
        other = MPoly.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-MPoly.coerce(other))

    def __rsub__(self, other):
        return MPoly.coerce(other) - self

    def __mul__(self, other):
        other = MPoly.coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("polynomial powers must be nonnegative integers")
        result, base = MPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute(self, mapping: dict) -> "MPoly":
        """Replace variables by polynomials; unmapped variables are kept."""
        mapping = {k: MPoly.coerce(v) for k, v in mapping.items()}
        out = MPoly()
        powers: dict = {}
        for m, c in self.terms.items():
            term = MPoly.const(c)
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = mapping[v] ** e
                    term = term * powers[key]
                else:
                    term = term * MPoly({((v, e),): 1})
            out = out + term
        return out

    def to_unipoly(self, var: str) -> UniPoly:
        extra = self.variables() - {var}
        if extra:
            raise ParseError(f"expected a polynomial in {var}, found {sorted(extra)}")
        deg = self.degree_in(var)
        coeffs = [Fraction(0)] * (deg + 1)
        for m, c in self.terms.items():
            coeffs[dict(m).get(var, 0)] += c
        return UniPoly(coeffs)

    @classmethod
    def from_unipoly(cls, p: UniPoly, var: str) -> "MPoly":
        return cls({((var, k),) if k else (): c for k, c in enumerate(p.coeffs)})

    def __repr__(self):
        return f"MPoly({self.to_str()!r})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(e for _, e in m), m)):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif ident is not None:
            tokens.append(("id", ident))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'}, found {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self) -> MPoly:
        if not self.tokens:
            raise ParseError("empty expression")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input at {self.peek()[1]!r}")
        return p

    def expr(self) -> MPoly:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MPoly:
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if q.variables() or q.is_zero():
                    raise ParseError("division is only allowed by a nonzero constant")
                p = p * MPoly.const(1 / q.terms[()])
        return p

    def unary(self) -> MPoly:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            return base ** int(val)
        return base

    def atom(self) -> MPoly:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return MPoly.const(int(val))
        if kind == "id":
            self.take()
            return MPoly.var(val)
        if (kind, val) == ("op", "("):
            self.take()
            p = self.expr()
            self.take(")")
            return p
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text: str) -> MPoly:
    return _Parser(text).parse()


def parse_unipoly(text: str, var: str | None = None) -> UniPoly:
    """Parse a univariate polynomial; the variable is inferred if not given."""
    p = parse_poly(text)
    names = p.variables()
    if var is None:
        if len(names) > 1:
            raise ParseError(f"expected one variable, found {sorted(names)}")
        var = next(iter(names), "x")
    return p.to_unipoly(var)
