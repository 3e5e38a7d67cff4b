"""Exact arithmetic: univariate polynomials, rational functions and the
differential algebra of a cyclic cover.

Coefficients are duck-typed.  ``UniPoly`` over ``Fraction`` is a polynomial
over Q; a ``RatFunc`` built from such polynomials is an element of Q(x).  A
``UniPoly`` whose coefficients are themselves ``RatFunc`` objects is a
polynomial over Q(x), which is how the two-level tower Q(lambda)(r) used by
``CoverElement`` is represented.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import gcd, lcm

from gmpy2 import mpq

from .errors import DomainError

Rational = Fraction
# rationals are stored as gmpy2 mpq (several times faster than Fraction,
# hash- and equality-compatible with it)
QTYPES = (Fraction, type(mpq()))
SCALARS = (int,) + QTYPES


def _depth(x) -> int:
    if isinstance(x, RatFunc):
        return x.depth
    if isinstance(x, UniPoly):
        return max((_depth(c) for c in x.coeffs), default=0)
    return 0


def _fmt_coeff(c) -> str:
    if isinstance(c, RatFunc):
        return c.to_str("lambda")
    return str(c)


class UniPoly:
    """Dense univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [mpq(c) if isinstance(c, SCALARS) else c for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff=Fraction(1)) -> "UniPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def from_roots(cls, roots) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, SCALARS):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self.to_str()})"

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if isinstance(c, QTYPES):
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                if mono and mag == 1:
                    body = mono
                elif mono:
                    body = f"{mag}*{mono}"
                else:
                    body = str(mag)
            else:
                sign = "+"
                body = f"({_fmt_coeff(c)})" + (f"*{mono}" if mono else "")
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, SCALARS):
            return UniPoly([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return UniPoly()
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                t = x * y
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = a[-1] - a[-1]
        return UniPoly([zero if c is None else c for c in out])

    __rmul__ = __mul__

    def scale(self, s) -> "UniPoly":
        """Multiply every coefficient by the scalar ``s``."""
        return UniPoly([c * s for c in self.coeffs])

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative power of a polynomial")
        result = UniPoly([1]) if not self.coeffs else UniPoly([self.coeffs[-1] / self.coeffs[-1]])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return UniPoly(), self
        inv = 1 / o.lc
        quot = [None] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(o.coeffs) - 1] * inv
            quot[k] = c
            if c:
                for j, y in enumerate(o.coeffs):
                    rem[k + j] = rem[k + j] - c * y
        return UniPoly(quot), UniPoly(rem[: len(o.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        if isinstance(other, UniPoly) and len(other.coeffs) == 1:
            c = other.coeffs[0]
            return self if c == 1 else self.scale(1 / c)
        q, r = divmod(self, other)
        if r:
            raise DomainError("polynomial division is not exact")
        return q

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        inv = 1 / self.lc
        return UniPoly([c * inv for c in self.coeffs[:-1]] + [self.lc / self.lc])

    def derivative(self) -> "UniPoly":
        return UniPoly([c * i for i, c in enumerate(self.coeffs) if i > 0])

    def map_coeffs(self, f) -> "UniPoly":
        return UniPoly([f(c) for c in self.coeffs])

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return 0 if acc is None else acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly([c])
        return acc

    def content_primitive(self) -> tuple[Fraction, "UniPoly"]:
        """Split a Q-polynomial as ``content * primitive`` with integer primitive part."""
        if not self.coeffs:
            return Fraction(0), self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), UniPoly([Fraction(v // g) for v in ints])


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both inputs vanish)."""
    if a and b and (a.degree == 0 or b.degree == 0):
        return UniPoly([a.lc / a.lc])
    if a and b and isinstance(a.lc, RatFunc) and a.lc.depth == 1:
        return _tower_gcd(a, b)
    # monic remainders keep coefficient growth down over Q(lambda)
    while b:
        b = b.monic()
        a, b = b, a % b
    return a.monic()


def _clear_denominators(p: UniPoly) -> list[UniPoly]:
    """Coefficients of a polynomial over Q(x), scaled into Q[x] and made primitive."""
    common = UniPoly([1])
    for c in p.coeffs:
        if c.den.degree > 0:
            common = common * c.den.exact_div(poly_gcd(common, c.den))
    return _primitive([c.num * common.exact_div(c.den) for c in p.coeffs])


def _primitive(cs: list[UniPoly]) -> list[UniPoly]:
    content = UniPoly()
    for c in cs:
        if c:
            content = c if not content else poly_gcd(content, c)
            if content.degree == 0:
                break
    content = content.monic()
    lead = next(c for c in reversed(cs) if c)
    cs = [c.exact_div(content) if c else c for c in cs]
    _, prim = lead.exact_div(content).content_primitive()
    scale = prim.lc / lead.exact_div(content).lc
    return [c.scale(scale) for c in cs]


_PROBE = mpq(7919, 104729)


def _specialize(p: UniPoly, x0):
    out = []
    for c in p.coeffs:
        d = c.den(x0)
        if not d:
            return None
        out.append(c.num(x0) / d)
    return UniPoly(out)


def _coprime_at(a: UniPoly, b: UniPoly, x0) -> bool:
    sa, sb = _specialize(a, x0), _specialize(b, x0)
    if sa is None or sb is None or sa.degree != a.degree or sb.degree != b.degree:
        return False
    return poly_gcd(sa, sb).degree == 0


def _tower_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """gcd over Q(x) by a primitive pseudo-remainder sequence over Q[x].

    Plain Euclid over Q(x) lets coefficient degrees explode; working with
    primitive parts keeps them at the size of the inputs.
    """
    # specializing x can only enlarge the gcd while both leading
    # coefficients survive, so a trivial specialized gcd proves coprimality
    if _coprime_at(a, b, _PROBE):
        return UniPoly([a.lc / a.lc])
    f, g = _clear_denominators(a), _clear_denominators(b)
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = list(f)
        lg = g[-1]
        while len(r) >= len(g):
            lr, shift = r[-1], len(r) - len(g)
            r = [c * lg for c in r]
            for j, y in enumerate(g):
                r[shift + j] = r[shift + j] - lr * y
            while r and not r[-1]:
                r.pop()
        f, g = g, (_primitive(r) if r else [])
    lead = RatFunc(f[-1])
    return UniPoly([RatFunc(c) / lead for c in f])


def squarefree_decompose(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's squarefree decomposition over a field of characteristic zero.

    Returns monic, pairwise coprime, squarefree factors with strictly
    increasing multiplicities, omitting trivial factors.
    """
    if not p:
        raise DomainError("squarefree decomposition of the zero polynomial")
    if p.degree == 0:
        return []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def rational_roots(p: UniPoly) -> list[Fraction]:
    """Distinct rational roots of a polynomial over Q, in increasing order."""
    if not p:
        raise DomainError("roots of the zero polynomial")
    _, prim = p.content_primitive()
    coeffs = [int(c) for c in prim.coeffs]
    roots = set()
    k = 0
    while k < len(coeffs) and coeffs[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
    coeffs = coeffs[k:]
    if len(coeffs) <= 1:
        return sorted(roots)
    c0, cn = abs(coeffs[0]), abs(coeffs[-1])
    q = UniPoly([Fraction(c) for c in coeffs])
    for num in _divisors(c0):
        for den in _divisors(cn):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and q(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


class RatFunc:
    """Quotient num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den", "depth")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, UniPoly):
            num = UniPoly([num])
        if den is None:
            if num.coeffs:
                den = UniPoly([num.coeffs[-1] / num.coeffs[-1]])
            else:
                den = UniPoly([1])
            _reduced = True
        elif not isinstance(den, UniPoly):
            den = UniPoly([den])
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self.depth = 1 + max(_depth(num), _depth(den))

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            if other.depth < self.depth:
                other = self._lift(other)
            elif other.depth > self.depth:
                return other == self
            return self.num == other.num and self.den == other.den
        if isinstance(other, SCALARS + (UniPoly,)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        if self.den.degree == 0 and self.num.degree <= 0:
            c = self.num.coeffs[0] if self.num.coeffs else Fraction(0)
            return hash(c)
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.to_str()})"

    def to_str(self, var: str = "x") -> str:
        if self.den.degree == 0:
            return self.num.to_str(var)
        return f"({self.num.to_str(var)})/({self.den.to_str(var)})"

    def _lift(self, scalar) -> "RatFunc":
        one = self.den.lc
        return RatFunc(UniPoly([scalar * one]), UniPoly([one]), _reduced=True)

    def _binop_operand(self, other):
        """Return (kind, value): kind 'same' for a same-level RatFunc, 'scalar' otherwise."""
        if isinstance(other, RatFunc):
            if other.depth == self.depth:
                return "same", other
            if other.depth < self.depth:
                return "scalar", other
            return None, None
        if isinstance(other, UniPoly):
            return "same", RatFunc(other)
        if isinstance(other, SCALARS):
            return "scalar", mpq(other)
        return None, None

    def __add__(self, other):
        kind, o = self._binop_operand(other)
        if kind is None:
            return NotImplemented
        if kind == "scalar":
            if not o:
                return self
            # gcd(num + o*den, den) = gcd(num, den) = 1
            return RatFunc(self.num + self.den.scale(o), self.den, _reduced=True)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        # Henrici: only gcds of denominators and of the sum with g are needed
        g = poly_gcd(self.den, o.den)
        if g.degree == 0:
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den, _reduced=True)
        d1, d2 = self.den.exact_div(g), o.den.exact_div(g)
        t = self.num * d2 + o.num * d1
        if not t:
            return RatFunc(t, UniPoly([self.den.lc]), _reduced=True)
        g2 = poly_gcd(t, g)
        num, den = t.exact_div(g2), d1 * o.den.exact_div(g2)
        inv = 1 / den.lc
        return RatFunc(num.scale(inv), den.scale(inv), _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        kind, o = self._binop_operand(other)
        if kind is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        kind, o = self._binop_operand(other)
        if kind is None:
            return NotImplemented
        if kind == "scalar":
            if not o:
                return RatFunc(UniPoly(), UniPoly([self.den.lc]), _reduced=True)
            return RatFunc(self.num.scale(o), self.den, _reduced=True)
        if not self.num or not o.num:
            return RatFunc(UniPoly(), UniPoly([self.den.lc]), _reduced=True)
        # cross-cancel before multiplying keeps intermediate sizes small
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = self.num.exact_div(g1), o.den.exact_div(g1)
        n2, d1 = o.num.exact_div(g2), self.den.exact_div(g2)
        num, den = n1 * n2, d1 * d2
        inv = 1 / den.lc
        return RatFunc(num.scale(inv), den.scale(inv), _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        inv = 1 / self.num.lc
        return RatFunc(self.den.scale(inv), self.num.scale(inv), _reduced=True)

    def __truediv__(self, other):
        kind, o = self._binop_operand(other)
        if kind is None:
            return NotImplemented
        if kind == "scalar":
            return self * (1 / o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def derivative(self) -> "RatFunc":
        """Derivative in the outer variable."""
        # with g = gcd(den, den'), a prime of multiplicity k in den divides
        # den/g once and den'/g not at all, so the result is already reduced
        return self._quotient_rule(self.num.derivative(), self.den.derivative(), reduced=True)

    def derivative_coeffs(self, d) -> "RatFunc":
        """Apply a derivation ``d`` to the coefficients (inner variable)."""
        return self._quotient_rule(self.num.map_coeffs(d), self.den.map_coeffs(d), reduced=False)

    def _quotient_rule(self, dnum: UniPoly, dden: UniPoly, reduced: bool) -> "RatFunc":
        if not dden:
            return RatFunc(dnum, self.den, _reduced=reduced)
        g = poly_gcd(self.den, dden)
        e = self.den.exact_div(g)
        num = dnum * e - self.num * dden.exact_div(g)
        return RatFunc(num, self.den * e, _reduced=reduced and bool(num))

    def __call__(self, x):
        return self.num(x) / self.den(x)


def _reduce(num: UniPoly, den: UniPoly) -> tuple[UniPoly, UniPoly]:
    if not num:
        one = den.lc / den.lc
        return UniPoly(), UniPoly([one])
    if den.degree > 0 and num.degree > 0:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
    inv = 1 / den.lc
    return num.scale(inv), den.scale(inv)


# -- the tower Q(lambda)(r) --------------------------------------------------

LAM = RatFunc(UniPoly([0, 1]))
ONE_L = RatFunc(UniPoly([1]))
ZERO_L = RatFunc(UniPoly())


def lam_const(c) -> RatFunc:
    """Embed a rational number into Q(lambda)."""
    return RatFunc(UniPoly([Fraction(c)]))


def r_poly(coeffs) -> UniPoly:
    """Polynomial in r with coefficients in Q(lambda); rationals are lifted."""
    return UniPoly([c if isinstance(c, RatFunc) else lam_const(c) for c in coeffs])


def r_func(num, den=None) -> RatFunc:
    num = num if isinstance(num, UniPoly) else r_poly([num])
    den = r_poly([1]) if den is None else den
    return RatFunc(num, den)


R = r_func(r_poly([0, 1]))
R_MINUS_1 = r_func(r_poly([-1, 1]))
R_MINUS_LAM = r_func(r_poly([-LAM, ONE_L]))


def _d_lambda_scalar(c: RatFunc) -> RatFunc:
    return c.derivative()


@dataclass(frozen=True)
class Cover:
    """The cyclic cover z^N = r^A (r-1)^B (r-lambda)^C."""

    N: int
    A: int
    B: int
    C: int

    def __post_init__(self):
        if self.N <= 0 or min(self.A, self.B, self.C) < 0:
            raise DomainError(f"invalid cover data {self}")

    @cache
    def branch_function(self) -> RatFunc:
        """z^N as a rational function of r."""
        return R ** self.A * R_MINUS_1 ** self.B * R_MINUS_LAM ** self.C

    @cache
    def log_dr(self) -> RatFunc:
        """(1/N) d/dr log(z^N)."""
        s = R.inverse() * self.A + R_MINUS_1.inverse() * self.B + R_MINUS_LAM.inverse() * self.C
        return s * Fraction(1, self.N)

    @cache
    def log_dlambda(self) -> RatFunc:
        """(1/N) d/dlambda log(z^N) = -(C/N)/(r - lambda)."""
        return R_MINUS_LAM.inverse() * Fraction(-self.C, self.N)


class CoverElement:
    """coefficient(r, lambda) * z^(-l) on a fixed cover."""

    __slots__ = ("cover", "l", "coeff")

    def __init__(self, cover: Cover, l: int, coeff):
        if not isinstance(coeff, RatFunc) or coeff.depth != 2:
            coeff = _to_r_func(coeff)
        self.cover = cover
        self.l = l
        self.coeff = coeff

    def __repr__(self):
        return f"CoverElement(l={self.l}, coeff={self.coeff.to_str('r')})"

    def rescale(self, l: int) -> "CoverElement":
        """Rewrite with z-exponent -l using z^N = r^A (r-1)^B (r-lambda)^C."""
        diff = l - self.l
        if diff % self.cover.N:
            raise DomainError(f"cannot rescale z^-{self.l} to z^-{l} on N={self.cover.N}")
        k = diff // self.cover.N
        return CoverElement(self.cover, l, self.coeff * self.cover.branch_function() ** k)

    def _align(self, other: "CoverElement") -> "CoverElement":
        if self.cover != other.cover:
            raise DomainError("elements live on different covers")
        return other if other.l == self.l else other.rescale(self.l)

    def __add__(self, other):
        if not isinstance(other, CoverElement):
            return NotImplemented
        o = self._align(other)
        return CoverElement(self.cover, self.l, self.coeff + o.coeff)

    def __neg__(self):
        return CoverElement(self.cover, self.l, -self.coeff)

    def __sub__(self, other):
        if not isinstance(other, CoverElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CoverElement):
            if self.cover != other.cover:
                raise DomainError("elements live on different covers")
            return CoverElement(self.cover, self.l + other.l, self.coeff * other.coeff)
        return CoverElement(self.cover, self.l, self.coeff * other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CoverElement):
            return NotImplemented
        try:
            return cover_is_zero(self - other)
        except DomainError:
            return False

    __hash__ = None


def _to_r_func(x) -> RatFunc:
    if isinstance(x, RatFunc):
        if x.depth == 2:
            return x
        return r_func(r_poly([x]))
    if isinstance(x, UniPoly):
        return r_func(r_poly(x.coeffs))
    return r_func(r_poly([Fraction(x)]))


def cover_d_dr(e: CoverElement) -> CoverElement:
    """d/dr of coeff * z^-l, using z_r/z = (1/N)(A/r + B/(r-1) + C/(r-lambda))."""
    coeff = e.coeff.derivative() - e.coeff * e.cover.log_dr() * e.l
    return CoverElement(e.cover, e.l, coeff)


def cover_d_dlambda(e: CoverElement) -> CoverElement:
    """d/dlambda of coeff * z^-l, using z_lambda/z = -(C/N)/(r-lambda)."""
    coeff = e.coeff.derivative_coeffs(_d_lambda_scalar) - e.coeff * e.cover.log_dlambda() * e.l
    return CoverElement(e.cover, e.l, coeff)


def cover_is_zero(e: CoverElement) -> bool:
    return e.coeff.is_zero()


def cover_monomial(cover: Cover, alpha: int, beta: int, gamma: int, l: int) -> CoverElement:
    """r^alpha (r-1)^beta (r-lambda)^gamma z^-l (negative exponents allowed)."""
    return CoverElement(cover, l, R ** alpha * R_MINUS_1 ** beta * R_MINUS_LAM ** gamma)
