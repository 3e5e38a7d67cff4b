"""Cyclic covers z^N = prod p_i(r)^m_i of the projective line.

Genus by Riemann-Hurwitz, a monomial basis of holomorphic differentials,
eigenvalues of monomial automorphisms on forms, and verification of
quotient maps by rewriting.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd, lcm

from .algebra import UniPoly, poly_gcd, squarefree_decompose
from .errors import DomainError
from .parse import MPoly


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def place_degree(place) -> int:
    return 1 if place is INFINITY else place.degree


def place_str(place, var: str = "r") -> str:
    return "infinity" if place is INFINITY else place.to_str(var)


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2*pi*i*exponent) with exponent in Q/Z, stored in [0, 1)."""

    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent) % 1)

    @classmethod
    def of_order(cls, k: int, power: int = 1) -> "RootOfUnity":
        return cls(Fraction(power, k))

    @property
    def order(self) -> int:
        return self.exponent.denominator

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity(self.exponent + other.exponent)

    def __pow__(self, n: int) -> "RootOfUnity":
        return RootOfUnity(self.exponent * n)

    def __complex__(self):
        return cmath.exp(2j * cmath.pi * float(self.exponent))

    def __str__(self):
        names = {Fraction(0): "1", Fraction(1, 4): "i", Fraction(1, 2): "-1", Fraction(3, 4): "-i"}
        return names.get(self.exponent, f"exp(2*pi*i*{self.exponent})")


ONE = RootOfUnity(Fraction(0))
I_UNIT = RootOfUnity(Fraction(1, 4))


class CyclicCover:
    """z^N = prod p(r)^m over finite places, with a branch datum at infinity."""

    def __init__(self, N: int, branches):
        if N < 1:
            raise DomainError("cover degree must be positive")
        self.N = N
        finite = []
        m_inf = None
        for place, m in branches:
            if place is INFINITY:
                m_inf = m % N
                continue
            if not isinstance(place, UniPoly) or place.degree < 1:
                raise DomainError(f"invalid place {place!r}")
            if m % N == 0:
                raise DomainError(f"multiplicity of {place.to_str('r')} vanishes mod {N}")
            finite.append((place.monic(), m % N))
        for i, (p, _) in enumerate(finite):
            if len(squarefree_decompose(p)) != 1 or squarefree_decompose(p)[0][1] != 1:
                raise DomainError(f"place {p.to_str('r')} is not squarefree")
            for q, _ in finite[i + 1:]:
                if poly_gcd(p, q).degree > 0:
                    raise DomainError("finite places must be pairwise coprime")
        self.finite = tuple(finite)
        self.total_degree = sum(p.degree * m for p, m in finite)
        implied = (-self.total_degree) % N
        if m_inf is not None and m_inf != implied:
            raise DomainError(f"multiplicity at infinity {m_inf} inconsistent with implied {implied}")
        self.m_infinity = implied

    @classmethod
    def from_roots(cls, N: int, roots_with_mult) -> "CyclicCover":
        return cls(N, [(UniPoly([-Fraction(a), 1]), m) for a, m in roots_with_mult])

    def places(self):
        """All branch data including infinity (possibly with multiplicity 0)."""
        return list(self.finite) + [(INFINITY, self.m_infinity)]

    def branch_polynomial(self) -> UniPoly:
        out = UniPoly([1])
        for p, m in self.finite:
            out = out * p ** m
        return out

    def __repr__(self):
        parts = ", ".join(f"({p.to_str('r')}, {m})" for p, m in self.finite)
        return f"CyclicCover(N={self.N}, [{parts}], m_inf={self.m_infinity})"


def _check_connected(c: CyclicCover):
    g = c.N
    for _, m in c.places():
        g = gcd(g, m)
    if g != 1:
        raise DomainError(f"cover is disconnected: gcd of N and multiplicities is {g}")


def genus(c: CyclicCover) -> int:
    _check_connected(c)
    total = -2 * c.N
    for place, m in c.places():
        total += place_degree(place) * (c.N - gcd(c.N, m))
    if total % 2:
        raise DomainError("Riemann-Hurwitz count is odd; branch data inconsistent")
    return total // 2 + 1


@dataclass(frozen=True)
class DifferentialForm:
    """(prod p_i^exponents[i]) * r^r_power * dr / z^l on a cyclic cover."""

    exponents: tuple
    r_power: int
    l: int

    def polynomial(self, cover: CyclicCover) -> UniPoly:
        h = UniPoly.monomial(self.r_power)
        for (p, _), e in zip(cover.finite, self.exponents):
            h = h * p ** e
        return h

    def describe(self, cover: CyclicCover, var: str = "r") -> str:
        h = self.polynomial(cover).to_str(var)
        z = "z" if self.l == 1 else f"z^{self.l}"
        return f"({h})*d{var}/{z}"


def _min_exponent(N: int, m: int, l: int) -> int:
    g = gcd(N, m)
    e = N // g
    return max(0, ceil(Fraction(l * m // g - e + 1, e)))


def holomorphic_form_basis(c: CyclicCover) -> list[DifferentialForm]:
    """Monomial basis of holomorphic 1-forms h(r) dr / z^l, 1 <= l < N.

    At a root of p_i the form has order n_i*e_i + e_i - 1 - l*m_i/g_i with
    e_i = N/g_i, g_i = gcd(N, m_i); at infinity it has order
    -deg(h)*e - e - 1 + l*D*e/N with D the total finite multiplicity.
    """
    _check_connected(c)
    N, D = c.N, c.total_degree
    e_inf = N // gcd(N, c.m_infinity)
    forms = []
    for l in range(1, N):
        mins = [_min_exponent(N, m, l) for _, m in c.finite]
        base_deg = sum(n * p.degree for n, (p, _) in zip(mins, c.finite))
        max_deg = floor(Fraction(l * D, N) - 1 - Fraction(1, e_inf))
        for k in range(0, max_deg - base_deg + 1):
            forms.append(DifferentialForm(tuple(mins), k, l))
    return forms


def form_valuations(c: CyclicCover, form: DifferentialForm) -> list[tuple[object, Fraction]]:
    """Order of vanishing of the form at the points above each branch place."""
    out = []
    N = c.N
    for (p, m), n in zip(c.finite, form.exponents):
        g = gcd(N, m)
        e = N // g
        out.append((p, n * e + e - 1 - Fraction(form.l * m, g)))
    h_deg = form.polynomial(c).degree
    e_inf = N // gcd(N, c.m_infinity)
    out.append((INFINITY, -h_deg * e_inf - e_inf - 1 + Fraction(form.l * c.total_degree * e_inf, N)))
    return out


class MonomialAutomorphism:
    """(r, z) -> (r_scale * r, z_scale * z), checked against a cover."""

    def __init__(self, cover: CyclicCover, r_scale: RootOfUnity, z_scale: RootOfUnity):
        F = cover.branch_polynomial()
        classes = {k % r_scale.order for k, a in enumerate(F.coeffs) if a}
        if len(classes) != 1:
            raise DomainError("r-scaling does not map the branch polynomial to a multiple of itself")
        j0 = classes.pop()
        if r_scale ** j0 != z_scale ** cover.N:
            raise DomainError("z-scaling incompatible with the cover relation")
        self.cover = cover
        self.r_scale = r_scale
        self.z_scale = z_scale

    @property
    def order(self) -> int:
        return lcm(self.r_scale.order, self.z_scale.order)


def automorphism_eigenvalues(c: CyclicCover, m: MonomialAutomorphism, basis) -> list[RootOfUnity]:
    """Eigenvalue of the pullback on each form h(r) dr / z^l.

    h(zeta r) = zeta^j h(r) when all monomials of h have degree j mod the
    order of zeta; the pullback is then zeta^(j+1) * z_scale^(-l).
    """
    out = []
    k = m.r_scale.order
    for form in basis:
        h = form.polynomial(c)
        classes = {d % k for d, a in enumerate(h.coeffs) if a}
        if len(classes) != 1:
            raise DomainError(f"form {form.describe(c)} is not an eigenvector")
        j = classes.pop()
        out.append(m.r_scale ** (j + 1) * m.z_scale ** (-form.l))
    return out


@dataclass
class RewriteRule:
    var: str
    power: int
    rhs: MPoly = field(repr=False)


def _as_rules(source_relations) -> list[RewriteRule]:
    rules = []
    items = source_relations.items() if isinstance(source_relations, dict) else source_relations
    for item in items:
        if isinstance(item, RewriteRule):
            rules.append(item)
            continue
        lhs, rhs = item
        lhs = MPoly.coerce(lhs)
        if len(lhs.terms) != 1:
            raise DomainError(f"rule left side must be a single power, got {lhs.to_str()}")
        (mono, coeff), = lhs.terms.items()
        if coeff != 1 or len(mono) != 1:
            raise DomainError(f"rule left side must be a single power, got {lhs.to_str()}")
        (var, power), = mono
        rules.append(RewriteRule(var, power, MPoly.coerce(rhs)))
    return rules


def _check_terminating(rules: list[RewriteRule]):
    deps = {r.var: r.rhs.variables() for r in rules}
    state: dict = {}

    def visit(v, path):
        if state.get(v) == 1:
            raise DomainError(f"rewriting does not terminate: cycle through {' -> '.join(path + [v])}")
        if state.get(v) == 2 or v not in deps:
            return
        state[v] = 1
        for w in deps[v]:
            visit(w, path + [v])
        state[v] = 2

    for v in deps:
        visit(v, [])


def rewrite(poly: MPoly, source_relations) -> MPoly:
    """Replace var^power by its rule until no rule applies."""
    rules = _as_rules(source_relations)
    _check_terminating(rules)
    by_var = {r.var: r for r in rules}
    pending = dict(poly.terms)
    done: dict = {}
    while pending:
        mono, c = pending.popitem()
        exps = dict(mono)
        hit = next((v for v, e in exps.items() if v in by_var and e >= by_var[v].power), None)
        if hit is None:
            done[mono] = done.get(mono, 0) + c
            continue
        rule = by_var[hit]
        exps[hit] -= rule.power
        rest = MPoly({tuple(sorted((v, e) for v, e in exps.items() if e)): c})
        for m2, c2 in (rest * rule.rhs).terms.items():
            pending[m2] = pending.get(m2, 0) + c2
            if not pending[m2]:
                del pending[m2]
    return MPoly(done)


def verify_quotient_map(source_relations, substitution: dict, target_relation) -> bool:
    """True iff the target relation pulled back by the substitution reduces to 0."""
    rules = _as_rules(source_relations)
    _check_terminating(rules)
    pulled = MPoly.coerce(target_relation).substitute(substitution)
    return rewrite(pulled, rules).is_zero()


def symbolic_polynomial(var: str, degree: int, coeff_prefix: str = "c") -> MPoly:
    """c0 + c1*var + ... + cg*var^g with indeterminate coefficients."""
    out = MPoly()
    for k in range(degree + 1):
        out = out + MPoly.var(f"{coeff_prefix}{k}") * MPoly.var(var) ** k
    return out
