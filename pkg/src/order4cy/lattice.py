"""Integral lattices: Smith normal form, discriminant forms, signatures and
the complement test inside the K3 lattice."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .errors import CapacityError, DomainError

K3_RANK = 22
DEFAULT_SEARCH_BOUND = 2 ** 12


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(m):
    return [list(row) for row in m]


def smith_normal_form(m):
    """Return (D, U, V) with U*m*V = D diagonal, d_i | d_(i+1), zeros last."""
    a = _copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    U, V = _identity(rows), _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in a:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return a, U, V


def _det(m) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def _transpose(m):
    return [list(col) for col in zip(*m)]


def _matmul(a, b):
    bt = _transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


@dataclass(frozen=True)
class IntegralLattice:
    gram: tuple

    def __init__(self, gram):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        if any(len(row) != len(g) for row in g):
            raise DomainError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(i)):
            raise DomainError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def det(self) -> int:
        return int(_det(self.gram)) if self.gram else 1

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def __add__(self, other: "IntegralLattice") -> "IntegralLattice":
        return direct_sum(self, other)

    def scaled(self, k: int) -> "IntegralLattice":
        return IntegralLattice([[k * x for x in row] for row in self.gram])

    def signature(self) -> tuple[int, int]:
        return signature(self.gram)


def direct_sum(*lattices: IntegralLattice) -> IntegralLattice:
    n = sum(L.rank for L in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            g[off + i][off:off + L.rank] = row
        off += L.rank
    return IntegralLattice(g)


def signature(gram) -> tuple[int, int]:
    """(positive, negative) counts by exact symmetric elimination."""
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if a[i][i]), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j makes the diagonal entry 2*a_ij
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            k = i
        piv = a[k][k]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            f = a[i][k] / piv
            if f:
                for t in range(n):
                    a[i][t] -= f * a[k][t]
                for t in range(n):
                    a[t][i] -= f * a[t][k]
    return pos, neg


def lattice_from_generators(gram) -> list[list[int]]:
    """Gram matrix of a basis of the lattice spanned by generators with the
    given (possibly degenerate) Gram matrix, modulo its radical."""
    D, _, V = smith_normal_form(gram)
    r = sum(1 for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i])
    basis = [row[:r] for row in V]
    return _matmul(_matmul(_transpose(basis), gram), basis)


# --- named lattices -------------------------------------------------------

def _root_gram(kind: str, n: int) -> list[list[int]]:
    edges = []
    if kind == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "D":
        if n < 4:
            raise DomainError(f"D{n} is not defined")
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif kind == "E":
        if n not in (6, 7, 8):
            raise DomainError(f"E{n} is not defined")
        edges = [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    g = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return g


_TERM = re.compile(
    r"^(?P<neg>-)?(?:(?P<root>[ADE])(?P<n>\d+)|(?P<u>U)|(?:DIAG\((?P<diag>-?\d+)\)|<(?P<ang>-?\d+)>))"
    r"(?:\((?P<scale>-?\d+)\))?(?:\^(?P<pow>\d+))?$"
)


def named_lattice(name: str) -> IntegralLattice:
    """Parse names like 'U(2)^2+<-2>^4', 'E7', '-A1', 'DIAG(-2)'.

    Root lattices are negative definite; a leading '-' negates, a '(k)'
    suffix rescales the form by k, '^k' takes an orthogonal power.
    """
    text = (name.replace("−", "-").replace("⊕", "+").replace("⟨", "<").replace("⟩", ">")
            .replace(" ", ""))
    if not text:
        raise DomainError("empty lattice name")
    parts = []
    for term in re.split(r"\+(?![^(<]*[)>])", text):
        m = _TERM.match(term)
        if not m:
            raise DomainError(f"unknown lattice name {term!r}")
        if m["root"]:
            g = _root_gram(m["root"], int(m["n"]))
        elif m["u"]:
            g = [[0, 1], [1, 0]]
        else:
            g = [[int(m["diag"] if m["diag"] is not None else m["ang"])]]
        L = IntegralLattice(g)
        if m["scale"]:
            L = L.scaled(int(m["scale"]))
        if m["neg"]:
            L = L.scaled(-1)
        parts.extend([L] * int(m["pow"] or 1))
    return direct_sum(*parts)


def as_lattice(x) -> IntegralLattice:
    if isinstance(x, IntegralLattice):
        return x
    if isinstance(x, str):
        return named_lattice(x)
    return IntegralLattice(x)


# --- discriminant forms ---------------------------------------------------

@dataclass(frozen=True)
class DiscriminantForm:
    """Finite quadratic form on the group of order prod(invariant_factors),
    presented by generators g_i of order d_i with q(g_i) in [0,2) and
    b(g_i, g_j) in [0,1)."""

    invariant_factors: tuple
    q_values: tuple
    b_matrix: tuple

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def q(self, x) -> Fraction:
        n = len(x)
        v = sum(x[i] * x[i] * self.q_values[i] for i in range(n))
        v += 2 * sum(x[i] * x[j] * self.b_matrix[i][j] for i in range(n) for j in range(i + 1, n))
        return v % 2

    def b(self, x, y) -> Fraction:
        n = len(x)
        return sum(x[i] * y[j] * self.b_matrix[i][j] for i in range(n) for j in range(n)) % 1

    def negated(self) -> "DiscriminantForm":
        return DiscriminantForm(
            self.invariant_factors,
            tuple((-v) % 2 for v in self.q_values),
            tuple(tuple((-v) % 1 for v in row) for row in self.b_matrix),
        )

    def __add__(self, other: "DiscriminantForm") -> "DiscriminantForm":
        n1, n2 = len(self.invariant_factors), len(other.invariant_factors)
        b = [[Fraction(0)] * (n1 + n2) for _ in range(n1 + n2)]
        for i in range(n1):
            b[i][:n1] = self.b_matrix[i]
        for i in range(n2):
            b[n1 + i][n1:] = other.b_matrix[i]
        return DiscriminantForm(
            self.invariant_factors + other.invariant_factors,
            self.q_values + other.q_values,
            tuple(tuple(row) for row in b),
        )

    def to_json(self) -> dict:
        return {
            "invariantFactors": list(self.invariant_factors),
            "q": [str(v) for v in self.q_values],
            "b": [[str(v) for v in row] for row in self.b_matrix],
            "order": self.order,
        }


def _cokernel_generators(gram, d: int):
    """Generators y_i (mod d) and orders d_i of Z^n / gram*Z^n, where d is
    |det gram|.  Since d*Z^n lies in the image, entries of the working
    matrix may be reduced mod d at every step; only the inverse of the row
    transformation is tracked, and only mod d."""
    n = len(gram)
    a = [[x % d for x in row] for row in gram]
    W = _identity(n)  # columns are the generators

    def red(x):
        x %= d
        return x - d if 2 * x > d else x

    def add_row(src, dst, k):  # row dst += k * row src  <=>  W col src -= k * W col dst
        a[dst] = [red(x + k * y) for x, y in zip(a[dst], a[src])]
        for row in W:
            row[src] = (row[src] - k * row[dst]) % d

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        for row in W:
            row[i], row[j] = row[j], row[i]

    def add_col(src, dst, k):
        for row in a:
            row[dst] = red(row[dst] + k * row[src])

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]

    factors = []
    for t in range(n):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
            if not nonzero:
                break
            _, i, j = min(nonzero)
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, n)) or any(a[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        factors.append(gcd(a[t][t], d))
    gens = [[W[k][i] for k in range(n)] for i in range(n)]
    return gens, factors


def _inverse(m) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for k in range(n):
        piv = next(i for i in range(k, n) if a[i][k])
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def discriminant_form(L) -> DiscriminantForm:
    L = as_lattice(L)
    if not L.is_even():
        raise DomainError("discriminant quadratic form needs an even lattice")
    det = abs(L.det())
    if det == 0:
        raise DomainError("lattice is degenerate")
    if det == 1:
        return DiscriminantForm((), (), ())
    ys, orders = _cokernel_generators(L.gram, det)
    Ginv = _inverse(L.gram)
    n = L.rank
    # the dual element for y is x = G^-1 y, and x.G.x' = y.G^-1.y'
    gens = [(y, k) for y, k in zip(ys, orders) if k > 1]
    gens.sort(key=lambda g: g[1])

    def pair(y, z):
        return sum(y[i] * Ginv[i][j] * z[j] for i in range(n) for j in range(n) if y[i] and z[j])

    q = tuple(pair(y, y) % 2 for y, _ in gens)
    b = tuple(tuple(pair(y, z) % 1 for z, _ in gens) for y, _ in gens)
    return DiscriminantForm(tuple(k for _, k in gens), q, b)


def forms_isomorphic(f1: DiscriminantForm, f2: DiscriminantForm, sign: int = 1,
                     bound: int = DEFAULT_SEARCH_BOUND) -> bool:
    """Search for a group isomorphism phi with q2(phi x) = sign * q1(x)."""
    if max(f1.order, f2.order) > bound:
        raise CapacityError(f"group order {max(f1.order, f2.order)} exceeds search bound {bound}")
    if f1.order != f2.order:
        return False
    if f1.order == 1:
        return True
    mods = f2.invariant_factors

    def add(x, y, k=1):
        return tuple((a + k * c) % m for a, c, m in zip(x, y, mods))

    def order_of(x):
        k, y = 1, x
        zero = (0,) * len(x)
        while y != zero:
            y = add(y, x)
            k += 1
        return k

    elems = list(f2.elements())
    gens = f1.invariant_factors
    target_q = [(sign * v) % 2 for v in f1.q_values]
    target_b = [[(sign * v) % 1 for v in row] for row in f1.b_matrix]
    candidates = [
        [y for y in elems if f2.q(y) == target_q[i] and order_of(y) == gens[i]]
        for i in range(len(gens))
    ]
    if any(not c for c in candidates):
        return False
    zero = (0,) * len(mods)

    def search(i, images, span):
        if i == len(gens):
            return True
        for y in candidates[i]:
            if any(f2.b(images[j], y) != target_b[j][i] for j in range(i)):
                continue
            new_span = {add(s, y, c) for s in span for c in range(gens[i])}
            if len(new_span) != len(span) * gens[i]:
                continue
            if search(i + 1, images + [y], new_span):
                return True
        return False

    return search(0, [], {zero})


def disc_forms_opposite(L1, L2, bound: int = DEFAULT_SEARCH_BOUND) -> bool:
    """True iff A_L1 and A_L2 are isomorphic with q2 = -q1."""
    return forms_isomorphic(discriminant_form(L1), discriminant_form(L2), -1, bound)


def k3_complement_compatible(NS, T, bound: int = DEFAULT_SEARCH_BOUND) -> bool:
    """Necessary conditions for NS and T to be orthogonal complements in
    the K3 lattice: ranks, signatures and opposite discriminant forms."""
    NS, T = as_lattice(NS), as_lattice(T)
    if NS.rank + T.rank != K3_RANK:
        return False
    if NS.signature() != (1, NS.rank - 1) or T.signature() != (2, T.rank - 2):
        return False
    return disc_forms_opposite(NS, T, bound)


def two_elementary_invariants(L) -> tuple[int, int, int]:
    """Nikulin's (r, a, delta) of a 2-elementary even lattice."""
    L = as_lattice(L)
    f = discriminant_form(L)
    if any(d != 2 for d in f.invariant_factors):
        raise DomainError("lattice is not 2-elementary")
    delta = 0 if all(f.q(x).denominator == 1 for x in f.elements()) else 1
    return L.rank, len(f.invariant_factors), delta
