"""Property checks shared by the module tests (few examples) and the
acceptance run (1000 examples each).

Each function is a hypothesis test body; ``run(prop, n)`` executes it with
n derandomized examples.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from order4cy.algebra import (
    LAM,
    Cover,
    CoverElement,
    RatFunc,
    UniPoly,
    cover_d_dlambda,
    cover_d_dr,
    cover_is_zero,
    r_func,
    r_poly,
    squarefree_decompose,
)
from order4cy.curves import CyclicCover, genus, holomorphic_form_basis
from order4cy.fibration import WeierstrassJ1728, classify_fibers
from order4cy.lattice import IntegralLattice, discriminant_form, smith_normal_form, _det, _matmul
from order4cy.picard_fuchs import PFParams, SINGULAR_POINTS, indicial_exponents, pf_operator

import oracles


def prop(*strategies):
    """Record the strategies on a plain test body; ``run`` wraps it anew on
    every call, since hypothesis settings bind to one wrapped object."""
    def mark(body):
        body.strategies = strategies
        return body
    return mark


def run(body, n: int):
    test = given(*body.strategies)(body)
    settings(max_examples=n, derandomize=True, deadline=None,
             suppress_health_check=list(HealthCheck))(test)()


# --- fibrations ------------------------------------------------------------

@st.composite
def degree8_forms(draw):
    """a(s) with multiplicities <= 3 at rational and quadratic places and at
    infinity, of total homogeneous degree 8."""
    places = []
    remaining = 8
    inf = draw(st.integers(0, 3))
    remaining -= inf
    roots = draw(st.lists(st.integers(-6, 6), unique=True, max_size=8))
    quads = draw(st.lists(st.integers(1, 5), unique=True, max_size=3))
    for k in quads:
        m = draw(st.integers(1, 3))
        if 2 * m <= remaining:
            places.append((UniPoly([k, 0, 1]), m, 2))
            remaining -= 2 * m
    for x in roots:
        if remaining == 0:
            break
        m = draw(st.integers(1, min(3, remaining)))
        places.append((UniPoly([-x, 1]), m, 1))
        remaining -= m
    assume(remaining == 0)
    a = UniPoly([draw(st.sampled_from([1, -1, 2, 3]))])
    for p, m, _ in places:
        a = a * p ** m
    return a, places, inf


@prop(degree8_forms())
def prop_euler_24(data):
    a, places, inf = data
    report = classify_fibers(WeierstrassJ1728(a))
    assert report.euler_total == 24
    expected = Counter()
    for _, m, deg in places:
        expected[oracles.kodaira_from_order(m)[0]] += deg
    if inf:
        expected[oracles.kodaira_from_order(inf)[0]] += 1
    assert Counter(report.fiber_types()) == expected
    trivial = 2 + sum(deg * (oracles.kodaira_from_order(m)[2] - 1) for _, m, deg in places)
    if inf:
        trivial += oracles.kodaira_from_order(inf)[2] - 1
    assert report.trivial_lattice_rank == trivial


# --- Picard-Fuchs exponents ------------------------------------------------

@st.composite
def pf_params(draw):
    N = draw(st.integers(1, 8))
    A, B, C = (draw(st.integers(0, 2 * N)) for _ in range(3))
    alpha, beta, gamma = (draw(st.integers(-3, 3)) for _ in range(3))
    l = draw(st.integers(1, 2 * N))
    return PFParams(Cover(N, A, B, C), alpha, beta, gamma, l)


@prop(pf_params())
def prop_fuchs_relation(p):
    op = pf_operator(p)
    exps = [indicial_exponents(op, pt).exponents for pt in SINGULAR_POINTS]
    assert sum(sum(e) for e in exps) == 1
    a, b, c = p.abc()
    assert sorted(exps[0]) == sorted([Fraction(0), 1 - a - c])
    assert sorted(exps[1]) == sorted([Fraction(0), 1 - b - c])
    assert sorted(exps[2]) == sorted([c, a + b + c - 1])


# --- lattices --------------------------------------------------------------

@st.composite
def even_grams(draw):
    n = draw(st.integers(1, 4))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2 * draw(st.integers(-3, 3))
        for j in range(i + 1, n):
            g[i][j] = g[j][i] = draw(st.integers(-3, 3))
    assume(_det(g) != 0)
    return g


@prop(even_grams())
def prop_snf_discriminant(g):
    D, U, V = smith_normal_form(g)
    assert _matmul(_matmul(U, g), V) == D
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1
    diag = [D[i][i] for i in range(len(g))]
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1) if diag[i])
    det = abs(int(_det(g)))
    prod = 1
    for d in diag:
        prod *= abs(d)
    assert prod == det
    assert discriminant_form(IntegralLattice(g)).order == det


# --- curves ------------------------------------------------------------------

@prop(st.lists(st.integers(-20, 20), unique=True, min_size=1, max_size=12))
def prop_hyperelliptic_genus(roots):
    c = CyclicCover.from_roots(2, [(x, 1) for x in roots])
    g = genus(c)
    assert g == oracles.hyperelliptic_genus(len(roots))
    assert len(holomorphic_form_basis(c)) == g


# --- cover differential algebra ----------------------------------------------

_small = st.integers(-3, 3)


@st.composite
def lam_scalars(draw):
    num = UniPoly([draw(_small), draw(_small)])
    if draw(st.booleans()):
        return RatFunc(num)
    return RatFunc(num, UniPoly([draw(st.integers(1, 3)), 1]))


@st.composite
def cover_elements(draw, cover):
    coeffs = [draw(lam_scalars()) for _ in range(draw(st.integers(1, 2)))]
    num = r_poly(coeffs)
    den_choice = draw(st.sampled_from(["1", "r", "r-lam"]))
    den = {"1": r_poly([1]), "r": r_poly([0, 1]), "r-lam": r_poly([-LAM, 1])}[den_choice]
    return CoverElement(cover, draw(st.integers(-2, 3)), r_func(num, den))


@st.composite
def cover_pairs(draw):
    N = draw(st.integers(1, 4))
    cover = Cover(N, *(draw(st.integers(0, 2)) for _ in range(3)))
    return draw(cover_elements(cover)), draw(cover_elements(cover))


@prop(cover_pairs())
def prop_leibniz_mixed_partials(pair):
    e1, e2 = pair
    lhs = cover_d_dr(e1 * e2)
    rhs = cover_d_dr(e1) * e2 + e1 * cover_d_dr(e2)
    assert cover_is_zero(lhs - rhs)
    lhs = cover_d_dlambda(e1 * e2)
    rhs = cover_d_dlambda(e1) * e2 + e1 * cover_d_dlambda(e2)
    assert cover_is_zero(lhs - rhs)
    assert cover_is_zero(cover_d_dlambda(cover_d_dr(e1)) - cover_d_dr(cover_d_dlambda(e1)))


@prop(st.lists(st.integers(-4, 4), min_size=1, max_size=5),
       st.lists(st.integers(-4, 4), min_size=1, max_size=5))
def prop_squarefree_recombines(p_coeffs, q_coeffs):
    p, q = UniPoly(p_coeffs), UniPoly(q_coeffs)
    assume(not p.is_zero() and not q.is_zero())
    pq = p * q
    parts = squarefree_decompose(pq)
    back = UniPoly([pq.lc])
    for f, m in parts:
        assert f.lc == 1
        back = back * f ** m
    assert back == pq
    mults = [m for _, m in parts]
    assert mults == sorted(set(mults))


ALL_PROPERTIES = {
    "euler": prop_euler_24,
    "fuchs": prop_fuchs_relation,
    "snf": prop_snf_discriminant,
    "hyperelliptic": prop_hyperelliptic_genus,
    "leibniz": prop_leibniz_mixed_partials,
}
