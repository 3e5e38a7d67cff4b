from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import properties
from order4cy.algebra import UniPoly
from order4cy.curves import (
    I_UNIT,
    INFINITY,
    CyclicCover,
    MonomialAutomorphism,
    RootOfUnity,
    automorphism_eigenvalues,
    form_valuations,
    genus,
    holomorphic_form_basis,
    symbolic_polynomial,
    verify_quotient_map,
)
from order4cy.errors import DomainError
from order4cy.parse import parse_poly


def curve_c_f(roots):
    """z^2 = r f(r^2) with f having the given roots."""
    places = [UniPoly([0, 1])] + [UniPoly([-Fraction(k), 0, 1]) for k in roots]
    return CyclicCover(2, [(p, 1) for p in places])


@pytest.mark.parametrize("N,roots,expected", [
    (2, [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1)], 2),
    (4, [(0, 1), (1, 1), (2, 2), (3, 2), (4, 2)], 3),
    (4, [(0, 1), (1, 2), (2, 2)], 2),
    (3, [(0, 1), (1, 1), (2, 1)], 1),
])
def test_genus_examples(N, roots, expected):
    c = CyclicCover.from_roots(N, roots)
    assert genus(c) == expected
    assert len(holomorphic_form_basis(c)) == expected


def test_legendre_cover_basis():
    # z^4 = r (r-1)^2 (r-2)^2 : the forms are dr/z and (r-1)(r-2) dr/z^3
    c = CyclicCover.from_roots(4, [(0, 1), (1, 2), (2, 2)])
    forms = [f.describe(c) for f in holomorphic_form_basis(c)]
    assert forms == ["(1)*dr/z", "(r^2 - 3*r + 2)*dr/z^3"]


def test_basis_forms_are_holomorphic():
    c = CyclicCover.from_roots(4, [(0, 1), (1, 1), (2, 2), (3, 2), (4, 2)])
    for f in holomorphic_form_basis(c):
        assert all(v >= 0 for _, v in form_valuations(c, f))


def test_conjugate_branch_points_form_one_place():
    c = curve_c_f([1, 2, 3])
    assert genus(c) == 3
    assert c.m_infinity == 1


@pytest.mark.parametrize("g,dim_one", [(1, "i"), (3, "-i")])
def test_eigenspace_of_dimension_one(g, dim_one):
    c = curve_c_f(range(1, g + 1))
    m = MonomialAutomorphism(c, RootOfUnity(Fraction(1, 2)), I_UNIT)
    eig = Counter(str(e) for e in automorphism_eigenvalues(c, m, holomorphic_form_basis(c)))
    assert set(eig) <= {"i", "-i"}
    assert eig[dim_one] == 1


def test_genus_two_has_two_lines():
    c = curve_c_f([1, 2])
    m = MonomialAutomorphism(c, RootOfUnity(Fraction(1, 2)), I_UNIT)
    eig = Counter(str(e) for e in automorphism_eigenvalues(c, m, holomorphic_form_basis(c)))
    assert eig == {"i": 1, "-i": 1}


def test_incompatible_automorphism_rejected():
    c = curve_c_f([1, 2])
    with pytest.raises(DomainError):
        MonomialAutomorphism(c, RootOfUnity(Fraction(1, 2)), RootOfUnity(0))


def test_disconnected_cover_rejected():
    with pytest.raises(DomainError):
        genus(CyclicCover.from_roots(4, [(0, 2), (1, 2)]))


def test_inconsistent_infinity_rejected():
    with pytest.raises(DomainError):
        CyclicCover(4, [(UniPoly([0, 1]), 1), (INFINITY, 1)])


def test_hyperelliptic_property():
    properties.run(properties.prop_hyperelliptic_genus, 100)


@st.composite
def configurations(draw):
    N = draw(st.integers(2, 6))
    roots = draw(st.lists(st.integers(-9, 9), min_size=2, max_size=6, unique=True))
    mults = [draw(st.integers(1, N - 1)) for _ in roots]
    return N, list(zip(roots, mults))


def _connected(N, pairs):
    from math import gcd
    c = CyclicCover.from_roots(N, pairs)
    g = N
    for _, m in c.places():
        g = gcd(g, m)
    return g == 1


@settings(max_examples=100, deadline=None)
@given(configurations(), st.integers(-5, 5), st.randoms(use_true_random=False))
def test_genus_invariant_under_moebius(conf, shift, rnd):
    N, pairs = conf
    assume(_connected(N, pairs))
    g = genus(CyclicCover.from_roots(N, pairs))
    shuffled = list(pairs)
    rnd.shuffle(shuffled)
    assert genus(CyclicCover.from_roots(N, [(a + shift, m) for a, m in shuffled])) == g
    # r = a0 + 1/t sends a0 to infinity and infinity to t = 0
    (a0, _), rest = shuffled[0], shuffled[1:]
    m_inf = CyclicCover.from_roots(N, pairs).m_infinity
    moved = [(Fraction(1, a - a0), m) for a, m in rest]
    if m_inf:
        moved.append((0, m_inf))
    assert genus(CyclicCover.from_roots(N, moved)) == g


# --- quotient maps ---------------------------------------------------------

E_I = {"v^2": "u^3+u"}


def test_shioda_inose_quotient_map():
    rules = {"v1^2": "u1^3+u1", "v2^2": "u2^3+u2"}
    subst = {"x": "u2*v1^2*u1^2", "y": "v2*v1^3*u1^3", "t": "u1^2"}
    assert verify_quotient_map(rules, subst, "y^2-x^3-t^3*(t+1)^2*x")
    assert not verify_quotient_map(rules, subst, "y^2-x^3-t^3*(t+1)*x")


@pytest.mark.parametrize("g", [1, 2, 3])
def test_product_quotient_map(g):
    f = symbolic_polynomial("s", g)
    rules = dict(E_I, **{"z^2": parse_poly("r") * f.substitute({"s": parse_poly("r^2")})})
    target = parse_poly("y^2-x^3") - parse_poly("x*s") * f * f
    assert verify_quotient_map(rules, {"x": "u*z^2", "y": "v*z^3", "s": "r^2"}, target)
    # a wrong power of z breaks the identity
    assert not verify_quotient_map(rules, {"x": "u*z^2", "y": "v*z^2", "s": "r^2"}, target)


@pytest.mark.parametrize("g", [1, 2])
def test_cubed_quotient_map(g):
    f = symbolic_polynomial("s", g)
    rules = dict(E_I, **{"z^2": parse_poly("r") * f.substitute({"s": parse_poly("r^2")})})
    target = parse_poly("y^2-x^3") - parse_poly("x*s^3") * f * f
    assert verify_quotient_map(rules, {"x": "u*z^2*r^2", "y": "v*z^3*r^3", "s": "r^2"}, target)


def test_cyclic_rules_rejected():
    with pytest.raises(DomainError):
        verify_quotient_map({"v^2": "v^3+u"}, {}, "v")
