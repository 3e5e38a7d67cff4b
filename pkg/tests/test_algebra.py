from fractions import Fraction

import pytest

import oracles
import properties
from order4cy.algebra import (
    LAM,
    Cover,
    CoverElement,
    RatFunc,
    UniPoly,
    cover_d_dlambda,
    cover_d_dr,
    cover_is_zero,
    cover_monomial,
    poly_gcd,
    rational_roots,
    squarefree_decompose,
)
from order4cy.errors import DomainError

x = UniPoly([0, 1])


def test_squarefree_matches_sympy():
    p = x * (x - 1) ** 2 * (x - 2) ** 2
    ours = [(f.to_str("s"), m) for f, m in squarefree_decompose(p)]
    ref = oracles.squarefree_sympy("s*(s-1)**2*(s-2)**2")
    assert [m for _, m in ours] == [m for _, m in ref]
    assert ours[0][0] == "s"
    assert ours[1][0] == "s^2 - 3*s + 2"


def test_squarefree_keeps_irreducible_quadratics_whole():
    p = x ** 3 * (x * x + 1)
    assert squarefree_decompose(p) == [(x * x + 1, 1), (x, 3)]


def test_squarefree_of_zero_is_an_error():
    with pytest.raises(DomainError):
        squarefree_decompose(UniPoly())


def test_rational_roots():
    p = (x - Fraction(1, 2)) * (x + 3) * (x * x + 2)
    assert rational_roots(p) == [-3, Fraction(1, 2)]


def test_gcd_over_function_field():
    # polynomials in r with coefficients in Q(lambda)
    r_minus_lam = UniPoly([-LAM, RatFunc(UniPoly([1]))])
    r_minus_1 = UniPoly([RatFunc(UniPoly([-1])), RatFunc(UniPoly([1]))])
    g = poly_gcd(r_minus_lam * r_minus_1, r_minus_lam * r_minus_lam)
    assert g == r_minus_lam
    assert poly_gcd(r_minus_lam, r_minus_1).degree == 0


def test_ratfunc_normalizes_eagerly():
    f = RatFunc(x * x - 1, x - 1)
    assert f.num == x + 1 and f.den == UniPoly([1])
    g = RatFunc(UniPoly([2]), UniPoly([4, 2]))
    assert g.den.lc == 1


def test_ratfunc_derivative_is_reduced():
    f = RatFunc(UniPoly([1]), (x - 1) ** 3 * x)
    d = f.derivative()
    # (1/(x^4 - x^3...))' has denominator (x-1)^4 x^2
    assert d.den == ((x - 1) ** 4 * x ** 2).monic()
    assert d == RatFunc(-((x - 1) ** 3 * x).derivative(), ((x - 1) ** 3 * x) ** 2)


def test_z_power_identity_differentiates_to_zero():
    cover = Cover(4, 1, 2, 2)
    one = CoverElement(cover, 0, RatFunc(UniPoly([1])))
    zn = CoverElement(cover, -4, RatFunc(UniPoly([1])))  # z^N
    prod = zn * cover_monomial(cover, -1, -2, -2, 0)       # z^N / (r (r-1)^2 (r-lam)^2)
    assert cover_is_zero(prod - one)
    assert cover_is_zero(cover_d_dr(prod))
    assert cover_is_zero(cover_d_dlambda(prod))


def test_rescale_between_z_powers():
    cover = Cover(2, 1, 1, 1)
    e = cover_monomial(cover, 0, 0, 0, 1)
    assert e.rescale(3) == e
    with pytest.raises(DomainError):
        e.rescale(2)


def test_elements_on_different_covers_do_not_mix():
    e1 = cover_monomial(Cover(2, 1, 1, 1), 0, 0, 0, 1)
    e2 = cover_monomial(Cover(4, 1, 2, 2), 0, 0, 0, 1)
    with pytest.raises(DomainError):
        e1 + e2


def test_invalid_cover():
    with pytest.raises(DomainError):
        Cover(0, 1, 1, 1)


def test_squarefree_recombines_property():
    properties.run(properties.prop_squarefree_recombines, 100)


def test_leibniz_and_mixed_partials_property():
    properties.run(properties.prop_leibniz_mixed_partials, 25)
