from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
import properties
from order4cy.errors import CapacityError, DomainError
from order4cy.lattice import (
    IntegralLattice,
    direct_sum,
    disc_forms_opposite,
    discriminant_form,
    forms_isomorphic,
    k3_complement_compatible,
    named_lattice,
    smith_normal_form,
    two_elementary_invariants,
)

NAMED = ["U", "U(2)", "<2>", "<-2>", "A1", "A2", "D4", "E7", "E8", "A1^2", "U(2)+<2>+<-2>"]


def test_snf_matches_sympy():
    m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    D, _, _ = smith_normal_form(m)
    assert [abs(D[i][i]) for i in range(3)] == oracles.smith_invariants(m)


@pytest.mark.parametrize("name,det", [("E8", 1), ("E7", -2), ("D4", 4), ("A2", 3), ("U(2)", -4)])
def test_named_determinants(name, det):
    L = named_lattice(name)
    assert L.det() == det == oracles.integer_det(L.gram)


def test_discriminant_forms_of_small_lattices():
    assert discriminant_form("U(2)").to_json() == {
        "invariantFactors": [2, 2], "q": ["0", "0"], "b": [["0", "1/2"], ["1/2", "0"]], "order": 4,
    }
    f = discriminant_form("<2>")
    assert f.invariant_factors == (2,) and f.q_values == (Fraction(1, 2),)
    assert discriminant_form("<-2>").q_values == (Fraction(3, 2),)
    assert discriminant_form("E8").order == 1


def test_odd_or_degenerate_lattices_rejected():
    with pytest.raises(DomainError):
        discriminant_form(IntegralLattice([[1]]))
    with pytest.raises(DomainError):
        discriminant_form(IntegralLattice([[2, 2], [2, 2]]))
    with pytest.raises(DomainError):
        IntegralLattice([[2, 1], [0, 2]])


@pytest.mark.parametrize("a", NAMED)
@pytest.mark.parametrize("b", ["U(2)", "<2>", "A2", "E7"])
def test_discriminant_of_sum_is_sum(a, b):
    lhs = discriminant_form(direct_sum(named_lattice(a), named_lattice(b)))
    rhs = discriminant_form(a) + discriminant_form(b)
    assert forms_isomorphic(lhs, rhs)


@pytest.mark.parametrize("name", ["U", "E8"])
@pytest.mark.parametrize("n", [2, 3])
def test_rescaled_unimodular(name, n):
    L = named_lattice(name)
    f = discriminant_form(L.scaled(n))
    assert f.invariant_factors == (n,) * L.rank


@pytest.mark.parametrize("name", NAMED)
def test_order_is_determinant(name):
    L = named_lattice(name)
    assert discriminant_form(L).order == abs(L.det())
    plus, minus = L.signature()
    assert plus + minus == L.rank


def test_signatures():
    assert named_lattice("U").signature() == (1, 1)
    assert named_lattice("E8").signature() == (0, 8)
    assert named_lattice("U(2)^2+<-2>^2").signature() == (2, 4)


def test_opposite_forms():
    assert disc_forms_opposite("U(2)", "U(2)")
    assert disc_forms_opposite("<2>", "<-2>")
    assert not disc_forms_opposite("<2>", "<2>")


def test_compatibility_requires_matching_ranks():
    assert k3_complement_compatible("U+E8^2", "U^2")
    assert not k3_complement_compatible("U(2)+E7+A1^5", "U(2)^2")


def test_two_elementary_invariants():
    assert two_elementary_invariants("U(2)+<2>+<-2>") == (4, 4, 1)
    assert two_elementary_invariants("U(2)^2") == (4, 4, 0)
    with pytest.raises(DomainError):
        two_elementary_invariants("A2")


def test_search_bound():
    with pytest.raises(CapacityError):
        forms_isomorphic(discriminant_form("A1^6"), discriminant_form("A1^6"), bound=16)


def test_snf_property():
    properties.run(properties.prop_snf_discriminant, 100)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(NAMED), st.sampled_from(NAMED))
def test_sum_property_on_named(a, b):
    lhs = discriminant_form(direct_sum(named_lattice(a), named_lattice(b)))
    rhs = discriminant_form(a) + discriminant_form(b)
    assert lhs.order == rhs.order
    assert forms_isomorphic(lhs, rhs)
