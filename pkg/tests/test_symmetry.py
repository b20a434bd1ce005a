from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lgmirror.errors import DegenerateWeights, LengthMismatch, NotInGroup
from lgmirror.qpoly import (
    direct_sum,
    exponent_matrix,
    fermat_potential,
    loop_potential,
    parse_potential,
    weights_of,
)
from lgmirror.symmetry import (
    IdentityMarker,
    LoopForm,
    PhaseVector,
    fixed_locus,
    grading_element_J,
    group_op,
    inverse,
    is_symmetry,
    loop_forms,
    loop_generators,
    orbit,
    symmetry_group,
    unique_loop_form,
)

from helpers import LOOPS
from oracles import brute_group

F = Fraction
PV = PhaseVector


def test_phase_vectors_are_reduced_mod_one():
    assert PV((F(-1, 5), F(7, 5))).phases == (F(4, 5), F(2, 5))


def test_loop23_group_is_cyclic_of_order_5():
    G = symmetry_group(loop_potential(2, 3))
    assert G.order == 5
    assert len(orbit(loop_generators(2, 3)[0])) == 5


def test_fermat_group():
    G = symmetry_group(fermat_potential(3))
    assert G.order == 3 and G.generators == (PV((F(1, 3),)),)


def test_sum_group_is_product():
    W = direct_sum(loop_potential(2, 2), fermat_potential(3))
    G = symmetry_group(W)
    assert G.order == 9
    assert set(G.elements) == {PV(a.phases + b.phases)
                               for a in symmetry_group(loop_potential(2, 2)).elements
                               for b in symmetry_group(fermat_potential(3)).elements}


def test_singular_exponent_matrix():
    with pytest.raises(DegenerateWeights):
        symmetry_group(parse_potential("x1^2*x2^2 + x1*x2"))


@pytest.mark.parametrize("a1, a2, g1, g2", [
    (2, 3, (F(4, 5), F(2, 5)), (F(3, 5), F(4, 5))),
    (2, 2, (F(2, 3), F(2, 3)), (F(2, 3), F(2, 3))),
])
def test_loop_generators(a1, a2, g1, g2):
    assert loop_generators(a1, a2) == (PV(g1), PV(g2))


def test_grading_element():
    assert grading_element_J(weights_of(loop_potential(2, 3))) == PV((F(2, 5), F(1, 5)))
    assert grading_element_J(weights_of(fermat_potential(3))) == PV((F(1, 3),))


def test_fixed_loci():
    assert fixed_locus(PV((0, 0))) == {0, 1}
    assert fixed_locus(grading_element_J((F(2, 5), F(1, 5)))) == frozenset()
    assert fixed_locus(PV((0, F(1, 3), 0))) == {0, 2}


def test_group_law_examples():
    g = PV((F(1, 5), F(3, 5)))
    assert group_op(g, PV((0, 0))) == g
    J = grading_element_J((F(1, 3), F(1, 3)))
    assert J + J == loop_generators(2, 2)[0]
    g1, g2 = loop_generators(2, 3)
    assert -3 * g1 == g2
    with pytest.raises(LengthMismatch):
        group_op(g, PV((0,)))


@pytest.mark.parametrize("a1, a2", LOOPS)
def test_loop_group_structure(a1, a2):
    W = loop_potential(a1, a2)
    G = symmetry_group(W)
    n = a1 * a2 - 1
    assert G.order == n
    assert [tuple(g.phases) for g in G.elements] == brute_group(exponent_matrix(W))
    g1, g2 = loop_generators(a1, a2)
    assert set(orbit(g1)) == set(G.elements) == set(orbit(g2))
    assert grading_element_J(weights_of(W)) in G
    # J g1^(a2-1) = J g2^(a1-1) = identity, and g2 = g1^(-a2)
    J = grading_element_J(weights_of(W))
    assert (J + (a2 - 1) * g1).is_identity and (J + (a1 - 1) * g2).is_identity
    assert -a2 * g1 == g2
    for g in G.elements:
        assert is_symmetry(W, g)
        assert (g + inverse(g)).is_identity
        assert fixed_locus(g) == fixed_locus(inverse(g))
        assert fixed_locus(g) == (frozenset({0, 1}) if g.is_identity else frozenset())


@pytest.mark.parametrize("a1, a2", LOOPS)
def test_unique_loop_form_is_a_bijection(a1, a2):
    G = symmetry_group(loop_potential(a1, a2))
    hits = {}
    for form in loop_forms(a1, a2):
        hits.setdefault(form.element(a1, a2), []).append(form)
    assert set(hits) == set(G.elements)
    assert hits[G.identity] == [LoopForm(0, a1 - 1), LoopForm(a2 - 1, 0)]
    for g, forms in hits.items():
        if g.is_identity:
            assert isinstance(unique_loop_form(g, a1, a2), IdentityMarker)
        else:
            assert forms == [unique_loop_form(g, a1, a2)]


def test_unique_loop_form_examples():
    J = grading_element_J((F(2, 5), F(1, 5)))
    assert unique_loop_form(J, 2, 3) == LoopForm(0, 0)
    marker = unique_loop_form(PV((0, 0)), 2, 3)
    assert set(marker.forms) == {LoopForm(2, 0), LoopForm(0, 1)}
    with pytest.raises(NotInGroup):
        unique_loop_form(PV((F(1, 7), 0)), 2, 3)


@given(st.sampled_from(LOOPS), st.integers(-60, 60), st.integers(-60, 60))
def test_group_closure_property(pair, i, j):
    a1, a2 = pair
    g1, g2 = loop_generators(a1, a2)
    W = loop_potential(a1, a2)
    g = i * g1 + j * g2
    assert is_symmetry(W, g)
    assert g in symmetry_group(W)
