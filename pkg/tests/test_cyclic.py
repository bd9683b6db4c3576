"""Weights, Reynolds projection and the semidirect product."""
from itertools import product

import pytest
from hypothesis import given, strategies as st

from ainfty.cyclic import (CyclicAction, CyclotomicElement, build_semidirect,
                           invariant_monomials_up_to, is_invariant, monomial_weight,
                           project_invariant)
from ainfty.errors import ValidationError
from ainfty.fdalg import exterior

from strategies import context, series

G2 = CyclicAction.for_genus(2)
CTX = context(3, 8)


def test_canonical_action():
    assert G2.order == 5 and G2.weights == (1, 1, 3)
    assert CyclicAction.for_genus(3).weights == (1, 1, 5)


def test_weights_validated():
    with pytest.raises(ValidationError):
        CyclicAction(5, (1, 1, 5))
    with pytest.raises(ValidationError):
        CyclicAction(0, ())


@pytest.mark.parametrize("mono,form,w", [
    ((1, 1, 1), (), 0), ((5, 0, 0), (), 0), ((2, 1, 0), (), 3), ((0, 0, 0), (2,), 2),
    ((1, 0, 0), (0,), 0),
])
def test_monomial_weight(mono, form, w):
    assert monomial_weight(mono, G2, form) == w


def test_invariant_monomials_brute_force():
    got = invariant_monomials_up_to(5, G2)
    brute = sorted((m for m in product(range(6), repeat=3)
                    if 1 <= sum(m) <= 5 and (m[0] + m[1] + 3 * m[2]) % 5 == 0),
                   key=lambda m: (sum(m), tuple(-a for a in m)))
    assert set(got) == set(brute)
    for m in [(1, 1, 1), (5, 0, 0), (0, 5, 0), (0, 0, 5), (4, 1, 0)]:
        assert m in got
    assert [sum(m) for m in got] == sorted(sum(m) for m in got)
    assert invariant_monomials_up_to(2, G2) == []
    assert invariant_monomials_up_to(2, CyclicAction.trivial(1)) == [(1,), (2,)]


def test_projection_examples():
    v1, v2, v3 = CTX.gens()
    Q = -(v1 * v2 * v3) + v1 ** 5 + v2 ** 5 + v3 ** 5
    assert project_invariant(Q, G2) == Q
    assert project_invariant(v1 * v1 * v2, G2).is_zero()


@given(series(CTX, max_terms=5), series(CTX, max_terms=5))
def test_projection_is_multiplicative_on_invariants(f, g):
    a, b = project_invariant(f, G2), project_invariant(g, G2)
    assert is_invariant(a * b, G2)


@given(st.tuples(*[st.integers(0, 6)] * 3), st.tuples(*[st.integers(0, 6)] * 3))
def test_weight_additive(m1, m2):
    s = tuple(a + b for a, b in zip(m1, m2))
    assert monomial_weight(s, G2) == (monomial_weight(m1, G2) + monomial_weight(m2, G2)) % 5


def test_semidirect_genus_two():
    A = build_semidirect(3, G2)
    assert A.dim == 40
    assert A.associativity_failure() is None
    assert A.is_unit(A.unit)


def test_semidirect_trivial_group_is_exterior():
    A = build_semidirect(2, CyclicAction.trivial(2))
    E = exterior(2)
    assert A.dim == E.dim == 4
    # e1 e2 = -e2 e1 in both
    x, y = A.lookup("e{1}"), A.lookup("e{2}")
    assert A.equal(A.mul(x, y), A.scale(A.mul(y, x), -1))


def test_semidirect_twist():
    A = build_semidirect(1, CyclicAction(3, (1,)))
    xi = A.lookup("g0*e{1}")
    g = A.lookup("g1*1")
    # (xi)(g) = zeta^(-1 * wt(xi)) g xi with wt(xi) = -1
    got = A.mul(xi, g)
    assert list(got.values()) == [CyclotomicElement(3, {1: 1})]
    assert A.mul(g, xi) == {A.index("g1*e{1}"): CyclotomicElement(3, {0: 1})}


def test_cyclotomic_ring():
    z = CyclotomicElement.root(5, 1)
    one = CyclotomicElement(5, {0: 1})
    p = one
    for _ in range(5):
        p = p * z
    assert p == 1
    assert (z + 1) * (z - 1) == z * z - 1
