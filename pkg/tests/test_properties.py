"""Randomised algebraic laws, checked with exact equality."""
from hypothesis import given, strategies as st

from ainfty.cyclic import CyclicAction, project_invariant, is_invariant
from ainfty.fdalg import builtin, eigen_split, idempotent_check
from ainfty.koszul import folded_complex
from ainfty.mcgauge import (MCPair, ThreeForm, VectorField, apply_threeform,
                            exp_vector_field, mc_check)
from ainfty.polyvec import Polyvector, contract_dW, schouten, wedge
from ainfty.series import substitute

from strategies import COEFFS, context, form_degree_of, forms, series

CTX = context(3, 6)


def _sign(e):
    return -1 if e % 2 else 1


homogeneous = st.integers(0, 3).flatmap(lambda k: forms(CTX, k, max_terms=3))


@given(homogeneous, homogeneous)
def test_schouten_graded_antisymmetry(a, b):
    k, l = form_degree_of(a), form_degree_of(b)
    lhs = schouten(a, b)
    rhs = schouten(b, a).scale(-_sign((k - 1) * (l - 1)))
    assert lhs == rhs


@given(homogeneous, homogeneous, homogeneous)
def test_schouten_graded_jacobi(a, b, c):
    ka, kb = form_degree_of(a) - 1, form_degree_of(b) - 1
    top = CTX.trunc - 2
    lhs = schouten(a, schouten(b, c))
    rhs = schouten(schouten(a, b), c) + schouten(b, schouten(a, c)).scale(_sign(ka * kb))
    assert lhs.truncate(top) == rhs.truncate(top)


@given(homogeneous, homogeneous, homogeneous)
def test_schouten_leibniz_over_wedge(a, b, c):
    ka, lb = form_degree_of(a) - 1, form_degree_of(b)
    top = CTX.trunc - 1
    lhs = schouten(a, wedge(b, c))
    rhs = wedge(schouten(a, b), c) + wedge(b, schouten(a, c)).scale(_sign(ka * lb))
    assert lhs.truncate(top) == rhs.truncate(top)


@given(st.integers(1, 3).flatmap(lambda k: forms(CTX, k)), series(CTX, min_order=2))
def test_contract_dW_squares_to_zero(omega, W):
    twice = contract_dW(contract_dW(omega, W), W)
    assert twice.truncate(CTX.trunc - 2) == Polyvector.zero(CTX)


PAIR_CTX = context(3, 5)


@st.composite
def mc_pairs(draw):
    """Valid pairs: (W, 0) moved by a random 3-form and a random vector field."""
    W = draw(series(PAIR_CTX, min_order=2, max_terms=4))
    g3 = Polyvector(PAIR_CTX, {(0, 1, 2): draw(series(PAIR_CTX, min_order=2, max_terms=2))})
    p = apply_threeform(MCPair(W), ThreeForm(g3))
    if draw(st.booleans()):
        fld = draw(forms(PAIR_CTX, 1, min_order=2, max_terms=2))
        p = VectorField(fld).act(p)
        p = MCPair(p.W.truncate(PAIR_CTX.trunc - 1), p.eta.truncate(PAIR_CTX.trunc - 1))
    return p


@given(mc_pairs())
def test_folded_differential_squares_to_zero(p):
    assert mc_check(p).ok
    folded_complex(p)  # raises DifferentialNotSquareZero otherwise


SUB_CTX = context(3, 5)


@st.composite
def substitutions(draw):
    return [draw(series(SUB_CTX, min_order=1, max_terms=3)) for _ in range(3)]


@given(series(SUB_CTX), series(SUB_CTX), substitutions())
def test_substitute_is_a_ring_morphism(f, g, phi):
    assert substitute(f * g, phi) == substitute(f, phi) * substitute(g, phi)
    assert substitute(f + g, phi) == substitute(f, phi) + substitute(g, phi)
    assert substitute(SUB_CTX.one(), phi) == SUB_CTX.one()


@given(series(CTX, max_terms=5), forms(CTX, 1, min_order=2, max_terms=2))
def test_exp_vector_field_inverse(W, fld):
    there = exp_vector_field(W, VectorField(fld))
    back = exp_vector_field(there, VectorField(fld.scale(-1)))
    assert back == W


ACTION = CyclicAction.for_genus(2)


@given(st.integers(0, 3).flatmap(lambda k: forms(CTX, k, max_terms=5)))
def test_project_invariant_idempotent(x):
    once = project_invariant(x, ACTION)
    assert project_invariant(once, ACTION) == once
    assert is_invariant(once, ACTION)
    rest = x - once
    assert project_invariant(rest, ACTION) == Polyvector.zero(CTX)


ALGEBRAS = [builtin("qh_moduli_sigma2"), builtin("qh_intersection", 2),
            builtin("qh_quadric", 3), builtin("qh_quadric", 4), builtin("exterior", 2),
            builtin("clifford", 2)]


@st.composite
def algebra_elements(draw):
    A = draw(st.sampled_from(ALGEBRAS))
    even = [i for i, d in enumerate(A.degrees) if d == 0]
    chosen = draw(st.lists(st.sampled_from(even), min_size=1, max_size=3, unique=True))
    return A, {i: draw(COEFFS) for i in chosen}


@given(algebra_elements())
def test_eigensplit_idempotent_laws(Aa):
    A, a = Aa
    sp = eigen_split(A, a)
    total = {}
    for b in sp.blocks:
        assert idempotent_check(A, b.idempotent)
        total = A.add(total, b.idempotent)
        for c in sp.blocks:
            if c is not b:
                assert not A.mul(b.idempotent, c.idempotent)
    assert A.equal(total, A.one())
    assert sum(b.dim for b in sp.blocks) == A.dim
    for b in sp.blocks:
        assert A.equal(A.mul(a, b.idempotent), A.mul(b.idempotent, a))
        for v in b.basis:
            assert A.equal(A.mul(b.idempotent, v), v)
