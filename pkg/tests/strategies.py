"""Hypothesis strategies for sparse exact objects."""
from fractions import Fraction

from hypothesis import strategies as st

from ainfty.polyvec import Polyvector
from ainfty.series import SeriesContext, TruncatedSeries, monomials_up_to

COEFFS = st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
                          Fraction(1, 2), Fraction(-1, 2), Fraction(3), Fraction(-5, 3)])


def context(nvars, trunc):
    return SeriesContext(nvars, trunc, "Q", tuple("v%d" % (i + 1) for i in range(nvars)))


@st.composite
def series(draw, ctx, min_order=0, max_terms=4, max_degree=None):
    top = ctx.trunc if max_degree is None else max_degree
    monos = [m for m in monomials_up_to(ctx.nvars, top) if sum(m) >= min_order]
    chosen = draw(st.lists(st.sampled_from(monos), max_size=max_terms, unique=True))
    return TruncatedSeries(ctx, {m: draw(COEFFS) for m in chosen})


@st.composite
def forms(draw, ctx, degree, min_order=0, max_terms=3):
    """Homogeneous polyvector of the given form degree."""
    from itertools import combinations
    idx = list(combinations(range(ctx.nvars), degree))
    chosen = draw(st.lists(st.sampled_from(idx), min_size=1, max_size=min(2, len(idx)),
                           unique=True))
    return Polyvector(ctx, {I: draw(series(ctx, min_order, max_terms)) for I in chosen})


def form_degree_of(pv):
    ds = pv.form_degrees()
    return ds[0] if ds else 0
