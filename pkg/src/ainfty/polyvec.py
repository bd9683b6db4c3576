"""Polyvector fields K[[v]] (x) Lambda(V): wedge product and Schouten bracket.

A :class:`Polyvector` maps strictly increasing index tuples ``I`` (naming
xi_I = xi_i1 ^ ... ^ xi_ik, zero-based indices) to truncated series.
"""
from __future__ import annotations

from itertools import combinations

from .errors import ContextMismatch
from .series import SeriesContext, TruncatedSeries, render_series


def sort_sign(seq):
    """(sign, sorted tuple) of a sequence of distinct indices; sign 0 on repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    # insertion sort counting transpositions; index lists are tiny
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


def wedge_index(I, J):
    return sort_sign(tuple(I) + tuple(J))


def all_form_indices(n, k=None):
    ks = range(n + 1) if k is None else [k]
    out = []
    for kk in ks:
        out.extend(combinations(range(n), kk))
    return out


class Polyvector:
    """Immutable sparse element of K[[v]] (x) Lambda(V)."""

    __slots__ = ("ctx", "_comps")

    def __init__(self, ctx: SeriesContext, comps=None):
        self.ctx = ctx
        clean = {}
        for I, f in (comps or {}).items():
            I = tuple(I)
            if list(I) != sorted(set(I)) or any(i < 0 or i >= ctx.nvars for i in I):
                raise ValueError("form index %r must be strictly increasing in range" % (I,))
            if f.ctx != ctx:
                raise ContextMismatch("component lives in a different context")
            if f:
                clean[I] = f
        self._comps = clean

    # constructors ----------------------------------------------------------
    @classmethod
    def function(cls, f: TruncatedSeries):
        return cls(f.ctx, {(): f})

    @classmethod
    def xi(cls, ctx, *indices, coeff=None):
        """The form coeff * xi_(indices) (zero-based); sorts with sign."""
        s, I = sort_sign(indices)
        if not s:
            return cls(ctx)
        f = coeff if coeff is not None else ctx.one()
        return cls(ctx, {I: f.scale(s)})

    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    # access ----------------------------------------------------------------
    @property
    def components(self):
        return self._comps

    def items(self):
        return sorted(self._comps.items(), key=lambda t: (len(t[0]), t[0]))

    def component(self, I):
        return self._comps.get(tuple(I), self.ctx.zero())

    def __bool__(self):
        return bool(self._comps)

    def form_degrees(self):
        return sorted({len(I) for I in self._comps})

    def is_homogeneous(self):
        return len(self.form_degrees()) <= 1

    def form_part(self, k):
        return Polyvector(self.ctx, {I: f for I, f in self._comps.items() if len(I) == k})

    def parity_part(self, p):
        return Polyvector(self.ctx, {I: f for I, f in self._comps.items() if len(I) % 2 == p})

    def order(self):
        orders = [f.order() for f in self._comps.values()]
        return min(orders) if orders else None

    def truncate(self, d):
        return Polyvector(self.ctx, {I: f.truncate(d) for I, f in self._comps.items()})

    def map_series(self, fn):
        return Polyvector(self.ctx, {I: fn(f) for I, f in self._comps.items()})

    def terms(self):
        """Flat (form index, monomial, coeff) triples."""
        for I, f in self._comps.items():
            for m, c in f.terms.items():
                yield I, m, c

    # arithmetic ------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Polyvector):
            raise TypeError("expected a Polyvector")
        if other.ctx != self.ctx:
            raise ContextMismatch("polyvectors live in different contexts")

    def __add__(self, other):
        self._check(other)
        out = dict(self._comps)
        for I, f in other._comps.items():
            out[I] = out[I] + f if I in out else f
        return Polyvector(self.ctx, out)

    def __neg__(self):
        return Polyvector(self.ctx, {I: -f for I, f in self._comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Polyvector(self.ctx, {I: f.scale(c) for I, f in self._comps.items()})

    def mul_series(self, g: TruncatedSeries):
        return Polyvector(self.ctx, {I: f * g for I, f in self._comps.items()})

    def __eq__(self, other):
        if isinstance(other, Polyvector):
            return self.ctx == other.ctx and self._comps == other._comps
        if other == 0:
            return not self._comps
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, frozenset(self._comps.items())))

    def __repr__(self):
        return "Polyvector(%s)" % render_polyvector(self)


def _accumulate(out, I, f):
    if I in out:
        out[I] = out[I] + f
    else:
        out[I] = f


def wedge(a: Polyvector, b: Polyvector) -> Polyvector:
    a._check(b)
    out = {}
    for I, f in a._comps.items():
        for J, g in b._comps.items():
            s, K = wedge_index(I, J)
            if s:
                _accumulate(out, K, (f * g).scale(s))
    return Polyvector(a.ctx, out)


def _bracket_terms(I, f, J, g):
    """Schouten bracket of f xi_I with g xi_J as a list of (form, series)."""
    k, l = len(I), len(J)
    out = []
    for q in range(1, k + 1):
        dg = g.partial(I[q - 1])
        if not dg:
            continue
        s, K = wedge_index(I[:q - 1] + I[q:], J)
        if not s:
            continue
        if (k - q - 1) % 2:
            s = -s
        out.append((K, (f * dg).scale(s)))
    for q in range(1, l + 1):
        df = f.partial(J[q - 1])
        if not df:
            continue
        s, K = wedge_index(J[:q - 1] + J[q:], I)
        if not s:
            continue
        if (l - q + (k - 1) * (l - 1)) % 2:
            s = -s
        out.append((K, (g * df).scale(s)))
    return out


def schouten(a: Polyvector, b: Polyvector) -> Polyvector:
    """Schouten bracket, bilinear extension of the two-sum contraction formula.

    One derivative is taken, so the result is exact through degree D-1.
    """
    a._check(b)
    out = {}
    for I, f in a._comps.items():
        for J, g in b._comps.items():
            for K, h in _bracket_terms(I, f, J, g):
                _accumulate(out, K, h)
    return Polyvector(a.ctx, out)


def contract_dW(omega: Polyvector, W: TruncatedSeries) -> Polyvector:
    """Interior contraction with dW, realised as [omega, W]."""
    if W.ctx != omega.ctx:
        raise ContextMismatch("W lives in a different context")
    return schouten(omega, Polyvector.function(W))


def render_form_index(I):
    return "e{%s}" % ",".join(str(i + 1) for i in I)


def render_polyvector(p: Polyvector):
    if not p:
        return "0"
    parts = []
    for I, f in p.items():
        if not I:
            parts.append("(%s)" % render_series(f))
        else:
            parts.append("(%s)*%s" % (render_series(f), render_form_index(I)))
    return " + ".join(parts)
