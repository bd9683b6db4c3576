"""Diagonal cyclic group actions encoded by integer weights.

The generator of Z_n acts on v_i by zeta^(w_i), zeta a primitive n-th root
of unity, and on xi_i by zeta^(-w_i).  Roots of unity never appear as numbers:
everything reduces to residue arithmetic on weights.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import ValidationError
from .fdalg import FiniteDimAlgebra
from .polyvec import Polyvector
from .series import TruncatedSeries, monomials_up_to, grlex_key
from .scalars import render_scalar


class CyclicAction:
    """Z_n acting diagonally with weights ``w`` (one residue per variable)."""

    def __init__(self, order, weights):
        if int(order) != order or order < 1:
            raise ValidationError("group order must be a positive integer")
        self.order = int(order)
        ws = tuple(int(w) for w in weights)
        if any(w < 0 or w >= self.order for w in ws):
            raise ValidationError("weights must be residues in [0, %d)" % self.order)
        self.weights = ws

    @classmethod
    def for_genus(cls, g):
        """The action (xi, xi, xi^(2g-1)) of Z_(2g+1)."""
        return cls(2 * g + 1, (1, 1, 2 * g - 1))

    @classmethod
    def trivial(cls, nvars):
        return cls(1, (0,) * nvars)

    @property
    def nvars(self):
        return len(self.weights)

    def __eq__(self, other):
        return isinstance(other, CyclicAction) and \
            (self.order, self.weights) == (other.order, other.weights)

    def __hash__(self):
        return hash((self.order, self.weights))

    def __repr__(self):
        return "CyclicAction(%d, %r)" % (self.order, self.weights)

    def check_nvars(self, n):
        if n != self.nvars:
            raise ValidationError("action has %d weights but the context has %d variables"
                                  % (self.nvars, n))

    def fixed_directions(self, k):
        """Variables fixed by gamma^k."""
        return [i for i, w in enumerate(self.weights) if (k * w) % self.order == 0]


def monomial_weight(mono, action: CyclicAction, form=()):
    """Weight of v^mono * xi_form: sum a_i w_i - sum_{i in form} w_i mod n."""
    action.check_nvars(len(mono))
    w = action.weights
    s = sum(a * w[i] for i, a in enumerate(mono)) - sum(w[i] for i in form)
    return s % action.order


def is_invariant(x, action: CyclicAction):
    return project_invariant(x, action) == x


def project_invariant(x, action: CyclicAction):
    """Reynolds projection: keep the weight-0 terms of a series or polyvector."""
    if isinstance(x, TruncatedSeries):
        action.check_nvars(x.ctx.nvars)
        return TruncatedSeries(x.ctx, {m: c for m, c in x.terms.items()
                                       if monomial_weight(m, action) == 0}, check=False)
    if isinstance(x, Polyvector):
        action.check_nvars(x.ctx.nvars)
        comps = {}
        for I, f in x.components.items():
            comps[I] = TruncatedSeries(f.ctx, {m: c for m, c in f.terms.items()
                                               if monomial_weight(m, action, I) == 0},
                                       check=False)
        return Polyvector(x.ctx, comps)
    raise TypeError("expected a TruncatedSeries or a Polyvector")


def invariant_monomials_up_to(d, action: CyclicAction):
    """Weight-0 monomials of degree 1..d in graded-lex order."""
    if d < 1:
        raise ValidationError("degree bound must be at least 1")
    out = [m for m in monomials_up_to(action.nvars, d)
           if sum(m) >= 1 and monomial_weight(m, action) == 0]
    out.sort(key=grlex_key)
    return out


# ---------------------------------------------------------------------------
# semidirect product

class CyclotomicElement:
    """Element sum_r c_r zeta^r of the group ring Q[Z_n].

    Structure constants of the semidirect product are single terms
    (rational multiplier, residue); sums only arise while checking.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        clean = {}
        for r, c in (terms or {}).items():
            r %= n
            s = clean.get(r, 0) + Fraction(c)
            if s:
                clean[r] = s
            else:
                clean.pop(r, None)
        self.terms = clean

    @classmethod
    def root(cls, n, r, c=1):
        return cls(n, {r: c})

    def _lift(self, other):
        if isinstance(other, CyclotomicElement):
            if other.n != self.n:
                raise ValueError("different cyclic orders")
            return other
        return CyclotomicElement(self.n, {0: other})

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for r, c in other.terms.items():
            t[r] = t.get(r, 0) + c
        return CyclotomicElement(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.n, {r: -c for r, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t = {}
        for r, a in self.terms.items():
            for s, b in other.terms.items():
                k = (r + s) % self.n
                t[k] = t.get(k, 0) + a * b
        return CyclotomicElement(self.n, t)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicElement(self.n, {0: other})
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for r in sorted(self.terms):
            c = render_scalar(self.terms[r])
            parts.append(c if r == 0 else "%s*z^%d" % (c, r))
        return " + ".join(parts)


def build_semidirect(nvars, action: CyclicAction) -> FiniteDimAlgebra:
    """Lambda(V) x| Z_n with (g^a w)(g^b w') = g^(a+b) zeta^(-b wt(w)) w ^ w'."""
    action.check_nvars(nvars)
    n = action.order
    forms = [I for k in range(nvars + 1) for I in combinations(range(nvars), k)]
    idx = {}
    labels = []
    degrees = []
    for a in range(n):
        for I in forms:
            idx[(a, I)] = len(labels)
            fl = "1" if not I else "e{%s}" % ",".join(str(i + 1) for i in I)
            labels.append(fl if n == 1 else "g%d*%s" % (a, fl))
            degrees.append(len(I) % 2)
    wt = {I: (-sum(action.weights[i] for i in I)) % n for I in forms}
    table = {}
    for a in range(n):
        for I in forms:
            for b in range(n):
                for J in forms:
                    if set(I) & set(J):
                        continue
                    seq = I + J
                    inv = sum(1 for x in range(len(seq)) for y in range(x + 1, len(seq))
                              if seq[x] > seq[y])
                    K = tuple(sorted(seq))
                    c = CyclotomicElement(n, {(-b * wt[I]) % n: -1 if inv % 2 else 1})
                    table[(idx[(a, I)], idx[(b, J)])] = {idx[((a + b) % n, K)]: c}
    zero = CyclotomicElement(n)
    A = FiniteDimAlgebra(labels, degrees, table, unit={idx[(0, ())]: zero + 1},
                         zero=zero, name="semidirect(%d;%s)" % (n, ",".join(map(str, action.weights))))
    return A
