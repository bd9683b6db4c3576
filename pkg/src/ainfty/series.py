"""Sparse multivariate power series over Q or Q(i), truncated at total degree D.

A series is an immutable map from exponent tuples to nonzero scalars.  All
terms of total degree above the context's truncation order are discarded, so
arithmetic is exact in the quotient ring K[v]/m^(D+1).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Tuple

from .errors import ContextMismatch, OrderViolation
from .scalars import Q, QI, FIELDS, coerce, render_scalar

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class SeriesContext:
    nvars: int
    trunc: int
    field: str = Q
    names: Tuple[str, ...] = dc_field(default=())

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("need at least one variable")
        if self.trunc < 1:
            raise ValueError("truncation order must be positive")
        if self.field not in FIELDS:
            raise ValueError("unknown field %r" % (self.field,))
        if not self.names:
            object.__setattr__(self, "names",
                               tuple("v%d" % (i + 1) for i in range(self.nvars)))
        elif len(self.names) != self.nvars:
            raise ValueError("need one name per variable")

    def with_trunc(self, trunc):
        return SeriesContext(self.nvars, trunc, self.field, self.names)

    def with_field(self, field):
        return SeriesContext(self.nvars, self.trunc, field, self.names)

    def scalar(self, x):
        return coerce(x, self.field)

    # constructors -------------------------------------------------------
    def zero(self):
        return TruncatedSeries(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        return TruncatedSeries(self, {(0,) * self.nvars: c})

    def var(self, i):
        """The coordinate function v_(i+1); ``i`` is zero-based."""
        e = [0] * self.nvars
        e[i] = 1
        return TruncatedSeries(self, {tuple(e): 1})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1):
        return TruncatedSeries(self, {tuple(exps): coeff})


def degree(m: Monomial) -> int:
    return sum(m)


def grlex_key(m: Monomial):
    """Graded-lex: lower degree first, then larger leading exponents first."""
    return (sum(m), tuple(-a for a in m))


def grevlex_key(m: Monomial):
    """Graded reverse-lex: lower degree first, ties by smaller trailing exponents."""
    return (sum(m), tuple(m[::-1]))


def monomials_of_degree(n, d):
    """All exponent vectors in ``n`` variables of total degree ``d`` (grlex order)."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grlex_key)
    return out


def monomials_up_to(n, d, start=0):
    out = []
    for k in range(start, d + 1):
        out.extend(monomials_of_degree(n, k))
    return out


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class TruncatedSeries:
    """Element of K[[v_1..v_n]] modulo terms of total degree > D."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: SeriesContext, terms: Dict[Monomial, object], check=True):
        self.ctx = ctx
        if check:
            clean = {}
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != ctx.nvars or any(a < 0 for a in m):
                    raise ValueError("bad exponent vector %r" % (m,))
                if sum(m) > ctx.trunc:
                    raise OrderViolation(
                        "monomial of degree %d exceeds truncation %d" % (sum(m), ctx.trunc))
                c = ctx.scalar(c)
                if c:
                    clean[m] = c
            terms = clean
        self._terms = terms
        self._hash = None

    # -- basic access ------------------------------------------------------
    @property
    def terms(self):
        return self._terms

    def items(self):
        """Terms in canonical graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]))

    def coeff(self, m):
        return self._terms.get(tuple(m), self.ctx.scalar(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def order(self):
        """Lowest total degree present; ``None`` stands for infinity."""
        if not self._terms:
            return None
        return min(sum(m) for m in self._terms)

    def max_degree(self):
        if not self._terms:
            return None
        return max(sum(m) for m in self._terms)

    def homogeneous_part(self, d):
        return TruncatedSeries(self.ctx, {m: c for m, c in self._terms.items()
                                          if sum(m) == d}, check=False)

    def truncate(self, d):
        """Drop all terms of degree > d (context unchanged)."""
        return TruncatedSeries(self.ctx, {m: c for m, c in self._terms.items()
                                          if sum(m) <= d}, check=False)

    def above(self, d):
        """Keep only terms of degree >= d."""
        return TruncatedSeries(self.ctx, {m: c for m, c in self._terms.items()
                                          if sum(m) >= d}, check=False)

    def recontext(self, ctx):
        """Move to another context with the same variables, truncating if needed."""
        if ctx.nvars != self.ctx.nvars:
            raise ContextMismatch("variable count differs")
        return TruncatedSeries(ctx, {m: ctx.scalar(c) for m, c in self._terms.items()
                                     if sum(m) <= ctx.trunc}, check=False)

    # -- arithmetic --------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            return False
        if other.ctx != self.ctx:
            raise ContextMismatch("series live in different contexts")
        return True

    def __add__(self, other):
        if not self._check(other):
            return self + self.ctx.const(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return TruncatedSeries(self.ctx, out, check=False)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.ctx, {m: -c for m, c in self._terms.items()}, check=False)

    def __sub__(self, other):
        if not self._check(other):
            return self + self.ctx.const(-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.ctx.scalar(c)
        if not c:
            return self.ctx.zero()
        return TruncatedSeries(self.ctx, {m: c * x for m, x in self._terms.items()}, check=False)

    def __mul__(self, other):
        if not self._check(other):
            return self.scale(other)
        D = self.ctx.trunc
        by_deg = {}
        for m, c in other._terms.items():
            by_deg.setdefault(sum(m), []).append((m, c))
        degs = sorted(by_deg)
        out = {}
        for m1, c1 in self._terms.items():
            d1 = sum(m1)
            for d2 in degs:
                if d1 + d2 > D:
                    break
                for m2, c2 in by_deg[d2]:
                    m = tuple(x + y for x, y in zip(m1, m2))
                    s = out.get(m)
                    out[m] = c1 * c2 if s is None else s + c1 * c2
        return TruncatedSeries(self.ctx, {m: c for m, c in out.items() if c}, check=False)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = self.ctx.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.ctx == other.ctx and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    def partial(self, i):
        """Formal derivative with respect to v_(i+1) (zero-based index)."""
        out = {}
        for m, c in self._terms.items():
            a = m[i]
            if a:
                e = list(m)
                e[i] = a - 1
                out[tuple(e)] = c * a
        return TruncatedSeries(self.ctx, out, check=False)

    def map_coefficients(self, fn):
        return TruncatedSeries(self.ctx, {m: fn(m, c) for m, c in self._terms.items()})

    def __repr__(self):
        return "TruncatedSeries(%s)" % render_series(self)

    def __str__(self):
        return render_series(self)


def render_monomial(m, names):
    parts = []
    for a, name in zip(m, names):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append("%s^%d" % (name, a))
    return "*".join(parts)


def render_series(f: TruncatedSeries, names=None):
    """Canonical text in graded-lex order, e.g. ``-v1*v2*v3 + v1^5``."""
    names = names or f.ctx.names
    if not f.terms:
        return "0"
    pieces = []
    for m, c in f.items():
        mono = render_monomial(m, names)
        cs = render_scalar(c)
        negative = cs.startswith("-")
        if negative:
            cs = cs[1:]
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = "%s*%s" % (cs, mono)
        if not pieces:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append(("- " if negative else "+ ") + body)
    return " ".join(pieces)


def substitute(f: TruncatedSeries, phi):
    """Evaluate f(phi_1, ..., phi_n) in K[v]/m^(D+1).

    Every ``phi_i`` must have order >= 1 so the composite is well defined at
    truncation.  Evaluation is nested Horner in the last variable, which keeps
    the number of full series products proportional to the number of distinct
    leading exponent prefixes of ``f``.
    """
    ctx = f.ctx
    phi = list(phi)
    if len(phi) != ctx.nvars:
        raise ValueError("need one image per variable")
    for p in phi:
        if p.ctx != ctx:
            raise ContextMismatch("substitution images live in a different context")
        if p.coeff((0,) * ctx.nvars):
            raise OrderViolation("substitution image has a constant term")
    if not f.terms:
        return ctx.zero()
    D = ctx.trunc
    maxexp = [0] * ctx.nvars
    for m in f.terms:
        for i, a in enumerate(m):
            maxexp[i] = max(maxexp[i], a)
    powers = []
    for i, p in enumerate(phi):
        table = [ctx.one()]
        for _ in range(maxexp[i]):
            table.append(table[-1] * p)
        powers.append(table)

    def rec(terms, var):
        # terms: list of (monomial, coeff) sharing exponents in variables < var
        if var == ctx.nvars:
            total = ctx.scalar(0)
            for _, c in terms:
                total = total + c
            return ctx.const(total)
        groups = {}
        for m, c in terms:
            groups.setdefault(m[var], []).append((m, c))
        acc = ctx.zero()
        for a in sorted(groups):
            inner = rec(groups[a], var + 1)
            if a:
                pw = powers[var][a]
                if pw.order() is None or pw.order() > D:
                    continue
                acc = acc + inner * pw
            else:
                acc = acc + inner
        return acc

    return rec(list(f.terms.items()), 0)


def linear_part_matrix(phi):
    """Matrix M with phi_i = sum_j M[i][j] v_j + O(2)."""
    n = len(phi)
    M = []
    for p in phi:
        row = []
        for j in range(n):
            e = [0] * n
            e[j] = 1
            row.append(p.coeff(tuple(e)))
        M.append(row)
    return M


def invert_matrix(M):
    """Exact inverse by Gauss-Jordan; raises ValueError if singular."""
    n = len(M)

    def exact(x):
        return x if hasattr(x, "im") else Fraction(x)

    A = [[exact(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def linear_substitution(ctx, M):
    """Images v_i -> sum_j M[i][j] v_j as a list of series."""
    return [sum((ctx.var(j).scale(M[i][j]) for j in range(ctx.nvars) if M[i][j]), ctx.zero())
            for i in range(ctx.nvars)]


def inverse_substitution(phi):
    """Formal inverse psi with phi(psi(v)) = v modulo m^(D+1).

    Fixed-point iteration psi <- A^{-1}(v - h(psi)), where phi = A v + h and h
    is the nonlinear part; each pass fixes one more degree.
    """
    ctx = phi[0].ctx
    n = ctx.nvars
    A = linear_part_matrix(phi)
    Ainv = invert_matrix(A)
    gens = ctx.gens()
    nonlin = [p.above(2) for p in phi]
    psi = [sum((gens[j].scale(Ainv[i][j]) for j in range(n) if Ainv[i][j]), ctx.zero())
           for i in range(n)]
    for _ in range(ctx.trunc):
        h = [substitute(q, psi) for q in nonlin]
        rhs = [gens[i] - h[i] for i in range(n)]
        new = [sum((rhs[j].scale(Ainv[i][j]) for j in range(n) if Ainv[i][j]), ctx.zero())
               for i in range(n)]
        if new == psi:
            break
        psi = new
    return psi


def compose_substitutions(phi, psi):
    """The substitution v -> phi(psi(v)): apply phi first, then psi."""
    return [substitute(p, psi) for p in phi]
