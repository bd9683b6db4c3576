"""Finite-dimensional Z2-graded algebras and generalised eigenspace splitting.

An algebra is a labelled basis with Z2 degrees and a sparse structure-constant
table ``table[(i, j)] = {k: c_ij^k}``.  Elements are sparse dicts
``{basis index: coefficient}``.  Coefficients are usually exact rationals; the
semidirect products built in :mod:`ainfty.cyclic` use group-ring coefficients,
which only need ring operations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from . import upoly
from .errors import BadParams, IncompleteRules, NotAssociative, ValidationError
from .linalg import Echelon, matrix_kernel, nullspace, columns_as_vectors
from .scalars import render_scalar


class FiniteDimAlgebra:
    """Unital associative algebra given by structure constants."""

    def __init__(self, labels, degrees, table, unit=None, c1=None, zero=Fraction(0),
                 name=None, check=True):
        self.labels = list(labels)
        self.degrees = [int(d) % 2 for d in degrees]
        if len(self.degrees) != len(self.labels):
            raise ValidationError("one Z2 degree per basis label is required")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("duplicate basis labels")
        self.zero = zero
        self.table = {}
        for (i, j), out in table.items():
            clean = {k: c for k, c in out.items() if c}
            if clean:
                self.table[(i, j)] = clean
        self.unit = dict(unit) if unit is not None else {0: zero + 1}
        self.c1 = dict(c1) if c1 is not None else None
        self.name = name
        self._index = {l: i for i, l in enumerate(self.labels)}
        # extra named elements that are not basis vectors (e.g. h = a + b)
        self.named = {}
        if check:
            self.check_degrees()
            bad = self.associativity_failure()
            if bad is not None:
                i, j, k = bad
                raise NotAssociative(
                    "(%s*%s)*%s != %s*(%s*%s)" % (self.labels[i], self.labels[j], self.labels[k],
                                                  self.labels[i], self.labels[j], self.labels[k]),
                    triple=tuple(self.labels[t] for t in bad))
            if not self.is_unit(self.unit):
                raise ValidationError("declared unit is not a two-sided unit")

    @property
    def dim(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError("unknown basis label %r" % (label,)) from None

    # element helpers -------------------------------------------------------
    def basis_vector(self, label_or_index, coeff=1):
        i = label_or_index if isinstance(label_or_index, int) else self.index(label_or_index)
        return {i: self.zero + coeff}

    def lookup(self, name):
        """Basis vector or named element called ``name``."""
        if name in self.named:
            return dict(self.named[name])
        return self.basis_vector(name)

    def element(self, coeffs):
        """Element from ``{label: coefficient}``."""
        out = {}
        for label, c in coeffs.items():
            i = self.index(label)
            out[i] = out.get(i, self.zero) + c
        return {i: c for i, c in out.items() if c}

    def one(self):
        return dict(self.unit)

    def add(self, x, y):
        out = dict(x)
        for k, c in y.items():
            s = out.get(k, self.zero) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def scale(self, x, c):
        return {k: a * c for k, a in x.items() if a * c}

    def sub(self, x, y):
        return self.add(x, {k: -c for k, c in y.items()})

    def mul(self, x, y):
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self.table.get((i, j))
                if not prod:
                    continue
                ab = a * b
                for k, c in prod.items():
                    s = out.get(k, self.zero) + ab * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def power(self, x, e):
        out = self.one()
        for _ in range(e):
            out = self.mul(out, x)
        return out

    def poly_eval(self, p, x):
        """Evaluate the univariate polynomial ``p`` (low degree first) at ``x``."""
        out = {}
        for c in reversed(p):
            out = self.add(self.mul(out, x), self.scale(self.one(), c))
        return out

    def equal(self, x, y):
        return not self.sub(x, y)

    def render(self, x):
        if not x:
            return "0"
        parts = []
        for k in sorted(x):
            c = _render_coeff(x[k])
            if c in ("1", "-1"):
                parts.append(c[:-1] + self.labels[k])
            else:
                parts.append("%s*%s" % (c, self.labels[k]))
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    # structural checks -----------------------------------------------------
    def check_degrees(self):
        for (i, j), out in self.table.items():
            for k in out:
                if self.degrees[k] != (self.degrees[i] + self.degrees[j]) % 2:
                    raise ValidationError(
                        "product %s*%s has a component on %s of the wrong Z2 degree"
                        % (self.labels[i], self.labels[j], self.labels[k]))

    def associativity_failure(self):
        """First basis triple (i, j, k) violating associativity, or None."""
        n = self.dim
        basis = [{i: self.zero + 1} for i in range(n)]
        prods = {}
        for i in range(n):
            for j in range(n):
                prods[(i, j)] = self.table.get((i, j), {})
        for i in range(n):
            for j in range(n):
                left = prods[(i, j)]
                for k in range(n):
                    lhs = self.mul(left, basis[k])
                    rhs = self.mul(basis[i], prods[(j, k)])
                    if not self.equal(lhs, rhs):
                        return (i, j, k)
        return None

    def is_unit(self, u):
        for i in range(self.dim):
            b = {i: self.zero + 1}
            if not self.equal(self.mul(u, b), b) or not self.equal(self.mul(b, u), b):
                return False
        return True

    def is_commutative(self):
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if not self.equal(self.table.get((i, j), {}), self.table.get((j, i), {})):
                    return False
        return True


def _render_coeff(c):
    if isinstance(c, Fraction) or hasattr(c, "im"):
        return render_scalar(c)
    return "(%s)" % c


# ---------------------------------------------------------------------------
# presentations

@dataclass
class RingPresentation:
    """Basis labels, Z2 degrees and product rules ``(a, b) -> {label: coeff}``.

    Missing products are filled in by graded commutativity when
    ``commutative`` is set; products with the unit label are implicit.
    """
    labels: List[str]
    degrees: List[int]
    rules: Dict[Tuple[str, str], Dict[str, Fraction]] = field(default_factory=dict)
    unit_label: str = "1"
    c1: Optional[Dict[str, Fraction]] = None
    commutative: bool = True
    name: Optional[str] = None


def from_presentation(p: RingPresentation) -> FiniteDimAlgebra:
    labels = list(p.labels)
    idx = {l: i for i, l in enumerate(labels)}
    if p.unit_label not in idx:
        raise ValidationError("the unit label %r is not in the basis" % p.unit_label)
    for (a, b), rhs in p.rules.items():
        for l in (a, b, *rhs):
            if l not in idx:
                raise ValidationError("rule %s*%s mentions unknown label %r" % (a, b, l))
    u = idx[p.unit_label]
    deg = [int(d) % 2 for d in p.degrees]
    table = {}
    missing = []
    for a in labels:
        for b in labels:
            i, j = idx[a], idx[b]
            if (a, b) in p.rules:
                rhs = p.rules[(a, b)]
                table[(i, j)] = {idx[l]: Fraction(c) if not hasattr(c, "im") else c
                                 for l, c in rhs.items()}
            elif i == u:
                table[(i, j)] = {j: Fraction(1)}
            elif j == u:
                table[(i, j)] = {i: Fraction(1)}
            elif p.commutative and (b, a) in p.rules:
                sign = -1 if deg[i] and deg[j] else 1
                table[(i, j)] = {idx[l]: sign * Fraction(c) for l, c in p.rules[(b, a)].items()}
            else:
                missing.append("%s*%s" % (a, b))
    if missing:
        raise IncompleteRules("no rule for products: %s" % ", ".join(missing[:8]))
    c1 = None
    if p.c1 is not None:
        c1 = {idx[l]: Fraction(c) for l, c in p.c1.items() if c}
    return FiniteDimAlgebra(labels, deg, table, unit={u: Fraction(1)}, c1=c1, name=p.name)


# ---------------------------------------------------------------------------
# built-in algebras

def _hpow_label(j):
    return "1" if j == 0 else ("h" if j == 1 else "h%d" % j)


def qh_intersection(g, literal=False):
    """QH* of the intersection of two quadrics of dimension 2g-1.

    Basis 1, h, ..., h^(2g-1), a1..a(2g).  Relations h^(2g) = 16 h^2, h*a = 0,
    a*b = d(a,b) (h^(2g-1)/4 - 4h) with d the standard symplectic pairing.  With
    ``literal=True`` the last relation uses 4 h^(2g-3) instead, which agrees at
    g = 2 and is not associative for g >= 3.
    """
    if g < 2:
        raise BadParams("genus must be at least 2")
    return _quadric_pencil(g, ["a%d" % (i + 1) for i in range(2 * g)], literal,
                           c1={"h": 2 * g - 2}, name="qh_intersection(%d)" % g)


def qh_moduli_sigma2():
    """QH* of the moduli space of stable bundles on a genus 2 surface."""
    return _quadric_pencil(2, ["m1", "m2", "m3", "m4"], False, c1={"h": 2},
                           name="qh_moduli_sigma2")


def _quadric_pencil(g, odd_labels, literal, c1, name):
    top = 2 * g
    hl = [_hpow_label(j) for j in range(top)]
    labels = hl + odd_labels
    degrees = [0] * top + [1] * len(odd_labels)

    def hpow(e):
        coeff = Fraction(1)
        while e >= top:
            e -= top - 2
            coeff *= 16
        return {hl[e]: coeff}

    rules = {}
    for a in range(1, top):
        for b in range(1, top):
            rules[(hl[a], hl[b])] = hpow(a + b)
        for o in odd_labels:
            rules[(hl[a], o)] = {}
    low = 2 * g - 3 if literal else 1
    for i, o1 in enumerate(odd_labels):
        for j, o2 in enumerate(odd_labels):
            if i // 2 == j // 2 and i != j:
                d = 1 if i < j else -1
                rhs = {hl[2 * g - 1]: Fraction(d, 4)}
                rhs[hl[low]] = rhs.get(hl[low], 0) - 4 * d
                rules[(o1, o2)] = rhs
            else:
                rules[(o1, o2)] = {}
    return from_presentation(RingPresentation(labels, degrees, rules, c1=c1, name=name))


def qh_quadric(n):
    """QH* of a smooth n-dimensional quadric.

    Odd n: Q[h]/(h^(n+1) - 4h).  Even n = 2m: generated by h and the two
    ruling classes a, b, using the classical relation h^m = a + b together
    with h^(n+1) = 4h, h(a - b) = 0 and the parity-dependent values of ab, a^2.
    """
    if n < 1:
        raise BadParams("quadric dimension must be positive")
    if n % 2:
        labels = [_hpow_label(j) for j in range(n + 1)]
        rules = {}
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                e = a + b
                rules[(labels[a], labels[b])] = ({labels[e]: 1} if e <= n
                                                 else {labels[e - n]: 4})
        return from_presentation(RingPresentation(labels, [0] * (n + 1), rules,
                                                  c1={"h": n}, name="qh_quadric(%d)" % n))
    return _even_quadric(n)


def _even_quadric(n):
    m = n // 2
    labels = [_hpow_label(j) for j in range(m)] + ["a", "b"] + \
        ["h%sa" % ("" if j == 1 else j) for j in range(1, m + 1)]
    dim = len(labels)
    idx = {l: i for i, l in enumerate(labels)}
    E = [idx[_hpow_label(j)] for j in range(m)]
    A, B = idx["a"], idx["b"]
    C = [None] + [idx["h%sa" % ("" if j == 1 else j)] for j in range(1, m + 1)]

    def vec(d):
        return {k: Fraction(v) for k, v in d.items() if v}

    def apply(M, v):
        out = {}
        for k, c in v.items():
            for kk, cc in M[k].items():
                out[kk] = out.get(kk, 0) + c * cc
        return {k: c for k, c in out.items() if c}

    Mh = [None] * dim
    for j in range(m - 1):
        Mh[E[j]] = vec({E[j + 1]: 1})
    Mh[E[m - 1]] = vec({A: 1, B: 1})
    Mh[A] = vec({C[1]: 1})
    Mh[B] = vec({C[1]: 1})
    for j in range(1, m):
        Mh[C[j]] = vec({C[j + 1]: 1})
    h_elt = Mh[E[0]]
    Mh[C[m]] = {k: 2 * c for k, c in h_elt.items()}

    if m % 2 == 0:
        a_sq = vec({C[m]: 1, E[0]: -1})
        ab = vec({E[0]: 1})
    else:
        a_sq = vec({E[0]: 1})
        ab = vec({C[m]: 1, E[0]: -1})

    def hpow_apply(j, v):
        for _ in range(j):
            v = apply(Mh, v)
        return v

    Ma = [None] * dim
    Mb = [None] * dim
    for j in range(m):
        Ma[E[j]] = vec({A: 1}) if j == 0 else vec({C[j]: 1})
        Mb[E[j]] = vec({B: 1}) if j == 0 else vec({C[j]: 1})
    Ma[A], Ma[B] = a_sq, ab
    Mb[A], Mb[B] = ab, a_sq
    for j in range(1, m + 1):
        Ma[C[j]] = hpow_apply(j, a_sq)
        Mb[C[j]] = hpow_apply(j, ab)

    words = {}
    for j in range(m):
        words[E[j]] = ("h", j)
    words[A] = ("a", 0)
    words[B] = ("b", 0)
    for j in range(1, m + 1):
        words[C[j]] = ("a", j)
    table = {}
    for x in range(dim):
        gen, j = words[x]
        for y in range(dim):
            v = {y: Fraction(1)}
            if gen == "a":
                v = apply(Ma, v)
            elif gen == "b":
                v = apply(Mb, v)
            table[(x, y)] = hpow_apply(j, v)
    A = FiniteDimAlgebra(labels, [0] * dim, table, unit={E[0]: Fraction(1)},
                         c1={k: n * c for k, c in h_elt.items()},
                         name="qh_quadric(%d)" % n)
    if "h" not in idx:
        A.named["h"] = h_elt
    return A


def _clifford_like(names, form, name):
    """Algebra on words in generators with g_i g_j + g_j g_i = 2 form[i][j].

    A zero form gives the exterior algebra.  Basis: increasing subsets.
    """
    k = len(names)
    subsets = [S for r in range(k + 1) for S in combinations(range(k), r)]
    idx = {S: i for i, S in enumerate(subsets)}
    labels = ["1" if not S else "".join(names[s] for s in S) for S in subsets]
    cache = {}

    def normal(word):
        word = tuple(word)
        if word in cache:
            return cache[word]
        for p in range(len(word) - 1):
            a, b = word[p], word[p + 1]
            if a == b:
                out = {}
                sq = form[a][a]
                if sq:
                    for S, c in normal(word[:p] + word[p + 2:]).items():
                        out[S] = out.get(S, 0) + sq * c
                res = {S: c for S, c in out.items() if c}
                cache[word] = res
                return res
            if a > b:
                out = {}
                for S, c in normal(word[:p] + (b, a) + word[p + 2:]).items():
                    out[S] = out.get(S, 0) - c
                s = 2 * form[a][b]
                if s:
                    for S, c in normal(word[:p] + word[p + 2:]).items():
                        out[S] = out.get(S, 0) + s * c
                res = {S: c for S, c in out.items() if c}
                cache[word] = res
                return res
        res = {word: Fraction(1)}
        cache[word] = res
        return res

    table = {}
    for S in subsets:
        for T in subsets:
            table[(idx[S], idx[T])] = {idx[U]: c for U, c in normal(S + T).items()}
    return FiniteDimAlgebra(labels, [len(S) % 2 for S in subsets], table,
                            unit={0: Fraction(1)}, name=name)


def clifford(k):
    """Clifford algebra on k odd generators.

    Generators come in hyperbolic pairs x, y with x^2 = y^2 = 0, xy + yx = 1;
    odd k adds one z with z^2 = 1.  clifford(1) = Q[z]/(z^2 - 1) and
    clifford(2) is the 2x2 matrix algebra with idempotents xy and yx.
    """
    if k < 1:
        raise BadParams("clifford needs k >= 1")
    names = []
    pairs = k // 2
    for p in range(pairs):
        sfx = "" if pairs == 1 else str(p + 1)
        names += ["x" + sfx, "y" + sfx]
    if k % 2:
        names.append("x" if k == 1 else "z")
    form = [[Fraction(0)] * k for _ in range(k)]
    for p in range(pairs):
        form[2 * p][2 * p + 1] = form[2 * p + 1][2 * p] = Fraction(1, 2)
    if k % 2:
        form[k - 1][k - 1] = Fraction(1)
    return _clifford_like(names, form, "clifford(%d)" % k)


def exterior(m):
    if m < 0:
        raise BadParams("exterior needs m >= 0")
    names = ["e%d" % (i + 1) for i in range(m)]
    return _clifford_like(names, [[Fraction(0)] * m for _ in range(m)], "exterior(%d)" % m)


BUILTINS = {
    "qh_moduli_sigma2": (qh_moduli_sigma2, 0),
    "qh_quadric": (qh_quadric, 1),
    "qh_intersection": (qh_intersection, 1),
    "clifford": (clifford, 1),
    "exterior": (exterior, 1),
}


def builtin(name, *params):
    try:
        fn, nparams = BUILTINS[name]
    except KeyError:
        raise BadParams("unknown builtin algebra %r" % (name,)) from None
    if len(params) != nparams:
        raise BadParams("%s takes %d parameter(s)" % (name, nparams))
    try:
        params = [int(p) for p in params]
    except (TypeError, ValueError):
        raise BadParams("parameters must be integers") from None
    return fn(*params)


# ---------------------------------------------------------------------------
# operators and splitting

def mult_operator(A: FiniteDimAlgebra, a):
    """Matrix (list of rows) of x -> a*x in the basis of A."""
    n = A.dim
    T = [[A.zero] * n for _ in range(n)]
    for j in range(n):
        for k, c in A.mul(a, {j: A.zero + 1}).items():
            T[k][j] = c
    return T


def minimal_polynomial(A: FiniteDimAlgebra, a):
    """Monic minimal polynomial of a (equal to that of left multiplication by a)."""
    e = Echelon(track=True)
    x = A.one()
    k = 0
    while True:
        res = e.add(x, label=k)
        if res is not True:
            coeffs = [res.get(i, Fraction(0)) for i in range(k + 1)]
            return upoly.monic(coeffs)
        x = A.mul(a, x)
        k += 1


@dataclass
class EigenBlock:
    factor: list                 # irreducible-or-residual factor, monic
    multiplicity: int
    eigenvalue: Optional[Fraction]
    dim: int
    basis: list                  # kernel vectors (dicts)
    idempotent: dict

    def key(self):
        return render_scalar(self.eigenvalue) if self.eigenvalue is not None \
            else upoly.render(self.factor)


@dataclass
class EigenSplit:
    minpoly: list
    blocks: List[EigenBlock]

    def dims(self):
        return {b.key(): b.dim for b in self.blocks}

    def block(self, eigenvalue):
        for b in self.blocks:
            if b.eigenvalue is not None and b.eigenvalue == eigenvalue:
                return b
        return None


def _factor_blocks(minpoly):
    """Coprime blocks (factor, exponent, rational root or None)."""
    out = []
    for s, mult in upoly.squarefree_decomposition(minpoly):
        rest = s
        for r in upoly.rational_roots(s):
            lin = [-r, Fraction(1)]
            out.append((lin, mult, r))
            rest = upoly.divmod_(rest, lin)[0]
        if upoly.deg(rest) > 0:
            out.append((upoly.monic(rest), mult, None))

    def order(item):
        f, _, r = item
        return (0, -r) if r is not None else (1, upoly.deg(f), upoly.render(f))

    out.sort(key=order)
    return out


def eigen_split(A: FiniteDimAlgebra, a) -> EigenSplit:
    """Generalised eigenspaces of multiplication by ``a`` with their idempotents.

    Rational eigenvalues give one block each; any remaining factor of the
    minimal polynomial without rational roots is kept whole as one block.
    """
    m = minimal_polynomial(A, a)
    T = mult_operator(A, a)
    blocks = []
    for f, mult, root in _factor_blocks(m):
        F = upoly.power(f, mult)
        cof = upoly.divmod_(m, F)[0]
        _, s, _ = upoly.xgcd(cof, F)
        p = upoly.mod(upoly.mul(s, cof), m)
        e = A.poly_eval(p, a)
        FT = _poly_matrix(F, T, A.zero)
        kernel = matrix_kernel(FT)
        basis = [{i: c for i, c in enumerate(col) if c} for col in kernel]
        blocks.append(EigenBlock(f, mult, root, len(basis), basis, e))
    return EigenSplit(m, blocks)


def _poly_matrix(p, T, zero):
    n = len(T)
    out = [[zero] * n for _ in range(n)]
    for c in reversed(p):
        # out = out*T + c*I
        new = [[zero] * n for _ in range(n)]
        for i in range(n):
            row = out[i]
            for k in range(n):
                if row[k]:
                    r = row[k]
                    Tk = T[k]
                    for j in range(n):
                        if Tk[j]:
                            new[i][j] = new[i][j] + r * Tk[j]
            new[i][i] = new[i][i] + c
        out = new
    return out


def zero_eigenspace_rank(A: FiniteDimAlgebra, a) -> int:
    """Dimension of the generalised 0-eigenspace: nullity of T^dim."""
    T = mult_operator(A, a)
    P = _poly_matrix([Fraction(0)] * A.dim + [Fraction(1)], T, A.zero)
    return len(matrix_kernel(P))


def idempotent_check(A: FiniteDimAlgebra, e) -> bool:
    return A.equal(A.mul(e, e), e)


def in_span(vectors, x):
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.contains(x)


def span_closed(A: FiniteDimAlgebra, vectors):
    """Whether span(vectors) is closed under the product of A."""
    e = Echelon()
    for v in vectors:
        e.add(v)
    for v in vectors:
        for w in vectors:
            if not e.contains(A.mul(v, w)):
                return False
    return True
