"""Jacobian rings, Koszul exactness and Hochschild cohomology of MC pairs.

The cohomology of x -> [x, W + eta] on formal polyvector fields is computed
through truncations.  The level-N truncation C_N (coefficients mod m^(N+1))
is a complex, but its cohomology has spurious classes near degree N: a
cochain whose differential only lives above N looks closed.  Those classes
die under the truncation map C_N -> C_t for t well below N, so we report
the rank of the image H(C_N) -> H(C_t) for two consecutive window levels
t and call the result stabilised when they agree.

With Z_N the cocycles of C_N and B_t the coboundaries of C_t, the image
has rank dim trunc_t(Z_N) - dim B_t, and

    dim trunc_t(Z_N) = dim C_t - (rank d_N - rank d_N|{deg > t}),

so everything reduces to ranks of sparse exact matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .cyclic import CyclicAction, is_invariant, monomial_weight
from .errors import (DifferentialNotSquareZero, FixedLocusPositiveDimensional,
                     NotStabilized, OrderViolation, ValidationError)
from .linalg import Echelon
from .polyvec import Polyvector, _bracket_terms, all_form_indices, render_form_index
from .series import (TruncatedSeries, grevlex_key, grlex_key, monomials_up_to,
                     render_monomial)


# ---------------------------------------------------------------------------
# Jacobian ring

@dataclass
class JacobianReport:
    per_degree: List[int]          # contribution of each degree d = 0..top
    totals: List[int]              # dim of the quotient mod m^(d+1)
    stabilized: bool
    total: Optional[int]           # Milnor number when stabilised
    basis: List[tuple]             # standard monomials, graded-lex
    order: str = "grlex"
    names: tuple = ()

    def as_dict(self):
        return {
            "per_degree": self.per_degree,
            "totals": self.totals,
            "stabilized": self.stabilized,
            "milnor_number": self.total,
            "basis": [render_monomial(m, self.names) or "1" for m in self.basis],
            "tie_order": self.order,
        }


def _local_columns(nvars, top, tie):
    monos = monomials_up_to(nvars, top)
    monos.sort(key=tie)
    return {m: i for i, m in enumerate(monos)}, monos


def jacobian_ring(W: TruncatedSeries, order="grlex", raise_on_unstable=True) -> JacobianReport:
    """Dimensions of K[v]/(J(W) + m^(d+1)) for d up to D-1.

    ``order`` picks the tie-break inside a degree ("grlex" or "grevlex");
    lower degrees always lead, as befits a local ring.  Ranks do not depend
    on it, which is what the cross-check in the tests exercises.
    """
    ctx = W.ctx
    o = W.order()
    if o is not None and o < 2:
        raise OrderViolation("jacobian_ring needs order(W) >= 2")
    tie = {"grlex": grlex_key, "grevlex": grevlex_key}[order]
    top = ctx.trunc - 1
    n = ctx.nvars
    col, monos = _local_columns(n, top, tie)
    parts = [W.partial(i) for i in range(n)]
    gens = []
    for m in monos:
        for p in parts:
            v = {}
            for pm, c in p.terms.items():
                mm = tuple(a + b for a, b in zip(m, pm))
                if sum(mm) <= top:
                    v[col[mm]] = c
            if v:
                gens.append((sum(m) + (p.order() or 0), v))
    # rank of the generators that survive mod m^(d+1), for every d
    totals = []
    basis = []
    for d in range(top + 1):
        e = Echelon()
        cols_d = {i for m, i in col.items() if sum(m) <= d}
        for lo, v in gens:
            if lo > d:
                continue
            vt = {k: c for k, c in v.items() if k in cols_d}
            if vt:
                e.add(vt)
        totals.append(len(cols_d) - e.rank)
        if d == top:
            piv = set(e.pivots())
            basis = sorted((monos[i] for i in cols_d if i not in piv), key=grlex_key)
    per = [totals[0]] + [totals[d] - totals[d - 1] for d in range(1, len(totals))]
    stab = len(per) >= 3 and per[-1] == 0 and per[-2] == 0
    rep = JacobianReport(per, totals, stab, totals[-1] if stab else None,
                         basis, order, ctx.names)
    if not stab and raise_on_unstable:
        raise NotStabilized("Jacobian quotient still growing at degree %d" % top, partial=rep)
    return rep


# ---------------------------------------------------------------------------
# windowed cohomology engine

def _cell_key(mono, I):
    return (sum(mono), grlex_key(mono), len(I), I)


class WindowedComplex:
    """Cohomology images H(C_N) -> H(C_t) for a graded map of cells.

    ``cells`` maps a key (parity or form degree) to the basis cells
    (monomial, form index) of that key; ``image(cell)`` returns the
    differential as {cell: coeff} truncated at N; ``target(key)`` names
    the key receiving the image.
    """

    def __init__(self, cells, image, target, N):
        self.N = N
        self.cells = {k: sorted(v, key=lambda c: _cell_key(*c)) for k, v in cells.items()}
        self.target = target
        order = sorted({c for v in cells.values() for c in v}, key=lambda c: _cell_key(*c))
        self.col = {c: i for i, c in enumerate(order)}
        self.cellof = order
        self.images = {}
        for k, cs in self.cells.items():
            for c in cs:
                self.images[c] = {self.col[t]: x for t, x in image(c).items()}

    def check_square_zero(self):
        for c, img in self.images.items():
            acc = {}
            for j, a in img.items():
                for k, b in self.images.get(self.cellof[j], {}).items():
                    s = acc.get(k, 0) + a * b
                    if s:
                        acc[k] = s
                    else:
                        acc.pop(k, None)
            if acc:
                mono, I = c
                raise DifferentialNotSquareZero(
                    "d(d(x)) != 0 for the cell %s" % _render_cell(mono, I, None))

    def _deg(self, j):
        return sum(self.cellof[j][0])

    def _snapshots(self):
        """rank d_N on every key, and on the cells of degree > t for each t."""
        if hasattr(self, "_full"):
            return
        self._full, self._above = {}, {}
        for k, cs in self.cells.items():
            e = Echelon()
            snaps = {}
            by_deg = sorted(cs, key=lambda c: -sum(c[0]))
            pos = 0
            for t in range(self.N, -2, -1):
                while pos < len(by_deg) and sum(by_deg[pos][0]) > t:
                    v = self.images[by_deg[pos]]
                    if v:
                        e.add(v)
                    pos += 1
                snaps[t] = e.rank
            self._full[k] = e.rank
            self._above[k] = snaps
        self._incoming = {}

    def _incoming_rank(self, t, key):
        if (t, key) not in self._incoming:
            self._incoming[(t, key)] = self.boundary_echelon(key, t).rank
        return self._incoming[(t, key)]

    def window(self, t):
        """{key: rank of the image H(C_N) -> H(C_t)} and its rank table."""
        self._snapshots()
        out, table = {}, {}
        for k, cs in self.cells.items():
            dim_t = sum(1 for c in cs if sum(c[0]) <= t)
            ztrunc = dim_t - (self._full[k] - self._above[k][t])
            b = self._incoming_rank(t, k)
            out[k] = ztrunc - b
            table[str(k)] = {"cochains": dim_t, "cocycle_truncations": ztrunc,
                             "coboundaries": b}
        return out, table

    def ranks(self, windows):
        out, table = {}, {}
        for t in windows:
            out[t], table[str(t)] = self.window(t)
        return out, table

    def auto_window(self, start, lowest=1):
        """Highest t <= start with equal images at t-1 and t, or None."""
        prev = None
        for t in range(start, lowest - 2, -1):
            cur = self.window(t)[0]
            if prev is not None and cur == prev:
                return t + 1
            prev = cur
        return None

    def boundary_echelon(self, key, t):
        """Echelon of B_t inside ``key``."""
        e = Echelon()
        for k, cs in self.cells.items():
            if self.target(k) != key:
                continue
            for c in cs:
                if sum(c[0]) > t:
                    continue
                v = {j: x for j, x in self.images[c].items() if self._deg(j) <= t}
                if v:
                    e.add(v)
        return e

    def cocycle_basis(self, key):
        """Kernel of d_N on ``key`` as column vectors."""
        e = Echelon(track=True)
        out = []
        for c in self.cells[key]:
            res = e.add(self.images[c], label=self.col[c])
            if res is not True:
                out.append(res)
        return out

    def truncate_vec(self, v, t):
        return {j: x for j, x in v.items() if self._deg(j) <= t}

    def render_vec(self, v, names):
        parts = []
        for j in sorted(v):
            mono, I = self.cellof[j]
            parts.append((v[j], _render_cell(mono, I, names)))
        return " + ".join("(%s)*%s" % (_scalar(c), s) for c, s in parts)


def _scalar(c):
    from .scalars import render_scalar
    return render_scalar(c)


def _render_cell(mono, I, names):
    names = names or tuple("v%d" % (i + 1) for i in range(len(mono)))
    s = render_monomial(mono, names) if sum(mono) else "1"
    return s if not I else "%s*%s" % (s, render_form_index(I))


def _mc_total(p):
    """W + eta as a list of (form index, series) components."""
    comps = [((), p.W)] if p.W else []
    comps += list(p.eta.components.items())
    return comps


def _differential(p, N):
    comps = _mc_total(p)
    ctx = p.W.ctx

    def image(cell):
        mono, I = cell
        f = TruncatedSeries(ctx, {mono: ctx.scalar(1)}, check=False)
        out = {}
        for J, g in comps:
            for K, h in _bracket_terms(I, f, J, g):
                for m, c in h.terms.items():
                    if sum(m) > N:
                        continue
                    key = (m, K)
                    s = out.get(key, 0) + c
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
        return out
    return image


def _cells(nvars, N, keyfn, action=None):
    cells = {}
    forms = all_form_indices(nvars)
    for m in monomials_up_to(nvars, N):
        for I in forms:
            if action is not None and monomial_weight(m, action, I) != 0:
                continue
            cells.setdefault(keyfn(I), []).append((m, I))
    return cells


# ---------------------------------------------------------------------------
# Hochschild cohomology

def min_raise(p):
    """Smallest polynomial-degree raise of x -> [x, W + eta]: ord - 1."""
    orders = [f.order() for _, f in _mc_total(p) if f.order() is not None]
    return max(min(orders) - 1, 1) if orders else 1


def _select_windows(cx, margin, raise_):
    """(t1, t2, margin, found) with t2 = N - margin.

    Without an explicit margin, scan down from t = N - raise_ (cochains
    above it are closed for trivial reasons) for the highest pair of
    adjacent windows with equal ranks; if there is none, fall back to
    margin ``raise_``.
    """
    N = cx.N
    if margin is not None:
        if margin < 1:
            raise ValidationError("window margin must be positive")
        t2 = N - margin
        if t2 - 1 < 0:
            raise ValidationError("truncation too small for window margin %d" % margin)
        return t2 - 1, t2, margin, True
    start = N - raise_
    if start - 1 < 0:
        raise ValidationError("truncation too small: raise the truncation order")
    t2 = cx.auto_window(start)
    if t2 is None:
        return start - 1, start, raise_, False
    return t2 - 1, t2, N - t2, True


def _folded(p, action):
    ctx = p.W.ctx
    N = ctx.trunc - 1
    if N < 2:
        raise ValidationError("truncation order must be at least 3")
    cells = _cells(ctx.nvars, N, lambda I: len(I) % 2, action)
    cx = WindowedComplex(cells, _differential(p, N), lambda k: 1 - k, N)
    cx.check_square_zero()
    return cx


def folded_complex(p, action=None) -> WindowedComplex:
    """Folded Z2 complex of (W, eta), optionally restricted to weight 0.

    Construction multiplies the differential by itself and raises
    DifferentialNotSquareZero if anything survives.
    """
    return _folded(p, action)


@dataclass
class HHReport:
    even: int
    odd: int
    windows: Dict[int, Dict[str, int]]
    stabilized: bool
    exact_level: int
    margin: int
    rank_table: dict
    sector: str = "full"
    basis: Dict[str, List[str]] = field(default_factory=dict)

    def as_dict(self):
        d = {
            "even": self.even,
            "odd": self.odd,
            "windows": {str(t): w for t, w in sorted(self.windows.items())},
            "stabilized": self.stabilized,
            "exact_level": self.exact_level,
            "margin": self.margin,
            "rank_table": self.rank_table,
            "sector": self.sector,
        }
        if self.basis:
            d["basis"] = self.basis
        return d


def _hh(p, action, margin, check_mc, raise_on_unstable, with_basis, sector):
    from .mcgauge import mc_check
    if check_mc:
        mc_check(p).raise_if_failed()
    cx = _folded(p, action)
    t1, t2, margin, _ = _select_windows(cx, margin, min_raise(p))
    ranks, table = cx.ranks([t1, t2])
    windows = {t: {"even": ranks[t].get(0, 0), "odd": ranks[t].get(1, 0)} for t in (t1, t2)}
    stab = windows[t1] == windows[t2]
    rep = HHReport(windows[t2]["even"], windows[t2]["odd"], windows, stab, cx.N, margin,
                   table, sector)
    if with_basis and stab:
        rep.basis = _class_basis(cx, t2, ranks[t2], p.W.ctx.names)
    if not stab and raise_on_unstable:
        raise NotStabilized("HH ranks differ between windows %d and %d" % (t1, t2), partial=rep)
    return rep


def _class_basis(cx, t, ranks, names):
    """Leading cells of the cohomology image, one per class.

    The leading cells of span(B_t + truncated cocycles) that are not leading
    cells of B_t are canonical (independent of the elimination order).
    """
    out = {}
    for k, label in ((0, "even"), (1, "odd")):
        if not ranks.get(k):
            out[label] = []
            continue
        e = cx.boundary_echelon(k, t)
        bnd = set(e.rows)
        for z in cx.cocycle_basis(k):
            e.add(cx.truncate_vec(z, t))
        out[label] = [_render_cell(*cx.cellof[j], names) for j in sorted(set(e.rows) - bnd)]
    return out


def hh_ranks(p, margin=None, check_mc=True, raise_on_unstable=True, with_basis=False):
    """Z2-graded HH of the structure (W, eta) from the folded polyvector complex.

    ``margin`` fixes the window distance N - t; by default the highest pair
    of adjacent windows with equal ranks is used.
    """
    return _hh(p, None, margin, check_mc, raise_on_unstable, with_basis, "full")


def invariant_hh(p, action: CyclicAction, margin=None, check_mc=True,
                 raise_on_unstable=True, with_basis=True):
    """HH restricted to weight-0 polyvectors."""
    action.check_nvars(p.W.ctx.nvars)
    if not is_invariant(p.W, action) or not is_invariant(p.eta, action):
        raise ValidationError("W and eta must be invariant under the action")
    return _hh(p, action, margin, check_mc, raise_on_unstable, with_basis, "invariant")


def classes_span(p, reps, action=None, margin=None):
    """Whether the polyvectors (or 0-form series) ``reps`` are cocycles of
    C_N whose truncations form a basis of the even cohomology image."""
    cx = _folded(p, action)
    _, t, _, _ = _select_windows(cx, margin, min_raise(p))
    rank = cx.window(t)[0].get(0, 0)
    image = _differential(p, cx.N)
    e = cx.boundary_echelon(0, t)
    for r in reps:
        pv = Polyvector.function(r) if isinstance(r, TruncatedSeries) else r
        if pv.form_degrees() and any(k % 2 for k in pv.form_degrees()):
            return False
        acc = {}
        for I, f in pv.components.items():
            for m, c in f.terms.items():
                if sum(m) > cx.N:
                    continue
                if (m, I) not in cx.col:
                    return False
                for cell, x in image((m, I)).items():
                    acc[cell] = acc.get(cell, 0) + c * x
        if any(acc.values()):
            return False
        v = {cx.col[(m, I)]: c for I, f in pv.components.items()
             for m, c in f.terms.items() if sum(m) <= t}
        if not e.add(v):
            return False
    return len(reps) == rank


# ---------------------------------------------------------------------------
# twisted sectors

@dataclass
class SectorReport:
    identity: HHReport
    twisted: List[dict]
    even: int
    odd: int

    def as_dict(self):
        return {
            "identity": self.identity.as_dict(),
            "twisted": self.twisted,
            "total": {"even": self.even, "odd": self.odd},
            "note": "twisted sectors use the fixed-locus rule (valid when Fix = {0})",
        }


def twisted_sector_ranks(p, action: CyclicAction, margin=None) -> SectorReport:
    """HH of Lambda(V) x| Z_n split over group elements.

    The identity sector is the invariant HH.  A non-identity element with
    fixed locus {0} contributes a single class in degree nvars mod 2; any
    other element is out of reach of the rule and raises.
    """
    n = action.order
    nv = action.nvars
    twisted = []
    for k in range(1, n):
        fixed = action.fixed_directions(k)
        if fixed:
            raise FixedLocusPositiveDimensional(
                "gamma^%d fixes the variables %s" % (k, ", ".join("v%d" % (i + 1) for i in fixed)))
        twisted.append({"element": k, "rank": 1, "parity": "odd" if nv % 2 else "even",
                        "rule": "fixed-locus"})
    ident = invariant_hh(p, action, margin=margin)
    even = ident.even + sum(1 for s in twisted if s["parity"] == "even")
    odd = ident.odd + sum(1 for s in twisted if s["parity"] == "odd")
    return SectorReport(ident, twisted, even, odd)


# ---------------------------------------------------------------------------
# Koszul exactness

@dataclass
class ExactnessVerdict:
    exact: bool
    ranks: Dict[int, int]             # form degree -> cohomology rank (window t2)
    windows: Dict[int, Dict[int, int]]
    stabilized: bool
    failing_form_degree: Optional[int] = None
    first_failing_degree: Optional[int] = None
    witness: Optional[str] = None
    exact_level: int = 0
    margin: int = 0

    def as_dict(self):
        return {
            "exact": self.exact,
            "ranks_by_form_degree": {str(k): v for k, v in sorted(self.ranks.items())},
            "windows": {str(t): {str(k): v for k, v in sorted(w.items())}
                        for t, w in sorted(self.windows.items())},
            "stabilized": self.stabilized,
            "failing_form_degree": self.failing_form_degree,
            "first_failing_degree": self.first_failing_degree,
            "witness": self.witness,
            "exact_level": self.exact_level,
            "margin": self.margin,
        }


def koszul_exactness(W: TruncatedSeries, margin=None, raise_on_unstable=True) -> ExactnessVerdict:
    """Check that iota_dW is exact in positive form degrees.

    On failure the verdict names the highest failing form degree, a cocycle
    representing a surviving class and the polynomial degree of its
    lowest-order term.
    """
    from .mcgauge import MCPair
    o = W.order()
    if o is not None and o < 2:
        raise OrderViolation("koszul_exactness needs order(W) >= 2")
    ctx = W.ctx
    p = MCPair(W, Polyvector.zero(ctx), check=False)
    N = ctx.trunc - 1
    if N < 2:
        raise ValidationError("truncation order must be at least 3")
    cells = _cells(ctx.nvars, N, len)
    cx = WindowedComplex(cells, _differential(p, N), lambda k: k - 1, N)
    cx.check_square_zero()
    t1, t2, margin, _ = _select_windows(cx, margin, min_raise(p))
    ranks, _ = cx.ranks([t1, t2])
    windows = {t: {k: ranks[t].get(k, 0) for k in range(ctx.nvars + 1)} for t in (t1, t2)}
    stab = windows[t1] == windows[t2]
    pos = {k: windows[t2][k] for k in range(1, ctx.nvars + 1)}
    exact = all(v == 0 for v in pos.values())
    verdict = ExactnessVerdict(exact, windows[t2], windows, stab, exact_level=N, margin=margin)
    if not exact:
        k = max(k for k, v in pos.items() if v)
        e = cx.boundary_echelon(k, t2)
        best = None
        for z in cx.cocycle_basis(k):
            zt = cx.truncate_vec(z, t2)
            rem, lead = e.leading_remainder(zt)
            if lead is not None:
                cand = (cx._deg(lead), lead, rem)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        verdict.failing_form_degree = k
        if best is not None:
            verdict.first_failing_degree = best[0]
            verdict.witness = cx.render_vec(best[2], ctx.names)
    # a failing verdict carries its witness; a non-isolated W never stabilises
    if exact and not stab and raise_on_unstable:
        raise NotStabilized("Koszul ranks differ between windows %d and %d" % (t1, t2),
                            partial=verdict)
    return verdict
