"""The ten acceptance criteria, one pass/fail line each.

Run ``pytest tests/test_acceptance.py`` (the lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py`` for the lines alone.
"""
import os
import random
import sys
import time
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ainfty.cyclic import CyclicAction, invariant_monomials_up_to  # noqa: E402
from ainfty.errors import NotStabilized  # noqa: E402
from ainfty.exparse import parse_poly  # noqa: E402
from ainfty.fdalg import (eigen_split, idempotent_check, in_span, qh_intersection,  # noqa: E402
                          qh_moduli_sigma2, qh_quadric, zero_eigenspace_rank)
from ainfty.koszul import (classes_span, hh_ranks, invariant_hh, jacobian_ring,  # noqa: E402
                           koszul_exactness, twisted_sector_ranks)
from ainfty.mcgauge import MCPair, normal_form, replay, replay_log  # noqa: E402
from ainfty.series import SeriesContext, TruncatedSeries, render_series  # noqa: E402

RESULTS = []


def ctx3(D):
    return SeriesContext(3, D, "Q", ("v1", "v2", "v3"))


def pentagram(g, D):
    p = 2 * g + 1
    return parse_poly("-v1*v2*v3 + v1^%d + v2^%d + v3^%d" % (p, p, p), ctx3(D))


def criterion_1():
    notes = []
    ok = True
    for k in range(2, 9):
        ctx = SeriesContext(1, 2 * k, "Q", ("x",))
        W = ctx.var(0) ** k
        t0 = time.perf_counter()
        rep = hh_ranks(MCPair(W))
        dt = time.perf_counter() - t0
        exact = koszul_exactness(W).exact
        good = (rep.even, rep.odd) == (k - 1, 0) and exact and dt < 1.0
        ok &= good
        notes.append("x^%d:(%d,%d)%.2fs" % (k, rep.even, rep.odd, dt))
    return ok, " ".join(notes)


def criterion_2():
    ok = True
    notes = []
    for g in (2, 3):
        D = 2 * (2 * g + 1) + 2
        W = pentagram(g, D)
        p = MCPair(W)
        G = CyclicAction.for_genus(g)
        t0 = time.perf_counter()
        rep = invariant_hh(p, G)
        dt = time.perf_counter() - t0
        v1, v2, v3 = W.ctx.gens()
        spans = classes_span(p, [W.ctx.one(), v1 * v2 * v3], action=G)
        good = (rep.even, rep.odd) == (2, 0) and spans and (g != 3 or dt < 30)
        ok &= good
        notes.append("g=%d D=%d:(%d,%d) basis{1,v1v2v3}=%s %.2fs"
                     % (g, D, rep.even, rep.odd, spans, dt))
    return ok, "; ".join(notes)


def criterion_3():
    ok = True
    notes = []
    for g in (2, 3):
        W = pentagram(g, 2 * (2 * g + 1) + 2)
        rep = twisted_sector_ranks(MCPair(W), CyclicAction.for_genus(g))
        good = (rep.even, rep.odd) == (2, 2 * g)
        ok &= good
        notes.append("g=%d total=(%d,%d) rank %d" % (g, rep.even, rep.odd, rep.even + rep.odd))
    return ok, "; ".join(notes)


def _random_isolated(rng, D):
    """v1^a + v2^b + v3^c plus terms of weighted degree > 1: isolated,
    Milnor number (a-1)(b-1)(c-1)."""
    a, b, c = (rng.choice([2, 3, 4]) for _ in range(3))
    ctx = ctx3(D)
    terms = {(a, 0, 0): 1, (0, b, 0): 1, (0, 0, c): 1}
    for _ in range(rng.randint(1, 4)):
        while True:
            m = tuple(rng.randint(0, 4) for _ in range(3))
            if 2 <= sum(m) <= D and Fraction(m[0], a) + Fraction(m[1], b) + Fraction(m[2], c) > 1:
                break
        terms[m] = terms.get(m, 0) + rng.choice([1, -1, 2, Fraction(1, 2)])
    return TruncatedSeries(ctx, terms), (a - 1) * (b - 1) * (c - 1)


def criterion_4():
    ok = True
    notes = []
    for g, D in ((2, 12), (3, 16)):
        v = koszul_exactness(pentagram(g, D))
        ok &= v.exact and v.stabilized
        notes.append("Q_%d exact=%s" % (g, v.exact))
    rng = random.Random(20240607)
    passed = 0
    for _ in range(20):
        W, mu = _random_isolated(rng, 12)
        v = koszul_exactness(W)
        if v.exact and v.stabilized and v.ranks[0] == mu:
            passed += 1
    ok &= passed == 20
    notes.append("random %d/20" % passed)
    v = koszul_exactness(parse_poly("v1^2*v2^2", ctx3(10)))
    fails = (not v.exact) and v.witness is not None
    ok &= fails
    notes.append("v1^2v2^2 fails at form degree %s, witness %s" % (v.failing_form_degree,
                                                                  v.witness))
    return ok, "; ".join(notes)


def _random_tail(rng, ctx, G):
    monos = [m for m in invariant_monomials_up_to(11, G) if sum(m) >= 4]
    coeffs = [Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2),
              Fraction(-2)]
    chosen = rng.sample(monos, rng.randint(1, 6))
    return TruncatedSeries(ctx, {m: rng.choice(coeffs) for m in chosen})


def _hh_signature(p, G=None):
    """(even, odd) when stable, else the full window table of the unstable run."""
    fn = hh_ranks if G is None else (lambda q: invariant_hh(q, G))
    try:
        rep = fn(p)
        return ("stable", rep.even, rep.odd)
    except NotStabilized as exc:
        return ("unstable", repr(exc.partial.windows))


def criterion_5():
    """Tails that cancel a pure power v_i^5 leave the isolated-singularity
    setting (mu_i = 0 gives a line of critical points); those draws are
    redrawn and counted, and their HH window tables are still compared."""
    rng = random.Random(5121)
    G = CyclicAction.for_genus(2)
    base = pentagram(2, 13)
    pure = [(5, 0, 0), (0, 5, 0), (0, 0, 5)]
    counts = {"residual0": 0, "replay": 0, "hh": 0, "redrawn": 0, "redrawn_hh": 0}
    done = 0
    while done < 50:
        W = base + _random_tail(rng, base.ctx, G)
        if any(not W.coeff(m) for m in pure):
            counts["redrawn"] += 1
            out = normal_form(W, G, 2).output
            if _hh_signature(MCPair(W)) == _hh_signature(MCPair(out)):
                counts["redrawn_hh"] += 1
            continue
        done += 1
        rep = normal_form(W, G, 2)
        if rep.residual.is_zero() and rep.status == "ok":
            counts["residual0"] += 1
        serial = [s.to_dict() for s in rep.log]
        if replay(W, rep.log) == rep.output and \
                render_series(replay_log(W, serial)) == render_series(rep.output):
            counts["replay"] += 1
        if _hh_signature(MCPair(W)) == _hh_signature(MCPair(rep.output)) == \
                ("stable", 14, 0) and \
                _hh_signature(MCPair(W), G) == _hh_signature(MCPair(rep.output), G):
            counts["hh"] += 1
    ok = all(counts[k] == 50 for k in ("residual0", "replay", "hh")) and \
        counts["redrawn_hh"] == counts["redrawn"]
    return ok, ("50 tails at D=13: residual 0 %(residual0)d/50, replay %(replay)d/50, "
                "HH unchanged %(hh)d/50; %(redrawn)d draws with some mu_i = 0 redrawn "
                "(HH windows still agree for %(redrawn_hh)d)" % counts)


def criterion_6():
    A = qh_moduli_sigma2()
    h = A.lookup("h")
    sp = eigen_split(A, h)
    dims = sp.dims()
    plus = sp.block(Fraction(4)).idempotent
    target = A.scale(A.add(A.power(h, 3), A.scale(A.power(h, 2), 4)), Fraction(1, 128))
    zero = sp.block(Fraction(0))
    members = [A.sub(A.one(), A.scale(A.power(h, 2), Fraction(1, 16))),
               A.sub(A.power(h, 3), A.scale(h, 16))] + [A.lookup("m%d" % i) for i in range(1, 5)]
    contains = all(in_span(zero.basis, x) for x in members)
    total = {}
    for b in sp.blocks:
        total = A.add(total, b.idempotent)
    orth = all(not A.mul(b.idempotent, c.idempotent)
               for b in sp.blocks for c in sp.blocks if b is not c)
    idem = all(idempotent_check(A, b.idempotent) for b in sp.blocks)
    ok = dims == {"4": 1, "0": 6, "-4": 1} and A.equal(plus, target) and contains and \
        A.equal(total, A.one()) and orth and idem
    return ok, "dims %s, e+=(h^3+4h^2)/128 %s, 0-block members %s, sum=1 %s, orthogonal %s" % (
        dims, A.equal(plus, target), contains, A.equal(total, A.one()), orth)


def criterion_7():
    notes = []
    ok = True
    for g in (2, 3, 4):
        A = qh_intersection(g)
        r = zero_eigenspace_rank(A, A.lookup("h"))
        assoc = A.associativity_failure() is None
        ok &= r == 2 * g + 2 and assoc
        notes.append("g=%d rank %d assoc %s" % (g, r, assoc))
    return ok, "; ".join(notes)


def criterion_8():
    ranks = {n: zero_eigenspace_rank(qh_quadric(n), qh_quadric(n).lookup("h")) for n in (3, 5)}
    return all(r == 1 for r in ranks.values()), "zero-block ranks %s" % ranks


def criterion_9():
    import test_properties as tp
    suites = [tp.test_schouten_graded_antisymmetry, tp.test_schouten_graded_jacobi,
              tp.test_schouten_leibniz_over_wedge, tp.test_contract_dW_squares_to_zero,
              tp.test_folded_differential_squares_to_zero, tp.test_substitute_is_a_ring_morphism,
              tp.test_exp_vector_field_inverse, tp.test_project_invariant_idempotent,
              tp.test_eigensplit_idempotent_laws]
    failed = []
    for fn in suites:
        try:
            fn()
        except Exception as exc:  # a falsified property
            failed.append("%s: %s" % (fn.__name__, type(exc).__name__))
    return not failed, "%d/%d suites x100 cases pass%s" % (
        len(suites) - len(failed), len(suites), "; " + ", ".join(failed) if failed else "")


def criterion_10():
    W = pentagram(2, 12)
    a, b = jacobian_ring(W, "grlex"), jacobian_ring(W, "grevlex")
    ok = a.total == b.total == 14 and a.totals == b.totals
    notes = ["Q_2 grlex %s grevlex %s" % (a.total, b.total)]
    cases = [SeriesContext(1, 2 * k, "Q", ("x",)).var(0) ** k for k in (3, 5)]
    cases += [W, parse_poly("v1^3 + v2^4 + v3^2 + v1*v2^3", ctx3(12))]
    for V in cases:
        if koszul_exactness(V).exact:
            hh = hh_ranks(MCPair(V))
            j = jacobian_ring(V)
            good = hh.odd == 0 and hh.even == j.total
            ok &= good
            notes.append("%s: HH even %d = mu %d" % (render_series(V), hh.even, j.total))
        else:
            ok = False
            notes.append("%s: not exact" % render_series(V))
    return ok, "; ".join(notes)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


def _run(i):
    t0 = time.perf_counter()
    try:
        ok, detail = CRITERIA[i - 1]()
    except Exception as exc:
        ok, detail = False, "raised %s: %s" % (type(exc).__name__, exc)
    line = "criterion %2d: %s (%.1fs) %s" % (i, "PASS" if ok else "FAIL",
                                            time.perf_counter() - t0, detail)
    RESULTS.append(line)
    return ok, line


@pytest.mark.parametrize("i", range(1, 11))
def test_acceptance_criterion(i):
    ok, line = _run(i)
    print(line)
    assert ok, line


if __name__ == "__main__":
    bad = 0
    for i in range(1, 11):
        ok, line = _run(i)
        print(line, flush=True)
        bad += not ok
    sys.exit(1 if bad else 0)
