"""Hochschild cohomology of the pentagram potentials.

For genus g the potential Q = -v1 v2 v3 + v1^p + v2^p + v3^p (p = 2g+1) is
invariant under Z_p acting with weights (1, 1, 2g-1).  Its full HH has rank
equal to the Milnor number; the invariant part has rank 2, and adding the
twisted sectors of the semidirect product gives rank 2g+2, the rank of the
cohomology of a genus g surface.
"""
import time

from ainfty import (CyclicAction, MCPair, SeriesContext, classes_span, hh_ranks,
                    invariant_hh, jacobian_ring, koszul_exactness, parse_poly,
                    twisted_sector_ranks)


def pentagram(g):
    p = 2 * g + 1
    D = 2 * p + 2
    ctx = SeriesContext(3, D, "Q", ("v1", "v2", "v3"))
    return parse_poly("-v1*v2*v3 + v1^%d + v2^%d + v3^%d" % (p, p, p), ctx)


for g in (2, 3):
    W = pentagram(g)
    G = CyclicAction.for_genus(g)
    pair = MCPair(W)
    print("genus %d, truncation D = %d" % (g, W.ctx.trunc))
    print("  W =", W)

    jac = jacobian_ring(W)
    print("  Milnor number:", jac.total)

    ex = koszul_exactness(W)
    print("  Koszul complex exact in positive degrees:", ex.exact)

    if g == 2:
        t0 = time.perf_counter()
        full = hh_ranks(pair)
        print("  full HH: even %d, odd %d (%.2fs)" % (full.even, full.odd,
                                                       time.perf_counter() - t0))

    inv = invariant_hh(pair, G)
    print("  invariant HH: even %d, odd %d, leading cells %s"
          % (inv.even, inv.odd, inv.basis["even"]))
    v1, v2, v3 = W.ctx.gens()
    print("  {1, v1*v2*v3} is a basis of the invariant classes:",
          classes_span(pair, [W.ctx.one(), v1 * v2 * v3], action=G))

    sectors = twisted_sector_ranks(pair, G)
    print("  with the %d twisted sectors: even %d, odd %d (total %d = 2g+2)"
          % (len(sectors.twisted), sectors.even, sectors.odd, sectors.even + sectors.odd))
    print()
