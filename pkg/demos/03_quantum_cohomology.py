"""Generalised eigenspaces of multiplication by h in small quantum rings.

The eigenvalue-0 summand is the interesting piece: for the moduli space
attached to a genus 2 surface it has rank 6, for the intersection of two
quadrics of dimension 2g-1 it has rank 2g+2, and for odd quadrics rank 1.
"""
from fractions import Fraction

from ainfty import builtin, eigen_split, zero_eigenspace_rank
from ainfty import upoly
from ainfty.cyclic import CyclicAction, build_semidirect

A = builtin("qh_moduli_sigma2")
h = A.lookup("h")
split = eigen_split(A, h)
print("sigma2: minimal polynomial of h is", upoly.render(split.minpoly))
for block in split.blocks:
    print("  eigenvalue %s: rank %d, idempotent %s"
          % (block.key(), block.dim, A.render(block.idempotent)))
e_plus = split.block(Fraction(4)).idempotent
print("  e+ is idempotent:", A.equal(A.mul(e_plus, e_plus), e_plus))

for g in (2, 3, 4):
    B = builtin("qh_intersection", g)
    print("intersection of quadrics, g = %d: dim %d, zero block rank %d"
          % (g, B.dim, zero_eigenspace_rank(B, B.lookup("h"))))

for n in (3, 4, 5):
    C = builtin("qh_quadric", n)
    print("quadric of dimension %d: blocks %s" % (n, eigen_split(C, C.lookup("h")).dims()))

S = build_semidirect(3, CyclicAction.for_genus(2))
print("exterior algebra on three generators x| Z_5: dim %d, associative %s"
      % (S.dim, S.associativity_failure() is None))
