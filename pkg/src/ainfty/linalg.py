"""Sparse exact linear algebra over Q or Q(i).

Vectors are dicts ``{column: scalar}`` with integer columns; a smaller column
index means "more leading".  :class:`Echelon` keeps rows with distinct leading
columns, which is all that rank, membership, solving and kernels need.  The
pivot set of the final echelon is the set of leading columns of the span, so
results do not depend on insertion order.
"""
from __future__ import annotations

from fractions import Fraction
from heapq import heapify, heappop, heappush


class Echelon:
    """Incremental row echelon form with optional combination tracking.

    With ``track=True`` every stored row remembers which inserted vectors
    (by label) it is a combination of, so a vector reducing to zero yields a
    kernel relation and :meth:`express` can write a target in terms of the
    inserted vectors.
    """

    def __init__(self, track=False):
        self.rows = {}
        self.track = track
        self.combos = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def _reduce(self, v, combo):
        v = dict(v)
        heap = list(v)
        heapify(heap)
        while heap:
            c = heappop(heap)
            if c not in v:
                continue
            row = self.rows.get(c)
            if row is None:
                return v, combo, c
            f = v[c]
            for k, x in row.items():
                cur = v.get(k)
                if cur is None:
                    v[k] = -f * x
                    heappush(heap, k)
                else:
                    s = cur - f * x
                    if s:
                        v[k] = s
                    else:
                        del v[k]
            if combo is not None:
                for k, x in self.combos[c].items():
                    s = combo.get(k, 0) - f * x
                    if s:
                        combo[k] = s
                    else:
                        combo.pop(k, None)
        return v, combo, None

    def add(self, v, label=None):
        """Insert ``v``; return True when it enlarged the span.

        With tracking on, a dependent vector returns the kernel relation
        (dict label -> coefficient) instead of False.
        """
        combo = {label: Fraction(1)} if self.track else None
        r, combo, lead = self._reduce(v, combo)
        if lead is None:
            if self.track:
                return combo
            return False
        inv = 1 / r[lead] if not isinstance(r[lead], int) else Fraction(1, r[lead])
        self.rows[lead] = {k: x * inv for k, x in r.items()}
        if self.track:
            self.combos[lead] = {k: x * inv for k, x in combo.items()}
        return True

    def contains(self, v):
        return self._reduce(v, None)[2] is None

    def leading_remainder(self, v):
        """Reduce ``v``; return (remainder, leading column or None)."""
        r, _, lead = self._reduce(v, None)
        return r, lead

    def express(self, v):
        """Coefficients (by label) writing ``v`` in the tracked span, or None."""
        if not self.track:
            raise ValueError("express needs a tracking echelon")
        v = dict(v)
        out = {}
        heap = list(v)
        heapify(heap)
        while heap:
            c = heappop(heap)
            if c not in v:
                continue
            row = self.rows.get(c)
            if row is None:
                return None
            f = v[c]
            for k, x in row.items():
                cur = v.get(k)
                if cur is None:
                    v[k] = -f * x
                    heappush(heap, k)
                else:
                    s = cur - f * x
                    if s:
                        v[k] = s
                    else:
                        del v[k]
            for k, x in self.combos[c].items():
                s = out.get(k, 0) + f * x
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out


def rank(vectors):
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def nullspace(vectors):
    """Basis of relations sum_j x_j vectors[j] = 0, as dicts index -> coeff."""
    e = Echelon(track=True)
    out = []
    for j, v in enumerate(vectors):
        res = e.add(v, label=j)
        if res is not True:
            out.append(res)
    return out


def solve(vectors, target):
    """Some x with sum_j x_j vectors[j] = target, or None if infeasible."""
    e = Echelon(track=True)
    for j, v in enumerate(vectors):
        e.add(v, label=j)
    return e.express(target)


def mat_vec(M, x):
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in M]


def mat_mul(A, B):
    n, m = len(A), len(B[0])
    inner = len(B)
    return [[sum((A[i][k] * B[k][j] for k in range(inner) if A[i][k] and B[k][j]),
                 Fraction(0)) for j in range(m)] for i in range(n)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def columns_as_vectors(M):
    """Dense matrix columns as sparse dict vectors (row index as column key)."""
    n = len(M)
    out = []
    for j in range(len(M[0]) if M else 0):
        out.append({i: M[i][j] for i in range(n) if M[i][j]})
    return out


def matrix_rank(M):
    return rank(columns_as_vectors(M))


def matrix_kernel(M):
    """Kernel basis of a dense matrix as dense column lists."""
    cols = columns_as_vectors(M)
    ncols = len(cols)
    return [[rel.get(j, Fraction(0)) for j in range(ncols)] for rel in nullspace(cols)]
