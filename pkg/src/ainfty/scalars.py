"""Exact base fields: the rationals and the Gaussian rationals Q(i).

Rational scalars are plain :class:`fractions.Fraction` values.  Gaussian
rationals use :class:`GaussianRational`, which interoperates with ``int`` and
``Fraction`` through the usual arithmetic operators, so generic code never has
to branch on the field.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

Q = "Q"
QI = "QI"
FIELDS = (Q, QI)


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Rational)):
            return GaussianRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (GaussianRational(1) / self) ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return "GaussianRational(%s, %s)" % (self.re, self.im)

    def __str__(self):
        return render_scalar(self)


I = GaussianRational(0, 1)


def coerce(x, field=Q):
    """Convert ``x`` to the canonical scalar type of ``field``."""
    if field == QI:
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(x)
    if isinstance(x, GaussianRational):
        if x.im:
            raise ValueError("non-real scalar %s over Q" % render_scalar(x))
        return x.re
    return Fraction(x)


def is_real(x):
    return not isinstance(x, GaussianRational) or x.im == 0


def _render_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def render_scalar(x):
    """Canonical text form: ``p``, ``p/q``, ``i``-multiples or ``(a+b*i)``."""
    if not isinstance(x, GaussianRational):
        return _render_rational(x)
    if x.im == 0:
        return _render_rational(x.re)
    if x.re == 0:
        if x.im == 1:
            return "i"
        if x.im == -1:
            return "-i"
        return "%s*i" % _render_rational(x.im)
    sign = "+" if x.im > 0 else "-"
    im = abs(x.im)
    im_s = "i" if im == 1 else "%s*i" % _render_rational(im)
    return "(%s%s%s)" % (_render_rational(x.re), sign, im_s)
