"""Dense univariate polynomials over Q or Q(i), coefficient lists low degree first."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .scalars import GaussianRational, render_scalar


def _exact(c):
    return c if isinstance(c, GaussianRational) else Fraction(c)


def normalize(p):
    p = [_exact(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def deg(p):
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    return normalize([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                      for i in range(n)])


def sub(p, q):
    return add(p, [-c for c in q])


def mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] = out[i + j] + a * b
    return normalize(out)


def scale(p, c):
    return normalize([c * a for a in p])


def monic(p):
    p = normalize(p)
    return scale(p, 1 / p[-1]) if p else p


def divmod_(p, q):
    p, q = normalize(p), normalize(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    r = list(p)
    lead = q[-1]
    while r and len(r) >= len(q):
        c = r[-1] / lead
        shift = len(r) - len(q)
        quo[shift] = c
        for i, b in enumerate(q):
            r[i + shift] = r[i + shift] - c * b
        r = normalize(r)
    return normalize(quo), r


def mod(p, q):
    return divmod_(p, q)[1]


def derivative(p):
    return normalize([i * p[i] for i in range(1, len(p))])


def gcd_(p, q):
    p, q = normalize(p), normalize(q)
    while q:
        p, q = q, mod(p, q)
    return monic(p)


def xgcd(p, q):
    """(g, s, t) with s*p + t*q = g = monic gcd."""
    r0, r1 = normalize(p), normalize(q)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    lead = r0[-1]
    return scale(r0, 1 / lead), scale(s0, 1 / lead), scale(t0, 1 / lead)


def power(p, e):
    out = [Fraction(1)]
    for _ in range(e):
        out = mul(out, p)
    return out


def squarefree_decomposition(p):
    """Yun's algorithm: monic p = prod_i s_i^i with s_i squarefree, coprime."""
    p = monic(p)
    out = []
    if deg(p) < 1:
        return out
    a = gcd_(p, derivative(p))
    b = divmod_(p, a)[0]
    c = divmod_(derivative(p), a)[0]
    d = sub(c, derivative(b))
    i = 1
    while deg(b) > 0:
        a = gcd_(b, d)
        b = divmod_(b, a)[0]
        c = divmod_(d, a)[0]
        if deg(a) > 0:
            out.append((monic(a), i))
        i += 1
        d = sub(c, derivative(b))
    return out


def _divisors(n):
    n = abs(n)
    out = []
    k = 1
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            out.append(n // k)
        k += 1
    return sorted(set(out))


def rational_roots(p):
    """Distinct rational roots of a polynomial with rational coefficients."""
    p = normalize(p)
    if any(isinstance(c, GaussianRational) and c.im for c in p):
        return []
    p = [c.re if isinstance(c, GaussianRational) else c for c in p]
    roots = []
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
        p = p[k:]
    if len(p) <= 1:
        return roots
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    for num in _divisors(ints[0]):
        for dd in _divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * num, dd)
                if r not in roots and evaluate(p, r) == 0:
                    roots.append(r)
    return sorted(roots)


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def render(p, var="x"):
    p = normalize(p)
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if not c:
            continue
        cs = render_scalar(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        mono = "" if i == 0 else (var if i == 1 else "%s^%d" % (var, i))
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = "%s*%s" % (cs, mono)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)
