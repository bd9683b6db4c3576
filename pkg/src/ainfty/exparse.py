"""Expression and problem-file parsing, canonical report serialisation.

Expression grammar (whitespace is insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' nat)*
    atom   := rational | name | 'i' | 'e{' idx (',' idx)* '}' | '(' expr ')'

Rationals are ``p`` or ``p/q``.  ``i`` is the Gaussian unit and is only
allowed over QI.  ``e{1,2}`` is the form xi_1 ^ xi_2; products of forms are
wedge products.
"""
from __future__ import annotations

import hashlib
import json
import re
import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .cyclic import CyclicAction
from .errors import (DegreeOverflow, FieldMismatch, ParseError, UnknownVariable,
                     ValidationError)
from .fdalg import RingPresentation
from .polyvec import Polyvector, sort_sign
from .scalars import QI, Q, GaussianRational, FIELDS
from .series import SeriesContext, TruncatedSeries

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<rat>\d+(?:/\d+)?)
  | (?P<form>e\{)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^(),}])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


class _Parser:
    """Evaluates an expression to {(monomial, form): coeff} without truncation."""

    def __init__(self, text, names, field_tag, line=1, base=0, allow_forms=True):
        self.text = text
        self.names = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        self.field = field_tag
        self.line = line
        self.base = base
        self.allow_forms = allow_forms
        self.toks = self._lex()
        self.k = 0

    # diagnostics -----------------------------------------------------------
    def _err(self, cls, msg, pos):
        return cls(msg, line=self.line, offset=self.base + _byte_offset(self.text, pos))

    def _lex(self):
        toks = []
        pos = 0
        while pos < len(self.text):
            m = _TOKEN.match(self.text, pos)
            if not m:
                raise self._err(ParseError, "unexpected character %r" % self.text[pos], pos)
            kind = m.lastgroup
            if kind != "ws":
                toks.append(_Tok(kind, m.group(), pos))
            pos = m.end()
        toks.append(_Tok("end", "", len(self.text)))
        return toks

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, text):
        t = self.take()
        if t.text != text:
            found = t.text or "end of input"
            raise self._err(ParseError, "expected %r, found %r" % (text, found), t.pos)
        return t

    # values ----------------------------------------------------------------
    def _const(self, c):
        return {((0,) * self.nvars, ()): c}

    @staticmethod
    def _add(a, b, sign=1):
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, 0) + sign * c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    @staticmethod
    def _mul(a, b):
        out = {}
        for (m1, I1), c1 in a.items():
            for (m2, I2), c2 in b.items():
                s, K = sort_sign(I1 + I2)
                if not s:
                    continue
                key = (tuple(x + y for x, y in zip(m1, m2)), K)
                v = out.get(key, 0) + s * c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out

    # grammar ---------------------------------------------------------------
    def parse(self):
        """Return (value, [(term value, term start position)])."""
        terms = []
        total = {}
        sign = 1
        if self.peek().text in "+-" and self.peek().kind == "op":
            sign = -1 if self.take().text == "-" else 1
        while True:
            start = self.peek().pos
            v = self.term()
            terms.append((v, start))
            total = self._add(total, v, sign)
            t = self.peek()
            if t.kind == "op" and t.text in ("+", "-"):
                self.take()
                sign = -1 if t.text == "-" else 1
                continue
            break
        t = self.peek()
        if t.kind != "end":
            raise self._err(ParseError, "expected '+', '-', '*' or end of input, found %r"
                            % t.text, t.pos)
        return total, terms

    def expr(self):
        sign = 1
        if self.peek().kind == "op" and self.peek().text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        total = self._add({}, self.term(), sign)
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            total = self._add(total, self.term(), sign)
        return total

    def term(self):
        v = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            v = self._mul(v, self.factor())
        return v

    def factor(self):
        v = self.atom()
        while self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            t = self.take()
            if t.kind != "rat" or "/" in t.text:
                raise self._err(ParseError, "expected a natural number exponent", t.pos)
            e = int(t.text)
            out = self._const(Fraction(1))
            for _ in range(e):
                out = self._mul(out, v)
            v = out
        return v

    def atom(self):
        t = self.take()
        if t.kind == "rat":
            return self._const(Fraction(t.text))
        if t.kind == "form":
            if not self.allow_forms:
                raise self._err(ParseError, "forms are not allowed here", t.pos)
            idx = []
            while True:
                n = self.take()
                if n.kind != "rat" or "/" in n.text:
                    raise self._err(ParseError, "expected a form index", n.pos)
                i = int(n.text)
                if i < 1 or i > self.nvars:
                    raise self._err(ValidationError, "form index %d out of range" % i, n.pos)
                idx.append(i - 1)
                sep = self.take()
                if sep.text == "}":
                    break
                if sep.text != ",":
                    raise self._err(ParseError, "expected ',' or '}', found %r" % sep.text,
                                    sep.pos)
            s, I = sort_sign(idx)
            if not s:
                return {}
            return {((0,) * self.nvars, I): Fraction(s)}
        if t.kind == "name":
            if t.text in self.names:
                e = [0] * self.nvars
                e[self.names[t.text]] = 1
                return {(tuple(e), ()): Fraction(1)}
            if t.text == "i":
                if self.field != QI:
                    raise self._err(FieldMismatch, "the Gaussian unit i needs field QI", t.pos)
                return self._const(GaussianRational(0, 1))
            raise self._err(UnknownVariable, "unknown variable %r" % t.text, t.pos)
        if t.kind == "op" and t.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        found = t.text or "end of input"
        raise self._err(ParseError, "expected a number, variable or '(', found %r" % found,
                        t.pos)


def _evaluate(text, ctx, line, base, allow_forms):
    p = _Parser(text, ctx.names, ctx.field, line, base, allow_forms)
    total, terms = p.parse()
    for v, pos in terms:
        for (m, _), c in v.items():
            if sum(m) > ctx.trunc:
                raise p._err(DegreeOverflow, "term of degree %d exceeds truncation %d"
                             % (sum(m), ctx.trunc), pos)
    return total


def parse_poly(text: str, ctx: SeriesContext, line=1, base=0) -> TruncatedSeries:
    """Parse a polynomial in the variables of ``ctx``."""
    val = _evaluate(text, ctx, line, base, allow_forms=False)
    return TruncatedSeries(ctx, {m: ctx.scalar(c) for (m, _), c in val.items()})


def parse_polyvector(text: str, ctx: SeriesContext, line=1, base=0) -> Polyvector:
    """Parse a sum of ``coeff * e{...}`` terms into a polyvector."""
    val = _evaluate(text, ctx, line, base, allow_forms=True)
    comps = {}
    for (m, I), c in val.items():
        comps.setdefault(I, {})[m] = ctx.scalar(c)
    return Polyvector(ctx, {I: TruncatedSeries(ctx, t) for I, t in comps.items()})


def parse_scalar(text: str, field_tag=Q):
    """Parse a constant such as ``-3/2``, ``i`` or ``(1/2+1/2*i)``."""
    ctx = SeriesContext(1, 1, field_tag, ("__unused__",))
    f = parse_poly(text, ctx)
    if any(sum(m) for m in f.terms):
        raise ParseError("expected a constant, got %r" % text)
    return f.coeff((0,)) if f.terms else ctx.scalar(0)


# ---------------------------------------------------------------------------
# problem files

@dataclass
class ProblemFile:
    names: tuple = ()
    field: str = Q
    trunc: Optional[int] = None
    action: Optional[CyclicAction] = None
    W: Optional[TruncatedSeries] = None
    eta: Optional[Polyvector] = None
    ring: Optional[RingPresentation] = None
    digest: str = ""

    @property
    def ctx(self):
        if not self.names or self.trunc is None:
            raise ValidationError("problem has no variables or truncation order")
        return SeriesContext(len(self.names), self.trunc, self.field, tuple(self.names))

    def with_trunc(self, trunc):
        """The same problem re-read at another truncation order."""
        if self._source is None:
            raise ValidationError("problem was not read from text")
        return parse_problem(self._source, trunc_override=trunc)

    _source: Optional[bytes] = dataclasses.field(default=None, repr=False)


_DIRECTIVES = ("vars", "field", "trunc", "group", "W", "eta", "ring")


def parse_problem(data, trunc_override=None) -> ProblemFile:
    """Parse and validate the line-oriented problem format."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("problem file is not UTF-8", offset=exc.start) from None
    prob = ProblemFile(digest=hashlib.sha256(data).hexdigest())
    prob._source = data
    seen = {}
    exprs = {}
    ring = {"basis": None, "degrees": None, "rules": [], "c1": None}
    offset = 0
    for lineno, raw in enumerate(text.splitlines(keepends=True), start=1):
        line_base = offset
        offset += len(raw.encode("utf-8"))
        body = raw.split("#", 1)[0].rstrip("\r\n")
        if not body.strip():
            continue
        lead = len(body) - len(body.lstrip())
        content = body.strip()

        def err(cls, msg, col=0):
            return cls(msg, line=lineno,
                       offset=line_base + len(body[:lead + col].encode("utf-8")))

        head = content.split(None, 1)[0]
        key = head.split("=", 1)[0].strip() if "=" in head else head
        if key not in _DIRECTIVES:
            raise err(ParseError, "unknown directive %r" % key)
        if key != "ring":
            if key in seen:
                raise err(ParseError, "duplicate %r directive (first on line %d)"
                          % (key, seen[key]))
            seen[key] = lineno
        rest = content[len(head):].strip() if key == head else content[len(key):].strip()
        if key in ("W", "eta"):
            if not rest.startswith("="):
                raise err(ParseError, "expected '=' after %s" % key, len(key))
            expr = rest[1:]
            col = body.index("=", lead) + 1
            exprs[key] = (expr, lineno, line_base + len(body[:col].encode("utf-8")))
        elif key == "vars":
            names = rest.split()
            if not names:
                raise err(ParseError, "vars needs at least one name")
            for n in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n) or n == "i" or n == "e":
                    raise err(ValidationError, "invalid variable name %r" % n)
            if len(set(names)) != len(names):
                raise err(ValidationError, "duplicate variable names")
            prob.names = tuple(names)
        elif key == "field":
            if rest not in FIELDS:
                raise err(ParseError, "field must be Q or QI, found %r" % rest)
            prob.field = rest
        elif key == "trunc":
            if not re.fullmatch(r"\d+", rest) or int(rest) < 1:
                raise err(ParseError, "trunc needs a positive integer")
            prob.trunc = int(rest)
        elif key == "group":
            m = re.fullmatch(r"cyclic\s+(\d+)\s+weights((?:\s+\d+)*)", rest)
            if not m:
                raise err(ParseError, "expected 'group cyclic <n> weights <w1> ...'")
            order = int(m.group(1))
            weights = [int(w) for w in m.group(2).split()]
            try:
                prob.action = CyclicAction(order, weights)
            except ValidationError as exc:
                raise err(ValidationError, str(exc)) from None
            prob._group_line = lineno
        elif key == "ring":
            _ring_line(ring, rest, err, lineno, line_base, body)
    if trunc_override is not None:
        prob.trunc = int(trunc_override)
    if prob.action is not None and prob.names and prob.action.nvars != len(prob.names):
        raise ValidationError("group has %d weights for %d variables"
                              % (prob.action.nvars, len(prob.names)),
                              line=getattr(prob, "_group_line", None))
    if prob.names and prob.trunc is None:
        raise ParseError("missing 'trunc' line")
    if exprs:
        if not prob.names:
            raise ParseError("a 'vars' line is required before expressions can be read")
        ctx = prob.ctx
        if "W" in exprs:
            expr, ln, base = exprs["W"]
            prob.W = parse_poly(expr, ctx, ln, base)
        if "eta" in exprs:
            expr, ln, base = exprs["eta"]
            prob.eta = parse_polyvector(expr, ctx, ln, base)
            if prob.eta.form_degrees() not in ([], [2]):
                raise ValidationError("eta must be a sum of 2-form terms", line=ln)
    if ring["basis"] is not None or ring["rules"]:
        prob.ring = _finish_ring(ring)
    return prob


def _ring_line(ring, rest, err, lineno, line_base, body):
    parts = rest.split(None, 1)
    if not parts:
        raise err(ParseError, "empty ring directive")
    sub = parts[0].split("=", 1)[0]
    tail = rest[len(sub):].strip()
    if sub == "basis":
        labels = tail.split()
        if not labels or len(set(labels)) != len(labels):
            raise err(ValidationError, "ring basis needs distinct labels")
        ring["basis"] = (labels, lineno)
    elif sub == "degrees":
        try:
            degs = [int(x) for x in tail.split()]
        except ValueError:
            raise err(ParseError, "ring degrees must be integers") from None
        ring["degrees"] = (degs, lineno)
    elif sub == "rule":
        m = re.fullmatch(r"\s*(\S+?)\s*\*\s*(\S+?)\s*=(.*)", tail)
        if not m:
            raise err(ParseError, "expected 'ring rule a*b = <linear combination>'")
        col = body.index("=") + 1
        ring["rules"].append((m.group(1), m.group(2), m.group(3), lineno,
                              line_base + len(body[:col].encode("utf-8"))))
    elif sub == "c1":
        if not tail.startswith("="):
            raise err(ParseError, "expected 'ring c1 = <linear combination>'")
        col = body.index("=") + 1
        ring["c1"] = (tail[1:], lineno, line_base + len(body[:col].encode("utf-8")))
    else:
        raise err(ParseError, "unknown ring directive %r" % sub)


def _linear_combination(text, labels, unit, line, base):
    """Parse a linear combination of basis labels; constants mean the unit."""
    names = [l for l in labels if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", l)]
    ctx = SeriesContext(len(names), 1, Q, tuple(names))
    p = _Parser(text, names, Q, line, base, allow_forms=False)
    total, _ = p.parse()
    out = {}
    for (m, _), c in total.items():
        if sum(m) > 1:
            raise ValidationError("ring expressions must be linear in the basis labels",
                                  line=line, offset=base)
        if sum(m) == 0:
            if unit is None:
                raise ValidationError("constant term but no unit label", line=line, offset=base)
            out[unit] = out.get(unit, 0) + c
        else:
            out[names[m.index(1)]] = out.get(names[m.index(1)], 0) + c
    del ctx
    return {k: v for k, v in out.items() if v}


def _finish_ring(ring) -> RingPresentation:
    if ring["basis"] is None:
        raise ParseError("ring rules given without 'ring basis'")
    labels, bl = ring["basis"]
    if ring["degrees"] is None:
        degrees = [0] * len(labels)
    else:
        degrees, dl = ring["degrees"]
        if len(degrees) != len(labels):
            raise ValidationError("ring degrees has %d entries for %d basis labels"
                                  % (len(degrees), len(labels)), line=dl)
    unit = "1" if "1" in labels else None
    if unit is None:
        raise ValidationError("ring basis must contain the unit label 1", line=bl)
    rules = {}
    for a, b, expr, ln, base in ring["rules"]:
        for lab in (a, b):
            if lab not in labels:
                raise ValidationError("unknown basis label %r" % lab, line=ln)
        if (a, b) in rules:
            raise ValidationError("duplicate rule for %s*%s" % (a, b), line=ln)
        rules[(a, b)] = _linear_combination(expr, labels, unit, ln, base)
    c1 = None
    if ring["c1"] is not None:
        expr, ln, base = ring["c1"]
        c1 = _linear_combination(expr, labels, unit, ln, base)
    return RingPresentation(labels, degrees, rules, unit_label=unit, c1=c1)


# ---------------------------------------------------------------------------
# reports

def _default(o):
    from .scalars import render_scalar
    if isinstance(o, (Fraction, GaussianRational)):
        return render_scalar(o)
    if isinstance(o, tuple):
        return list(o)
    if hasattr(o, "as_dict"):
        return o.as_dict()
    raise TypeError("cannot serialise %r" % (o,))


def canonical_json(obj) -> str:
    """Sorted keys, fixed indentation, rationals as strings."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False,
                      default=_default) + "\n"


def make_report(command, digest, result, status="ok", extra=None) -> Dict:
    rep = {"command": command, "input_digest": digest, "result": result, "status": status}
    if extra:
        rep.update(extra)
    return rep


def load_report(text):
    return json.loads(text)
