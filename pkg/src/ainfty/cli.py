"""Command-line front end: read a problem, run one computation, write a report.

Exit status: 0 on success, 1 when the mathematics says no (failed
Maurer-Cartan check, unstable windows, non-coboundary, non-associative
presentation, replay mismatch), 2 on malformed input or bad flags.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import fdalg, koszul, mcgauge, upoly
from .cyclic import CyclicAction, build_semidirect
from .errors import InputError, MathFailure, NotStabilized, ValidationError
from .exparse import canonical_json, make_report, parse_problem
from .scalars import render_scalar
from .series import render_series

COMMANDS = ("mc-check", "hh", "invariant-hh", "twisted-hh", "jacobian", "exactness",
            "classify-cubic", "normal-form", "qh-split", "semidirect-check")


class _Failed(Exception):
    """A computation finished with a negative mathematical answer."""

    def __init__(self, result):
        super().__init__("failed")
        self.result = result


def _positive(name, minimum):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError("%s must be an integer" % name) from None
        if v < minimum:
            raise argparse.ArgumentTypeError("%s must be at least %d" % (name, minimum))
        return v
    return conv


def build_parser():
    ap = argparse.ArgumentParser(prog="ainfty", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", nargs="?", help="problem file ('-' for stdin)")
    ap.add_argument("-o", "--output", help="write the report here instead of stdout")
    ap.add_argument("--trunc", type=_positive("--trunc", 1), help="override the truncation order")
    ap.add_argument("--window", type=_positive("--window", 1),
                    help="stabilisation margin; the default scans for a stable window")
    ap.add_argument("--genus", type=_positive("--genus", 2),
                    help="genus g (normal-form, semidirect-check)")
    ap.add_argument("--replay", help="report whose gauge log is replayed (normal-form)")
    ap.add_argument("--builtin", nargs="+", metavar=("NAME", "PARAM"),
                    help="builtin algebra for qh-split, e.g. qh_intersection 3")
    ap.add_argument("--element", help="element to split by (default h if present, else c1)")
    return ap


# ---------------------------------------------------------------------------
# helpers

def _read_problem(args):
    if args.input is None:
        raise ValidationError("command %s needs a problem file" % args.command)
    if args.input == "-":
        data = sys.stdin.buffer.read()
    else:
        try:
            with open(args.input, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise ValidationError("cannot read %s: %s" % (args.input, exc.strerror)) from None
    return parse_problem(data, trunc_override=args.trunc)


def _need(prob, *what):
    for w in what:
        if getattr(prob, w) is None:
            label = {"W": "a 'W =' line", "action": "a 'group' line",
                     "ring": "a ring block"}[w]
            raise ValidationError("this command needs %s" % label)


def _pair(prob):
    _need(prob, "W")
    return mcgauge.MCPair(prob.W, prob.eta)


def _genus(prob, args):
    if args.genus is not None:
        return args.genus
    if prob is not None and prob.action is not None and prob.action.order % 2 == 1 \
            and prob.action.order >= 5:
        return (prob.action.order - 1) // 2
    raise ValidationError("--genus is required")


# ---------------------------------------------------------------------------
# commands

def cmd_mc_check(args, prob):
    v = mcgauge.mc_check(_pair(prob))
    if not v.ok:
        raise _Failed(v.as_dict())
    return v.as_dict()


def _hh_result(fn, *a, **kw):
    try:
        return fn(*a, **kw).as_dict()
    except NotStabilized as exc:
        if exc.partial is not None:
            raise _Failed(exc.partial.as_dict()) from None
        raise


def cmd_hh(args, prob):
    return _hh_result(koszul.hh_ranks, _pair(prob), margin=args.window, with_basis=True)


def cmd_invariant_hh(args, prob):
    _need(prob, "action")
    return _hh_result(koszul.invariant_hh, _pair(prob), prob.action, margin=args.window)


def cmd_twisted_hh(args, prob):
    _need(prob, "action")
    return koszul.twisted_sector_ranks(_pair(prob), prob.action, margin=args.window).as_dict()


def cmd_jacobian(args, prob):
    _need(prob, "W")
    rep = koszul.jacobian_ring(prob.W, raise_on_unstable=False)
    if not rep.stabilized:
        raise _Failed(rep.as_dict())
    return rep.as_dict()


def cmd_exactness(args, prob):
    _need(prob, "W")
    return koszul.koszul_exactness(prob.W, margin=args.window).as_dict()


def cmd_classify_cubic(args, prob):
    _need(prob, "W")
    action = prob.action or CyclicAction.trivial(prob.W.ctx.nvars)
    return mcgauge.classify_cubic(prob.W, action).as_dict()


def cmd_normal_form(args, prob):
    _need(prob, "W", "action")
    g = _genus(prob, args)
    rep = mcgauge.normal_form(prob.W, prob.action, g)
    out = rep.as_dict()
    if args.replay is not None:
        try:
            with open(args.replay, "r", encoding="utf-8") as fh:
                old = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ValidationError("cannot read replay report %s: %s" % (args.replay, exc)) \
                from None
        res = old.get("result", old)
        if "gauge_log" not in res or "output" not in res:
            raise ValidationError("replay file has no gauge_log/output")
        replayed = mcgauge.replay_log(prob.W, res["gauge_log"])
        text = render_series(replayed)
        out["replay"] = {"output": text, "expected": res["output"],
                         "matches": text == res["output"]}
        if text != res["output"]:
            raise _Failed(out)
    if rep.status != "ok":
        raise _Failed(out)
    return out


def _algebra(args, prob):
    if args.builtin:
        return fdalg.builtin(args.builtin[0], *args.builtin[1:])
    if prob is None:
        raise ValidationError("qh-split needs --builtin or a problem file with a ring block")
    _need(prob, "ring")
    return fdalg.from_presentation(prob.ring)


def cmd_qh_split(args, prob):
    A = _algebra(args, prob)
    if args.element == "c1" and A.c1 is not None and "c1" not in A.labels:
        a = A.c1
        label = "c1"
    elif args.element:
        a = A.lookup(args.element)
        label = args.element
    elif "h" in A.labels or "h" in A.named:
        a = A.lookup("h")
        label = "h"
    elif A.c1 is not None:
        a = A.c1
        label = "c1"
    else:
        raise ValidationError("the algebra has no c1; pass --element")
    sp = fdalg.eigen_split(A, a)
    one = A.one()
    total = {}
    for b in sp.blocks:
        total = A.add(total, b.idempotent)
    orthogonal = all(not A.mul(b.idempotent, c.idempotent)
                     for b in sp.blocks for c in sp.blocks if b is not c)
    blocks = []
    for b in sp.blocks:
        blocks.append({
            "key": b.key(),
            "eigenvalue": render_scalar(b.eigenvalue) if b.eigenvalue is not None else None,
            "multiplicity": b.multiplicity,
            "dim": b.dim,
            "idempotent": A.render(b.idempotent),
            "idempotent_ok": fdalg.idempotent_check(A, b.idempotent),
        })
    return {"algebra": A.name, "dim": A.dim, "element": label, "element_value": A.render(a),
            "minimal_polynomial": upoly.render(sp.minpoly), "eigenvalues": sp.dims(),
            "blocks": blocks, "idempotents_sum_to_one": A.equal(total, one),
            "idempotents_orthogonal": orthogonal}


def cmd_semidirect_check(args, prob):
    if prob is not None and prob.action is not None:
        action = prob.action
        nvars = prob.action.nvars
    else:
        action = CyclicAction.for_genus(_genus(prob, args))
        nvars = 3
    A = build_semidirect(nvars, action)
    return {"algebra": A.name, "dim": A.dim, "expected_dim": action.order * 2 ** nvars,
            "associative": A.associativity_failure() is None,
            "unit_ok": A.is_unit(A.unit)}


_DISPATCH = {
    "mc-check": cmd_mc_check, "hh": cmd_hh, "invariant-hh": cmd_invariant_hh,
    "twisted-hh": cmd_twisted_hh, "jacobian": cmd_jacobian, "exactness": cmd_exactness,
    "classify-cubic": cmd_classify_cubic, "normal-form": cmd_normal_form,
    "qh-split": cmd_qh_split, "semidirect-check": cmd_semidirect_check,
}

_OPTIONAL_INPUT = ("qh-split", "semidirect-check")


def _error_result(exc):
    d = {"error": type(exc).__name__, "message": exc.args[0] if exc.args else str(exc)}
    for attr in ("line", "offset", "bracket", "degree", "triple"):
        v = getattr(exc, attr, None)
        if v is not None:
            d[attr] = list(v) if isinstance(v, tuple) else v
    return d


def execute(args):
    """Run one parsed command; returns (exit status, report dict)."""
    digest = None
    try:
        if args.replay is not None and args.command != "normal-form":
            raise ValidationError("--replay only applies to normal-form")
        if args.builtin is not None and args.command != "qh-split":
            raise ValidationError("--builtin only applies to qh-split")
        prob = None
        if args.input is not None or args.command not in _OPTIONAL_INPUT:
            prob = _read_problem(args)
            digest = prob.digest
        result = _DISPATCH[args.command](args, prob)
        return 0, make_report(args.command, digest, result)
    except _Failed as f:
        return 1, make_report(args.command, digest, f.result, status="failed")
    except MathFailure as exc:
        return 1, make_report(args.command, digest, _error_result(exc), status="failed")
    except InputError as exc:
        return 2, make_report(args.command, digest, _error_result(exc), status="input-error")


def run(argv=None):
    """Parse ``argv`` and run the command; returns (exit status, report dict)."""
    return execute(build_parser().parse_args(argv))


def main(argv=None):
    args = build_parser().parse_args(argv)
    status, report = execute(args)
    text = canonical_json(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status:
        res = report["result"]
        msg = res.get("message") if isinstance(res, dict) else None
        sys.stderr.write("%s: %s\n" % (report["status"], msg or "see report"))
    return status


if __name__ == "__main__":
    sys.exit(main())
