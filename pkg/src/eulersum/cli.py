"""Command-line front end: ``eulersum <subcommand> ...``.

Exit status: 0 success, 2 sum not convergent, 3 infinite summand,
4 numeric verification mismatch, 1 any other error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Sequence

import mpmath

from . import __version__
from .bernoulli import bernoulli_exact
from .catalog import emit_latex, load_catalog, verify_catalog
from .directsum import DirectSumConfig, TailOrderError, direct_euler_sum
from .numerics import digits_to_bits, eval_symexpr, polygamma_hp
from .pslq import ConstantBasis, discover
from .residue import closed_form_fast
from .rfparse import InfiniteSummandError, NotConvergentError, parse_ratfunc
from .symbolic import GAMMA, PI, Log, Psi, SymbolicExpression, Zeta, simplify_special_values

DIGITS_ENV = "EULERSUM_DIGITS"

EXIT_OK, EXIT_ERROR, EXIT_NOT_CONVERGENT, EXIT_INFINITE, EXIT_MISMATCH = 0, 1, 2, 3, 4

_EXPR_SCHEMA = {"type": "object", "required": ["terms"], "properties": {"terms": {"type": "array"}}}
_NUM = {"type": "string", "pattern": r"^-?\d+(\.\d+)?$"}

SCHEMAS = {
    "closed-form": {
        "type": "object",
        "required": ["input", "expression", "text", "latex", "provenance"],
        "properties": {
            "input": {"type": "string"},
            "expression": _EXPR_SCHEMA,
            "text": {"type": "string"},
            "latex": {"type": "string"},
            "provenance": {"type": "object"},
        },
    },
    "eval": {
        "type": "object",
        "required": ["input", "digits", "method"],
        "properties": {
            "input": {"type": "string"},
            "digits": {"type": "integer"},
            "method": {"enum": ["closed", "direct", "both"]},
            "closed": _NUM,
            "direct": _NUM,
            "difference": {"type": "number"},
            "agree": {"type": "boolean"},
        },
    },
    "direct": {
        "type": "object",
        "required": ["input", "digits", "terms", "value", "error_bound"],
        "properties": {
            "input": {"type": "string"},
            "digits": {"type": "integer"},
            "terms": {"type": "integer"},
            "value": _NUM,
            "error_bound": {"type": "number"},
        },
    },
    "discover": {
        "type": "object",
        "required": ["input", "status", "basis"],
        "properties": {
            "input": {"type": "string"},
            "status": {"enum": ["found", "none", "ambiguous", "precision_exhausted"]},
            "basis": {"type": "array", "items": {"type": "string"}},
            "relation": {"type": ["array", "null"], "items": {"type": "integer"}},
            "expression": _EXPR_SCHEMA,
            "text": {"type": "string"},
        },
    },
    "verify-catalog": {
        "type": "object",
        "required": ["digits", "terms", "passed", "total", "fixtures"],
        "properties": {
            "digits": {"type": "integer"},
            "terms": {"type": "integer"},
            "passed": {"type": "integer"},
            "total": {"type": "integer"},
            "fixtures": {
                "type": "array",
                "items": {"type": "object", "required": ["id", "passed", "difference", "speedup"]},
            },
        },
    },
    "polygamma": {
        "type": "object",
        "required": ["order", "x", "digits", "value"],
        "properties": {"order": {"type": "integer"}, "x": {"type": "string"}, "digits": {"type": "integer"}, "value": _NUM},
    },
    "bernoulli": {
        "type": "object",
        "required": ["n", "numerator", "denominator"],
        "properties": {"n": {"type": "integer"}, "numerator": {"type": "string"}, "denominator": {"type": "string"}},
    },
}


def _fixed(x, digits: int) -> str:
    with mpmath.workprec(digits_to_bits(digits + 5)):
        return mpmath.nstr(x, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


_ATOM_TEXT = re.compile(r"(gamma|pi|zeta\((\d+)\)|log\((\d+)\)|psi\((\d+),(\d+)(?:/(\d+))?\))(?:\^(\d+))?$")


def parse_monomial(text: str) -> SymbolicExpression:
    """``"zeta(3)^2"``, ``"zeta(3)*zeta(5)"``, ``"pi^2*log(2)"``, ``"psi(1,1/3)"``."""
    out = SymbolicExpression.const(1)
    for part in text.replace(" ", "").split("*"):
        m = _ATOM_TEXT.match(part)
        if not m:
            raise ValueError(f"cannot read basis factor {part!r}")
        name = m.group(1)
        if name == "gamma":
            atom = GAMMA
        elif name == "pi":
            atom = PI
        elif name.startswith("zeta"):
            atom = Zeta(int(m.group(2)))
        elif name.startswith("log"):
            atom = Log(int(m.group(3)))
        else:
            atom = Psi(int(m.group(4)), Fraction(int(m.group(5)), int(m.group(6) or 1)))
        out = out * SymbolicExpression.atom(atom, int(m.group(7) or 1))
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_closed_form(args) -> int:
    R = parse_ratfunc(args.expr)
    cf = closed_form_fast(R)
    expr = simplify_special_values(cf.expression) if args.simplify else cf.expression
    latex = emit_latex(expr)
    payload = {
        "input": R.to_text(),
        "expression": expr.to_json(),
        "text": expr.to_text(),
        "latex": latex,
        "provenance": cf.provenance,
    }
    _emit(args, payload, latex if args.format == "latex" else expr.to_text())
    return EXIT_OK


def cmd_eval(args) -> int:
    R = parse_ratfunc(args.expr)
    D = args.digits
    payload = {"input": R.to_text(), "digits": D, "method": args.method}
    lines = []
    closed = direct = None
    if args.method in ("closed", "both"):
        closed = eval_symexpr(closed_form_fast(R).expression, D)
        payload["closed"] = _fixed(closed, D)
        lines.append(("closed " if args.method == "both" else "") + payload["closed"])
    if args.method in ("direct", "both"):
        direct = direct_euler_sum(R, DirectSumConfig(digits=D, terms=args.terms)).value
        payload["direct"] = _fixed(direct, D)
        lines.append(("direct " if args.method == "both" else "") + payload["direct"])
    status = EXIT_OK
    if closed is not None and direct is not None:
        with mpmath.workprec(digits_to_bits(D + 20)):
            diff = abs(closed - direct)
            agree = bool(diff < mpmath.mpf(10) ** (-(D - 10)))
        payload["difference"] = float(diff)
        payload["agree"] = agree
        lines.append(f"difference {mpmath.nstr(diff, 3)}")
        if not agree:
            status = EXIT_MISMATCH
            print(f"error: closed form and direct sum differ by {mpmath.nstr(diff, 3)}", file=sys.stderr)
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_direct(args) -> int:
    R = parse_ratfunc(args.expr)
    res = direct_euler_sum(R, DirectSumConfig(digits=args.digits, terms=args.terms))
    payload = {
        "input": R.to_text(),
        "digits": args.digits,
        "terms": args.terms,
        "value": _fixed(res.value, args.digits),
        "error_bound": float(res.error_bound),
    }
    _emit(args, payload, payload["value"])
    return EXIT_OK


def cmd_discover(args) -> int:
    R = parse_ratfunc(args.expr)
    basis = None
    if args.basis:
        basis = ConstantBasis.from_exprs([parse_monomial(b) for b in args.basis])
    res = discover(R, basis, args.digits, max_coeff=args.max_coeff, terms=min(args.terms, 10_000))
    payload = {
        "input": R.to_text(),
        "status": res.status,
        "basis": [e.name for e in res.basis.entries],
        "relation": res.relation.coefficients,
    }
    if res.closed_form is not None:
        expr = res.closed_form.expression
        payload["expression"] = expr.to_json()
        payload["text"] = expr.to_text()
        text = emit_latex(expr) if args.format == "latex" else expr.to_text()
    else:
        text = f"no relation ({res.status})"
    _emit(args, payload, text)
    return EXIT_OK if res.status == "found" else EXIT_ERROR


def cmd_verify_catalog(args) -> int:
    fixtures = load_catalog(args.catalog)
    if args.filter:
        fixtures = [f for f in fixtures if args.filter in f.id]
    rep = verify_catalog(fixtures, args.digits, args.terms, args.jobs)
    payload = {
        "digits": rep.digits,
        "terms": rep.terms,
        "passed": rep.passed,
        "total": len(rep.entries),
        "seconds": rep.seconds,
        "fixtures": rep.records(),
    }
    _emit(args, payload, rep.table())
    return EXIT_OK if rep.all_passed else EXIT_MISMATCH


def cmd_polygamma(args) -> int:
    x = Fraction(args.x)
    value = polygamma_hp(args.order, x, args.digits)
    payload = {"order": args.order, "x": str(x), "digits": args.digits, "value": _fixed(value, args.digits)}
    _emit(args, payload, payload["value"])
    return EXIT_OK


def cmd_bernoulli(args) -> int:
    b = bernoulli_exact(args.n)
    payload = {"n": args.n, "numerator": str(b.numerator), "denominator": str(b.denominator)}
    _emit(args, payload, str(b))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    return int(raw) if raw else 100


def _at_least(lo: int):
    def conv(s: str) -> int:
        v = int(float(s)) if re.fullmatch(r"\d+(\.\d+)?[eE]\d+", s) else int(s)
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}")
        return v

    return conv


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is taken by "sum not convergent"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--digits", "-d", type=_at_least(10), default=_default_digits(),
                        help=f"decimal digits (default 100, or ${DIGITS_ENV})")
    common.add_argument("--terms", "-N", type=_at_least(10), default=100_000, help="explicit terms for direct summation")
    common.add_argument("--format", "-f", choices=["text", "latex", "json"], default="text")
    common.add_argument("--simplify", action="store_true", help="rewrite tabulated polygamma values")

    p = _Parser(prog="eulersum", description="Closed forms of sum_{k>=1} R(k) H_k.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("closed-form", parents=[common], help="exact closed form")
    s.add_argument("expr")
    s.set_defaults(func=cmd_closed_form)

    s = sub.add_parser("eval", parents=[common], help="numeric value")
    s.add_argument("expr")
    s.add_argument("--method", choices=["closed", "direct", "both"], default="closed")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("direct", parents=[common], help="direct summation with Euler-Maclaurin tail")
    s.add_argument("expr")
    s.set_defaults(func=cmd_direct)

    s = sub.add_parser("discover", parents=[common], help="recover a formula with PSLQ")
    s.add_argument("expr")
    s.add_argument("--basis", nargs="*", help='constants such as "zeta(3)^2" (default: automatic)')
    s.add_argument("--max-coeff", type=int, default=10**8)
    s.set_defaults(func=cmd_discover)

    s = sub.add_parser("verify-catalog", parents=[common], help="check every bundled fixture")
    s.add_argument("--catalog", default=None, help="fixture file (default: bundled)")
    s.add_argument("--jobs", "-j", type=_at_least(1), default=1)
    s.add_argument("--filter", default=None, help="only fixtures whose id contains this text")
    s.set_defaults(func=cmd_verify_catalog)

    s = sub.add_parser("polygamma", parents=[common], help="psi^(n)(x) for rational x")
    s.add_argument("order", type=int)
    s.add_argument("x")
    s.set_defaults(func=cmd_polygamma)

    s = sub.add_parser("bernoulli", parents=[common], help="exact Bernoulli number B_n")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_bernoulli)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotConvergentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGENT
    except InfiniteSummandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFINITE
    except (ValueError, ZeroDivisionError, ArithmeticError, OSError, TailOrderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
