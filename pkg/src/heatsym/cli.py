"""Command-line front end.

Every verb prints one JSON document (sorted keys) on standard output.
Payload arguments may be literal JSON, ``@path`` to read a file, or ``-``
to read standard input.  Exit status: 0 on success, 2 for invalid input,
3 for a mathematical error such as a point on the excluded locus.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import acceptance
from . import burgers as bg
from . import gensym as gs
from . import liealg as la
from . import pointgroup as pg
from . import subalg as sa
from .exact import RatFunc, ScalarExt, ScalarSum, format_ratfunc, rat, rat_str
from .heatexpr import (DomainError, OutsideClassError, SolutionSum, burgers_residual, heat_residual,
                       parse_solution, print_expr)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ payloads


def read_payload(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def load_json(arg: str):
    text = read_payload(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from None


def load_element(arg: str, as_float=False):
    data = load_json(arg)
    if not isinstance(data, dict):
        raise UsageError("an element must be a JSON object")
    return pg.ess_from_json(data, as_float=as_float)


def load_alg(arg: str):
    data = load_json(arg)
    if not isinstance(data, dict):
        raise UsageError("an algebra element must be a JSON object")
    return la.AlgElement.from_json(data)


def load_expr(arg: str) -> SolutionSum:
    return parse_solution(read_payload(arg).strip())


def load_ratfunc(arg: str) -> RatFunc:
    """A rational function of (t, x), read with the expression grammar."""
    s = load_expr(arg)
    out = RatFunc.zero()
    for term in s.terms:
        if term.factors or not term.g.is_zero() or not term.c.is_rational():
            raise UsageError("expected a rational function of t and x")
        out = out + term.A * term.c.r
    return out


def parse_eps(text: str, as_float: bool):
    """Parameter forms: a rational, ``log:q`` (eps = ln q), ``rot:c,s`` and ``quarter:k``."""
    if as_float:
        if ":" in text:
            kind, _, rest = text.partition(":")
            if kind == "log":
                return math.log(float(rat(rest)))
            if kind == "rot":
                return pg.RotParam(*rest.split(",")).angle()
            if kind == "quarter":
                return pg.RotParam.quarter(int(rest)).angle()
            raise UsageError(f"unknown parameter form {kind!r}")
        return float(rat(text))
    if text.startswith("log:"):
        return pg.LogParam(rat(text[4:]))
    if text.startswith("rot:"):
        c, s = text[4:].split(",")
        return pg.RotParam(rat(c), rat(s))
    if text.startswith("quarter:"):
        return pg.RotParam.quarter(int(text[8:]))
    return rat(text)


def scalar_json(u):
    if isinstance(u, float):
        return u
    if isinstance(u, ScalarExt):
        return u.to_json()
    if isinstance(u, ScalarSum):
        return u.to_json()
    return rat_str(u)


def parse_scalar(text: str):
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        data = json.loads(text)
        if isinstance(data, list):
            return ScalarSum([ScalarExt.from_json(m) for m in data])
        return ScalarExt.from_json(data)
    return rat(text)


def num_out(v):
    return v if isinstance(v, float) else rat_str(v)


# ------------------------------------------------------------------ verbs


def cmd_compose(args):
    elems = [load_element(a, args.float) for a in args.elements]
    out = elems[0]
    for e in elems[1:]:
        out = pg.compose(out, e)
    return pg.ess_to_json(out)


def cmd_inverse(args):
    return pg.ess_to_json(pg.inverse(load_element(args.element, args.float)))


def cmd_apply_point(args):
    phi = load_element(args.element, args.float)
    u = float(parse_scalar(args.u)) if args.float else parse_scalar(args.u)
    tt, xt, ut = pg.apply_point(phi, (rat(args.t), rat(args.x), u))
    return {"t": num_out(tt), "x": num_out(xt), "u": scalar_json(ut)}


def cmd_apply_solution(args):
    out = pg.apply_solution(load_element(args.element), load_expr(args.expr))
    return {"expr": print_expr(out)}


def cmd_exp(args):
    X = load_alg(args.X)
    eps = parse_eps(args.eps, args.float)
    if args.float:
        return pg.ess_to_json(pg.exp_ess(tuple(float(v) for v in X.coeffs), eps))
    return pg.ess_to_json(pg.exp_ess(X, eps))


def cmd_push(args):
    phi = load_element(args.element, args.float)
    out = la.pushforward(phi, load_alg(args.X))
    if args.closed and la.pushforward_closed(phi, load_alg(args.X)) != out and not args.float:
        raise ArithmeticError("closed form and elementary chain disagree")
    return out.to_json()


def cmd_bracket(args):
    return la.bracket(load_alg(args.X), load_alg(args.Y)).to_json()


def cmd_ad(args):
    X = load_alg(args.X)
    M = la.ad_matrix_group(X) if args.group else la.ad_matrix(X)
    return {"basis": list(la.BASIS_NAMES), "matrix": [[rat_str(v) for v in row] for row in M]}


def cmd_canonicalize(args):
    data = load_json(args.subalgebra)
    if not isinstance(data, list) or not all(isinstance(v, dict) for v in data):
        raise UsageError("a subalgebra must be a JSON list of algebra elements")
    return sa.canonicalize([la.AlgElement.from_json(v) for v in data]).to_json()


def cmd_classify_1d(args):
    Q = load_alg(args.Qhat)
    f = load_expr(args.f) if args.f else None
    case = sa.classify_1d_full(Q, f)
    if isinstance(case, sa.LinCase):
        return {"case": "linear-superposition"}
    if isinstance(case, sa.CenterCase):
        return {"case": "center", "shift": print_expr(case.shift), "witness": pg.ess_to_json(case.witness)}
    return {"case": "essential", "label": case.label,
            "params": {k: rat_str(rat(v)) for k, v in sorted(case.params.items())}}


def _load_op(arg):
    data = load_json(arg)
    if not isinstance(data, dict) or "terms" not in data:
        raise UsageError('an operator must be a JSON object with a "terms" list')
    return gs.GenSymOp.from_json(data)


def cmd_gensym_mul(args):
    return gs.product(_load_op(args.P), _load_op(args.Q)).to_json()


def cmd_gensym_comm(args):
    if len(args.operands) == 4:
        try:
            k, l, k2, l2 = (int(v) for v in args.operands)
        except ValueError:
            raise UsageError("expected four nonnegative integers") from None
        if min(k, l, k2, l2) < 0:
            raise UsageError("indices must be nonnegative")
        return gs.commutator_closed(k, l, k2, l2).to_json()
    if len(args.operands) == 2:
        return gs.vf_bracket(_load_op(args.operands[0]), _load_op(args.operands[1])).to_json()
    raise UsageError("gensym-comm takes k l k' l' or two operator payloads")


def cmd_gensym_apply(args):
    return {"expr": print_expr(gs.apply(_load_op(args.P), load_expr(args.expr)))}


def cmd_hopf_cole(args):
    return {"v": format_ratfunc(bg.hopf_cole(load_expr(args.expr)))}


def cmd_burgers_apply(args):
    data = load_json(args.element)
    if not isinstance(data, dict):
        raise UsageError("an element must be a JSON object")
    try:
        p = bg.BurgersElement.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed element: {exc}") from None
    return {"v": format_ratfunc(bg.apply_solution_b(p, load_ratfunc(args.v)))}


def cmd_verify(args):
    if args.kind == "heat":
        r = heat_residual(load_expr(args.payload))
        return {"zero": r.is_zero(), "residual": format_ratfunc(r)}
    if args.kind == "burgers":
        r = burgers_residual(load_ratfunc(args.payload))
        return {"zero": r.is_zero(), "residual": format_ratfunc(r)}
    data = pg.determining_data(load_element(args.payload))
    zero = pg.verify_determining(data)
    Xx = data.X.diff("x")
    r = Xx * Xx - data.T.diff("t")
    if r.is_zero():
        r = data.U1.inverse().heat_residual()
    return {"zero": zero, "residual": format_ratfunc(r)}


def cmd_selftest(args):
    seed = args.seed if args.seed is not None else acceptance.default_seed()
    results = acceptance.run_all(seed, parallel=args.parallel)
    print(acceptance.format_table(results), file=sys.stderr)
    return {"seed": seed, "passed": all(r.passed for r in results),
            "criteria": [{"name": r.name, "passed": bool(r.passed), "detail": r.detail} for r in results]}


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="heatsym", description="Exact symmetry computations for u_t = u_xx and Burgers.")
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)

    def verb(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    s = verb("compose", cmd_compose, "compose group elements left to right")
    s.add_argument("elements", nargs="+")
    s.add_argument("--float", action="store_true")
    s = verb("inverse", cmd_inverse, "inverse of a group element")
    s.add_argument("element")
    s.add_argument("--float", action="store_true")
    s = verb("apply-point", cmd_apply_point, "image of a point (t, x, u)")
    s.add_argument("element")
    s.add_argument("t")
    s.add_argument("x")
    s.add_argument("u")
    s.add_argument("--float", action="store_true")
    s = verb("apply-solution", cmd_apply_solution, "transform a solution expression")
    s.add_argument("element")
    s.add_argument("expr")
    s = verb("exp", cmd_exp, "exponential of an algebra element")
    s.add_argument("X")
    s.add_argument("eps", help="p/q, log:q, rot:c,s or quarter:k")
    s.add_argument("--float", action="store_true")
    s = verb("push", cmd_push, "pushforward of an algebra element")
    s.add_argument("element")
    s.add_argument("X")
    s.add_argument("--float", action="store_true")
    s.add_argument("--closed", action="store_true", help="also cross-check against the closed form")
    s = verb("bracket", cmd_bracket, "Lie bracket")
    s.add_argument("X")
    s.add_argument("Y")
    s = verb("ad", cmd_ad, "matrix of ad X (columns are images of basis vectors)")
    s.add_argument("X")
    s.add_argument("--group", action="store_true", help="sign matching the group's adjoint action")
    s = verb("canonicalize", cmd_canonicalize, "canonical form of a subalgebra")
    s.add_argument("subalgebra")
    s = verb("classify-1d", cmd_classify_1d, "classify a one-dimensional subalgebra with a shift part")
    s.add_argument("Qhat")
    s.add_argument("f", nargs="?")
    s = verb("gensym-mul", cmd_gensym_mul, "product of generalized symmetry operators")
    s.add_argument("P")
    s.add_argument("Q")
    s = verb("gensym-comm", cmd_gensym_comm, "bracket of generalized symmetries")
    s.add_argument("operands", nargs="+")
    s = verb("gensym-apply", cmd_gensym_apply, "apply an operator to a solution")
    s.add_argument("P")
    s.add_argument("expr")
    s = verb("hopf-cole", cmd_hopf_cole, "v = -2 u_x/u")
    s.add_argument("expr")
    s = verb("burgers-apply", cmd_burgers_apply, "transform a Burgers solution")
    s.add_argument("element")
    s.add_argument("v")
    s = verb("verify", cmd_verify, "exact residual checks")
    s.add_argument("kind", choices=["heat", "burgers", "determining"])
    s.add_argument("payload")
    s = verb("selftest", cmd_selftest, "run every acceptance check")
    s.add_argument("--parallel", type=int, default=1)
    s.add_argument("--seed", type=int, default=None)
    return p


def _is_math_error(exc) -> bool:
    if isinstance(exc, (sa.SubalgebraError, UsageError)):
        return False
    return isinstance(exc, (DomainError, OutsideClassError, pg.ExactModeError, ArithmeticError))


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.verb is None:
            raise UsageError("missing verb")
        result = args.fn(args)
    except Exception as exc:
        if _is_math_error(exc):
            code = 3
        elif isinstance(exc, (ValueError, TypeError, KeyError, OSError)):
            code = 2
        else:
            raise
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True), file=out)
        return code
    print(json.dumps(result, sort_keys=True), file=out)
    if args.verb == "selftest":
        return 0 if result["passed"] else 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
