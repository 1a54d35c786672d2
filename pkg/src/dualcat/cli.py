"""Command-line entry point: ``dualcat <command> ...``.

Exit codes: 0 success, 1 failing self-test, 2 malformed input, 3 a complex
with d^2 != 0.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List

from . import formats as fmt
from .acceptance import SUITES, run_suites
from .complexes import ComplexError, FreeComplex, indecomposable
from .decomp import INF, FormalObject, barcode, parse_index
from .endofunctors import (
    FunctorialityError,
    LambdaFunctor,
    check_functorial,
    check_relations,
    exactness_report,
    normalize,
)
from .homspace import (
    GeneratorRef,
    Kind,
    compose_sym,
    cone_symbolic,
    hom_bruteforce,
    hom_infty,
    hom_table,
    truncation_bound,
)
from .linalg import Field
from .stability import (
    GroupElem,
    act,
    chart,
    chart_inv,
    hn_filtration,
    silting_search,
    transitivity_witness,
)


class UsageError(ValueError):
    pass


# output --------------------------------------------------------------------


def _table(doc, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)):
                sub = _table(v, indent + 1)
                lines.append(f"{pad}- " + sub[0].lstrip() if sub else f"{pad}-")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(doc)}")
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def emit(args, doc: Dict[str, Any]):
    if args.output == "json":
        print(fmt.dumps(doc))
    else:
        print("\n".join(_table(doc)))


# helpers -------------------------------------------------------------------


def _obj(text: str) -> FormalObject:
    """A formal object from a compact string or ``@file.json``."""
    if text.startswith("@"):
        return fmt.formal_from_json(fmt.load_json(text[1:]))
    return fmt.parse_formal(text)


def _member(text: str):
    i, _, h = text.partition(":")
    try:
        return parse_index(i), int(h or 0)
    except ValueError as e:
        raise UsageError(f"bad object {text!r}: {e}") from None


def _pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected two comma-separated numbers, got {text!r}")
    try:
        return float(Fraction(parts[0])), float(Fraction(parts[1]))
    except ValueError as e:
        raise UsageError(str(e)) from None


def _scalar_arg(field: Field, text: str):
    try:
        return field(Fraction(text))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad scalar {text!r}: {e}") from None


# commands ------------------------------------------------------------------


def cmd_hom(args, field: Field):
    i, j = parse_index(args.i), parse_index(args.j)
    d = hom_table(i, j, args.alpha)
    doc = fmt.hom_to_json(i, j, args.alpha, d)
    if args.brute:
        if i == INF:
            N = args.N or truncation_bound(j, args.alpha)
            brute = hom_infty(i, j, args.alpha, N, field)
            doc["truncation"] = N
        elif j == INF:
            brute = hom_infty(i, j, args.alpha, 0, field)
        else:
            brute = hom_bruteforce(indecomposable(field, i), indecomposable(field, j, args.alpha),
                                   want_basis=False).dim
        doc["brute_dim"] = brute
        doc["match"] = brute == d.dim
    emit(args, doc)
    return 0


def cmd_decompose(args, field: Field):
    C = fmt.complex_from_json(field, fmt.load_json(args.file))
    if not isinstance(C, FreeComplex):
        raise UsageError("decompose expects a complex of free modules")
    v = C.validate()
    if not v:
        raise ComplexError(v.message, v.degree)
    emit(args, fmt.formal_to_json(barcode(C)))
    return 0


def cmd_compose(args, field: Field):
    g = fmt.sym_from_json(field, fmt.load_json(args.g))
    f = fmt.sym_from_json(field, fmt.load_json(args.f))
    try:
        out = compose_sym(g, f)
    except ValueError as e:
        raise UsageError(str(e)) from None
    emit(args, fmt.sym_to_json(out))
    return 0


def cmd_cone(args, field: Field):
    kind = Kind.ONE if args.kind == "1" else Kind.EPS
    g = GeneratorRef(_member(args.source), _member(args.target), kind)
    if not g.exists():
        raise UsageError(f"no generator {g}")
    c = _scalar_arg(field, args.coeff)
    if c == 0:
        raise UsageError("coefficient must be nonzero")
    out = cone_symbolic(g, field, c)
    emit(args, {"generator": str(g), "coefficient": field.fmt(c), "cone": fmt.formal_to_json(out)})
    return 0


def cmd_hn(args, field: Field):
    s = fmt.parse_sigma(args.sigma)
    F = _obj(args.object)
    emit(args, {"sigma": fmt.sigma_to_json(s), "object": str(F),
                "factors": fmt.hn_to_json(hn_filtration(s, F))})
    return 0


def cmd_stab(args, field: Field):
    if args.stab_cmd == "chart":
        if args.inverse:
            re, im = _pair(args.inverse)
            emit(args, fmt.sigma_to_json(chart_inv(complex(re, im))))
        else:
            if not args.sigma:
                raise UsageError("stab chart needs --sigma or --inverse")
            emit(args, fmt.chart_to_json(chart(fmt.parse_sigma(args.sigma))))
    elif args.stab_cmd == "act":
        kappa, theta = _pair(args.g)
        out = act(GroupElem(kappa, theta), fmt.parse_sigma(args.sigma))
        emit(args, fmt.sigma_to_json(out))
    else:
        g = transitivity_witness(fmt.parse_sigma(args.source), fmt.parse_sigma(args.to))
        emit(args, {"kappa": g.kappa, "theta": g.theta})
    return 0


def _assignment(args, field: Field):
    if args.file:
        return fmt.coeffs_from_json(field, fmt.load_json(args.file))
    if args.lam is None:
        raise UsageError("give a coefficient file or --lambda")
    return LambdaFunctor(field, _scalar_arg(field, args.lam)).assignment(args.imax)


def cmd_functor(args, field: Field):
    if args.functor_cmd == "exact":
        lam = _scalar_arg(field, args.lam)
        if lam == 0:
            raise UsageError("lambda must be nonzero")
        rep = exactness_report(LambdaFunctor(field, lam))
        doc = {"lambda": field.fmt(lam), "exact": rep.exact,
               "witness": None if rep.solution is None else [field.fmt(x) for x in rep.solution]}
        emit(args, doc)
        return 0
    c = _assignment(args, field)
    if args.functor_cmd == "check":
        rf, rr = check_functorial(c), check_relations(c)
        doc = {
            "functorial": rf.ok,
            "pairs_checked": rf.checked,
            "missing": [list(k) for k in rf.missing],
            "violations": [
                {"first": list(v.first), "second": list(v.second), "composite": list(v.composite),
                 "expected": field.fmt(v.expected), "got": field.fmt(v.got)}
                for v in rf.violations[:50]
            ],
            "relations": {k: {"pass": p, "fail": f} for k, (p, f) in rr.counts().items()},
        }
        emit(args, doc)
        return 0
    try:
        nf = normalize(c)
    except FunctorialityError as e:
        raise UsageError(str(e)) from None
    emit(args, {
        "shift": nf.shift,
        "mu": field.fmt(nf.mu),
        "phi": {str(i): field.fmt(v) for i, v in sorted(nf.phi.items())},
        "lambda": None if nf.lam is None else field.fmt(nf.lam),
    })
    return 0


def cmd_silting(args, field: Field):
    R = silting_search(args.imax, args.hmax)
    subsets = []
    for c in R.maximal:
        why = R.explain(c)
        subsets.append({"members": fmt.formal_to_json(FormalObject.of(c)), "silting": why.silting,
                        "generates": why.generates, "generates_perf": why.generates_perf,
                        "witness": [str(x) for x in why.witness], "reason": why.reason})
    obstructions = [
        {"from": str(A), "to": str(B), "shift": w[2]} for (A, B), w in sorted(
            R.obstructions.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
    ]
    doc = {
        "window": {"imax": args.imax, "hmax": args.hmax},
        "maximal_silting": subsets,
        "generating_db": [[str(m) for m in c] for c in R.generating],
        "certificate": "empty" if R.empty else "nonempty",
        "obstruction_count": len(obstructions),
    }
    if args.verbose:
        doc["obstructions"] = obstructions
    emit(args, doc)
    return 0


def cmd_selftest(args, field: Field):
    names = args.suites or ["all"]
    for n in names:
        if n != "all" and n not in SUITES:
            raise UsageError(f"unknown suite {n!r}; choose from all, {', '.join(SUITES)}")
    results = run_suites(names, seed=args.seed)
    ok = all(r.passed for r in results)
    if args.output == "json":
        print(fmt.dumps({"passed": ok, "seed": args.seed, "suites": [r.as_dict() for r in results]}))
    else:
        for r in results:
            print(r.line)
            for f in r.failures[:5]:
                print(f"    {f}")
        print("all suites passed" if ok else "some suites FAILED")
    return 0 if ok else 1


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=argparse.SUPPRESS, help="q or gf:<p> (default gf:7)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized suites")
    common.add_argument("--output", choices=["json", "table"], default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="dualcat", description="Computations in D^b of the dual numbers.")
    p.add_argument("--field", default="gf:7", help="q or gf:<p> (default gf:7)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized suites (default 0)")
    p.add_argument("--output", choices=["json", "table"], default="json")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("hom", parents=[common], help="hom(X_i, X_j[alpha]) from the table")
    s.add_argument("i")
    s.add_argument("j")
    s.add_argument("alpha", type=int)
    s.add_argument("--brute", action="store_true", help="also compute the dimension by linear algebra")
    s.add_argument("--N", type=int, default=None, help="truncation length for X_inf sources")
    s.set_defaults(func=cmd_hom)

    s = sub.add_parser("decompose", parents=[common], help="barcode of a complex file")
    s.add_argument("file")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("compose", parents=[common], help="compose two symbolic morphisms: g o f")
    s.add_argument("g")
    s.add_argument("f")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("cone", parents=[common], help="cone of a generator, e.g. --source 1:0 --target 1:0 --kind eps")
    s.add_argument("--source", required=True, help="i:h")
    s.add_argument("--target", required=True, help="j:h")
    s.add_argument("--kind", choices=["1", "eps"], required=True)
    s.add_argument("--coeff", default="1")
    s.set_defaults(func=cmd_cone)

    s = sub.add_parser("hn", parents=[common], help="Harder-Narasimhan factors")
    s.add_argument("--sigma", required=True, help="h,mass,phi")
    s.add_argument("object", help="e.g. 3:0,1:2 or @object.json")
    s.set_defaults(func=cmd_hn)

    s = sub.add_parser("stab", parents=[common], help="stability conditions")
    ss = s.add_subparsers(dest="stab_cmd", required=True)
    t = ss.add_parser("chart", parents=[common])
    t.add_argument("--sigma")
    t.add_argument("--inverse", help="re,im")
    t = ss.add_parser("act", parents=[common])
    t.add_argument("--g", required=True, help="kappa,theta")
    t.add_argument("--sigma", required=True)
    t = ss.add_parser("witness", parents=[common])
    t.add_argument("--from", dest="source", required=True)
    t.add_argument("--to", required=True)
    s.set_defaults(func=cmd_stab)

    s = sub.add_parser("functor", parents=[common], help="coefficient endofunctors")
    fs = s.add_subparsers(dest="functor_cmd", required=True)
    for name in ("check", "normalize"):
        t = fs.add_parser(name, parents=[common])
        t.add_argument("file", nargs="?")
        t.add_argument("--lambda", dest="lam")
        t.add_argument("--imax", type=int, default=6)
    t = fs.add_parser("exact", parents=[common])
    t.add_argument("--lambda", dest="lam", required=True)
    s.set_defaults(func=cmd_functor)

    s = sub.add_parser("silting", parents=[common], help="bounded silting search")
    s.add_argument("--imax", type=int, default=5)
    s.add_argument("--hmax", type=int, default=4)
    s.add_argument("--verbose", action="store_true", help="list every obstruction")
    s.set_defaults(func=cmd_silting)

    s = sub.add_parser("selftest", parents=[common], help="run the oracle suites")
    s.add_argument("suites", nargs="*", help=f"all or any of: {', '.join(SUITES)}")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        field = Field.parse(args.field)
    except ValueError as e:
        print(f"dualcat: {e}", file=sys.stderr)
        return 2
    try:
        return args.func(args, field)
    except ComplexError as e:
        print(f"dualcat: invalid complex at degree {e.degree}: {e}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError, OSError) as e:
        print(f"dualcat: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
