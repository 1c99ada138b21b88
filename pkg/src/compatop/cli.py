"""Command line front end.

Exit codes: 0 success, 1 usage or parse error, 2 a verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import presentations as pr
from .partitions import (
    build_operadic_poset,
    build_weighted_poset,
    com2_to_weighted,
)
from .poset import PosetError, is_isomorphic, is_order_isomorphism, maximal_intervals
from .setoperads import builtin_operad, check_basic_set, check_operad_axioms
from .shelling import analyse_interval

SCHEMA = 1
SET_OPERADS = ("com", "com2", "perm", "as", "perm*com2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(dict(payload, schema=SCHEMA), indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(src: str) -> pr.QuadraticPresentation:
    """A presentation file, or a catalogue name when no such file exists."""
    if not Path(src).exists() and src in pr.CATALOGUE:
        return pr.catalogue(src)
    if not Path(src).exists():
        raise pr.PresentationError(f"{src}: no such file or catalogue entry")
    return pr.load_presentation(src)


def _write_presentation(P: pr.QuadraticPresentation, out: str | None) -> None:
    data = pr.presentation_to_json(P)
    if out:
        pr.dump_presentation(P, out)
    else:
        sys.stdout.write(json.dumps(data, indent=1, sort_keys=True) + "\n")


# -- presentation verbs ------------------------------------------------------------------

def cmd_dual(args) -> int:
    _write_presentation(pr.koszul_dual(_load(args.input)), args.output)
    return 0


def cmd_compat(args) -> int:
    P = _load(args.input)
    build = pr.build_linear_compatible if args.kind == "linear" else pr.build_totally_compatible
    _write_presentation(build(P), args.output)
    return 0


def cmd_product(args) -> int:
    P, Q = _load(args.left), _load(args.right)
    build = pr.black_product if args.kind == "black" else pr.white_product
    _write_presentation(build(P, Q), args.output)
    return 0


# -- set operads -------------------------------------------------------------------------

def _operad(name: str):
    try:
        return builtin_operad(name)
    except KeyError:
        raise UsageError(f"unknown operad {name!r}") from None


def cmd_operad_check(args) -> int:
    P = _operad(args.operad)
    reports = [check_operad_axioms(P, args.max_n)]
    if args.basic_set:
        reports.append(check_basic_set(P, args.max_n))
    ok = all(r.passed for r in reports)
    _emit({"command": "operad-check", "passed": ok, "reports": [r.to_json() for r in reports]}, args.output)
    return 0 if ok else 2


# -- posets ------------------------------------------------------------------------------

def cmd_poset(args) -> int:
    name = args.operad
    try:
        if name == "weighted":
            P = build_weighted_poset(args.n)
        else:
            P = build_operadic_poset(_operad(name), args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report: dict = {"command": "poset", "operad": name, "n": args.n, "elements": len(P),
                    "maximal": len(P.maximal()), "hasse_edges": len(P.covers())}
    ok = True
    if args.iso_weighted:
        W = build_weighted_poset(args.n)
        if name == "com2":
            iso = is_order_isomorphism(P, W, {e: com2_to_weighted(e) for e in P.elements})
        else:
            iso = is_isomorphic(P, W)[0]
        report["iso_weighted"] = iso
        ok &= iso
    if name == "com2":
        # report in the weighted-partition notation
        P = P.relabel(com2_to_weighted)
    if args.semimodular or args.rao or args.cm:
        intervals = []
        for I in maximal_intervals(P):
            r = analyse_interval(I, ambient=P, semimodular=args.semimodular, rao=args.rao, cm=args.cm,
                                 strategy=args.strategy)
            intervals.append(r)
        report["intervals"] = sorted((r.to_json() for r in intervals), key=lambda d: d["interval"])
        report["graded"] = all(r.graded for r in intervals)
        ok &= report["graded"]
        if args.semimodular:
            report["semimodular"] = all(r.semimodular for r in intervals)
            report["totally_semimodular"] = all(r.totally_semimodular for r in intervals)
        if args.rao:
            report["rao"] = all(r.rao is not None and r.rao.ok for r in intervals)
            ok &= report["rao"]
        if args.cm:
            report["cm"] = all(r.cm and not r.euler_mismatches for r in intervals)
            ok &= report["cm"]
    report["passed"] = ok
    if args.dot:
        Path(args.dot).write_text(P.to_dot(name="poset"))
    _emit(report, args.output)
    return 0 if ok else 2


# -- report batteries --------------------------------------------------------------------

def _pairs_black():
    for name in ("lie", "com"):
        P = pr.catalogue(name)
        ident = pr.product_to_colours(P.s)
        yield name, pr.relation_spaces_equal(pr.black_product(P, pr.catalogue("lie1")), pr.build_linear_compatible(P), ident)


def _pairs_white():
    for name in ("lie", "com"):
        P = pr.catalogue(name)
        ident = pr.product_to_colours(P.s)
        yield name, pr.relation_spaces_equal(pr.white_product(P, pr.catalogue("com2")), pr.build_totally_compatible(P), ident)


def _duality_square():
    for name in ("lie", "com"):
        P = pr.catalogue(name)
        lhs = pr.koszul_dual(pr.build_linear_compatible(P))
        rhs = pr.build_totally_compatible(pr.koszul_dual(P))
        yield f"compat:{name}", pr.relation_spaces_equal(lhs, rhs)
    for a in pr.CATALOGUE:
        for b in pr.CATALOGUE:
            P, Q = pr.catalogue(a), pr.catalogue(b)
            lhs = pr.koszul_dual(pr.black_product(P, Q))
            rhs = pr.white_product(pr.koszul_dual(P), pr.koszul_dual(Q))
            yield f"product:{a},{b}", pr.relation_spaces_equal(lhs, rhs)


def cmd_report(args) -> int:
    if args.compare:
        a, b = (_load(x) for x in args.compare)
        equal = a.s == b.s and a.generators == b.generators and pr.relation_spaces_equal(a, b)
        _emit({"command": "report", "task": "compare", "equal": equal,
               "dims": [a.relations.dim, b.relations.dim]}, args.output)
        return 0 if equal else 2
    if args.task is None:
        raise UsageError("report: a task or --compare A B is required")
    items: list[tuple[str, bool, dict]] = []
    if args.task == "theorem-black":
        items = [(n, ok, {}) for n, ok in _pairs_black()]
    elif args.task == "corollary-white":
        items = [(n, ok, {}) for n, ok in _pairs_white()]
    elif args.task == "duality-square":
        items = [(n, ok, {}) for n, ok in _duality_square()]
    elif args.task in ("axioms", "basic-set"):
        names = [args.operad] if args.operad else list(SET_OPERADS)
        check = check_operad_axioms if args.task == "axioms" else check_basic_set
        for n in names:
            P = _operad(n)
            max_n = args.max_n if args.max_n else (4 if n in ("as", "perm*com2") else 5)
            r = check(P, max_n)
            items.append((n, r.passed, r.to_json()))
    ok = all(x[1] for x in items)
    _emit({"command": "report", "task": args.task, "passed": ok,
           "items": [dict(detail, item=n, passed=p) for n, p, detail in items]}, args.output)
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="compatop", description="Quadratic operads, compatible structures and partition posets.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    d = sub.add_parser("dual", help="Koszul dual of a presentation")
    d.add_argument("input", help="presentation JSON file or catalogue name")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_dual)

    c = sub.add_parser("compat", help="linearly or totally compatible presentation")
    c.add_argument("kind", choices=["linear", "total"])
    c.add_argument("input")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_compat)

    m = sub.add_parser("product", help="black or white product of two presentations")
    m.add_argument("kind", choices=["black", "white"])
    m.add_argument("left")
    m.add_argument("right")
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_product)

    o = sub.add_parser("operad-check", help="exhaustive axiom check of a set operad")
    o.add_argument("operad")
    o.add_argument("--max-n", type=int, default=4)
    o.add_argument("--basic-set", action="store_true")
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_operad_check)

    q = sub.add_parser("poset", help="operadic partition poset analytics")
    q.add_argument("operad", help="com, com2, perm, as, perm*com2 or weighted")
    q.add_argument("n", type=int)
    q.add_argument("--semimodular", action="store_true")
    q.add_argument("--rao", action="store_true")
    q.add_argument("--cm", action="store_true")
    q.add_argument("--iso-weighted", action="store_true")
    q.add_argument("--strategy", choices=["paper", "exhaustive"], default="paper")
    q.add_argument("--dot")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_poset)

    r = sub.add_parser("report", help="batteries of checks")
    r.add_argument("task", nargs="?", choices=["theorem-black", "corollary-white", "duality-square", "axioms", "basic-set"])
    r.add_argument("--compare", nargs=2, metavar=("A", "B"))
    r.add_argument("--operad")
    r.add_argument("--max-n", type=int)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (pr.PresentationError, PosetError, ValueError, OSError) as exc:
        print(f"compatop: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
