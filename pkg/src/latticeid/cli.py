"""Command line interface.

Exit status: 0 when every checked claim holds, 1 when a claim is refuted
(the report carries the witness), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Tuple

from . import adaptive, codes, verify
from .graph import CayleyGraph, shortest_cycle, shortest_cycle_window
from .lattice import Mat2, kernel_lattice

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def parse_vec(text: str) -> Tuple[int, int]:
    try:
        x, y = (int(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"malformed vector {text!r}; expected 'x,y'") from None
    return x, y


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _code(args) -> codes.LatticeCode:
    if args.t is None or args.d is None:
        raise UsageError("--t and --d are required")
    return codes.construct(args.t, args.d)


def _matrix(args) -> Mat2:
    if args.matrix is None:
        raise UsageError("--matrix is required")
    return Mat2.parse(args.matrix)


def cmd_construct(args) -> Tuple[int, str]:
    return EXIT_OK, _dump(_code(args).to_dict())


def cmd_density(args) -> Tuple[int, str]:
    code = _code(args)
    dens = codes.density(code)
    out = {"t": code.t, "d": code.d, "N": code.order_N, "density": f"{dens.numerator}/{dens.denominator}"}
    if args.format == "text":
        return EXIT_OK, str(out["density"])
    return EXIT_OK, _dump(out)


def cmd_girth(args) -> Tuple[int, str]:
    M = _matrix(args)
    out = {"matrix": M.to_text(), "shortest_cycle": shortest_cycle(M), "window": shortest_cycle_window(M)}
    return EXIT_OK, _dump(out)


def cmd_admits(args) -> Tuple[int, str]:
    code, M = _code(args), _matrix(args)
    rec = codes.admits_identifying_on(code, M)
    out = {"code": code.to_dict(), "matrix": M.to_text(), **rec.to_dict()}
    return (EXIT_OK if rec.admitted else EXIT_REFUTED), _dump(out)


def cmd_verify(args) -> Tuple[int, str]:
    code, M = _code(args), _matrix(args)
    g = CayleyGraph(M)
    words = codes.codewords_on(code, M)
    wanted = [k for k in ("identifying", "perfect", "covering") if getattr(args, k)]
    if not wanted:
        wanted = ["identifying", "covering"] + (["perfect"] if code.is_perfect_family else [])
    reports: List[verify.Verdict] = []
    for claim in wanted:
        if claim == "identifying":
            r = args.radius if args.radius is not None else code.identifying_radius
            if r is None:
                raise UsageError(f"C({code.t},{code.d}) has no identifying radius; pass --radius")
            v = verify.is_identifying(g, words, r, workers=args.parallelism)
        elif claim == "perfect":
            rho = args.radius if args.radius is not None and wanted == ["perfect"] else code.t
            v = verify.is_perfect(g, words, rho)
        else:
            v = verify.check_covering_radius(g, words, code.covering_radius)
        v.parameters.update({"t": code.t, "d": code.d})
        reports.append(v)
    status = EXIT_OK if all(v.holds for v in reports) else EXIT_REFUTED
    if args.format == "text":
        lines = [f"{v.claim}: {'holds' if v.holds else 'REFUTED'} r={v.parameters['radius']}"
                 + (f" witness={v.witness}" if v.witness is not None else "") for v in reports]
        return status, "\n".join(lines)
    return status, _dump([v.to_dict() for v in reports])


def cmd_min_radius(args) -> Tuple[int, str]:
    code, M = _code(args), _matrix(args)
    g = CayleyGraph(M)
    words = codes.codewords_on(code, M)
    found = verify.min_identifying_radius(g, words, args.r_max)
    out = {
        "code": code.to_dict(),
        "matrix": M.to_text(),
        "r_max": args.r_max if args.r_max is not None else g.diameter(),
        "min_identifying_radius": found,
        "formula_radius": code.identifying_radius,
    }
    return EXIT_OK, _dump(out)


def cmd_normalize(args) -> Tuple[int, str]:
    M = _matrix(args)
    if args.adjacency is None:
        raise UsageError("--adjacency is required")
    B = Mat2.parse(args.adjacency)
    K = kernel_lattice(B, M)
    out = {
        "matrix": M.to_text(),
        "adjacency": B.to_text(),
        "normalized": K.to_text(),
        "order": abs(K.det()),
        "spans_group": abs(K.det()) == abs(M.det()),
    }
    return EXIT_OK, _dump(out)


def cmd_simulate(args) -> Tuple[int, str]:
    code, M = _code(args), _matrix(args)
    proto = adaptive.Protocol(CayleyGraph(M), code, exact=not args.greedy)
    fault = parse_vec(args.fault) if args.fault else None
    report = proto.run(fault)
    ok = report.identified == report.fault
    return (EXIT_OK if ok else EXIT_REFUTED), _dump(report.to_dict())


def cmd_tree(args) -> Tuple[int, str]:
    code, M = _code(args), _matrix(args)
    g = CayleyGraph(M)
    proto = adaptive.Protocol(g, code, exact=not args.greedy)
    center = parse_vec(args.center) if args.center else (0, 0)
    if g.canonical(center) not in set(proto.codewords):
        raise UsageError(f"{center} is not a codeword")
    tree = proto.tree_for(center)
    if args.format == "dot":
        return EXIT_OK, adaptive.tree_to_dot(tree, label=g.minimal_rep).rstrip("\n")
    out = {"depth": adaptive.tree_depth(tree), "tree": adaptive.tree_to_dict(tree)}
    return EXIT_OK, _dump(out)


def cmd_export(args) -> Tuple[int, str]:
    M = _matrix(args)
    adjacency = None
    if args.adjacency:
        B = Mat2.parse(args.adjacency)
        adjacency = (B.col1, B.col2)
    g = CayleyGraph(M, adjacency)
    if args.format == "json":
        return EXIT_OK, g.histogram_json()
    words = None
    if args.t is not None and args.d is not None:
        words = codes.codewords_on(_code(args), M)
    return EXIT_OK, g.to_dot(words).rstrip("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latticeid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, func, code=False, matrix=False, fmt=("json",), help=None):
        p = sub.add_parser(name, help=help)
        if code:
            p.add_argument("--t", type=int)
            p.add_argument("--d", type=int)
        if matrix:
            p.add_argument("--matrix", help="generator columns, e.g. '28,4;-4,28'")
        p.add_argument("--format", choices=fmt, default=fmt[0])
        p.add_argument("--parallelism", type=int, default=1)
        p.set_defaults(func=func)
        return p

    add("construct", cmd_construct, code=True, help="code descriptor")
    add("density", cmd_density, code=True, fmt=("json", "text"), help="exact density 1/N")
    add("girth", cmd_girth, matrix=True, help="shortest non-trivial cycle of G(M)")
    add("admits", cmd_admits, code=True, matrix=True, help="sufficient identifying condition on G(M)")
    p = add("verify", cmd_verify, code=True, matrix=True, fmt=("json", "text"), help="brute-force verification")
    p.add_argument("--identifying", action="store_true")
    p.add_argument("--perfect", action="store_true")
    p.add_argument("--covering", action="store_true")
    p.add_argument("--radius", type=int, help="override the formula radius")
    p = add("min-radius", cmd_min_radius, code=True, matrix=True, help="smallest identifying radius")
    p.add_argument("--r-max", type=int)
    p = add("normalize", cmd_normalize, matrix=True, help="G(M') isomorphic to G(M; A)")
    p.add_argument("--adjacency", help="the two generators as columns, e.g. '1,1;1,-1'")
    p = add("simulate", cmd_simulate, code=True, matrix=True, help="adaptive identification run")
    p.add_argument("--fault")
    p.add_argument("--greedy", action="store_true", help="greedy instead of minimum-depth trees")
    p = add("tree", cmd_tree, code=True, matrix=True, fmt=("json", "dot"), help="decision tree export")
    p.add_argument("--center", help="codeword whose t-ball is searched (default 0,0)")
    p.add_argument("--greedy", action="store_true")
    p = add("export", cmd_export, code=True, matrix=True, fmt=("dot", "json"), help="graph DOT / distance histogram")
    p.add_argument("--adjacency")
    return parser


def run(argv: Optional[List[str]] = None) -> Tuple[int, str]:
    """Run one command; return ``(exit status, output text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_OK), ""
    if args.parallelism < 1:
        return EXIT_USAGE, "error: --parallelism must be positive"
    try:
        return args.func(args)
    except (UsageError, ValueError, OverflowError, codes.InadmissibleError) as exc:
        return EXIT_USAGE, f"error: {exc}"


def main(argv: Optional[List[str]] = None) -> int:
    status, text = run(argv)
    if text:
        stream = sys.stderr if status == EXIT_USAGE else sys.stdout
        print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
