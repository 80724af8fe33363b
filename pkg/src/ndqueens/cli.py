"""Command-line entry point.

Machine-readable JSON goes to stdout (or --out); a one-line human summary
goes to stderr.  Exit codes: 0 success, 1 usage or runtime error, 2 proven
infeasibility in decide/refute style commands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analysis, bounds, construct, ipmodel, solver, tables
from .geometry import BoardSpec, Placement, verify_certificate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def _board(args) -> BoardSpec:
    return BoardSpec(args.n, args.d)


def _opts(args) -> solver.SearchOptions:
    return solver.SearchOptions(
        time_limit=getattr(args, "time_limit", None),
        node_limit=getattr(args, "node_limit", None),
        threads=getattr(args, "threads", None) or 1,
        symmetry_reduction=getattr(args, "symmetry_reduction", False),
        modular=getattr(args, "modular", False),
    )


def _emit(args, payload: str, summary: str) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _emit_json(args, obj, summary: str) -> None:
    _emit(args, json.dumps(obj, indent=2), summary)


def _read_placement(args) -> Placement:
    if args.infile == "-":
        return Placement.from_json(sys.stdin.read())
    with open(args.infile, "r", encoding="ascii") as fh:
        return Placement.from_json(fh.read())


def _load_known_table(args) -> dict | None:
    path = getattr(args, "table", None)
    if not path:
        return None
    return tables.load_table(path)


def cmd_construct(args) -> int:
    if args.list_coeffs:
        family = construct.valid_coefficients(args.n, args.d)
        _emit_json(
            args,
            {
                "n": family.n,
                "d": family.d,
                "vectors": [list(v) for v in family.vectors],
                "classes": [[list(v) for v in cls] for cls in family.classes],
                "class_count": family.class_count,
            },
            f"{len(family.vectors)} admissible vectors in {family.class_count} classes",
        )
        return EXIT_OK
    if args.kind == "hoffman":
        p = construct.hoffman_2d(args.n)
    else:
        coeffs = tuple(int(c) for c in args.coeffs.split(",")) if args.coeffs else None
        if coeffs is None:
            family = construct.valid_coefficients(args.n, args.d)
            if not family.vectors:
                print(f"no admissible coefficients for n={args.n}, d={args.d}", file=sys.stderr)
                return EXIT_ERROR
            coeffs = family.vectors[0]
        p = construct.regular_solution(
            construct.RegularSpec(args.n, args.d, coeffs, args.shift)
        )
    _emit(args, p.to_json(), f"{p.size} queens on ({p.board.n},{p.board.d})")
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _read_placement(args)
    verdict = verify_certificate(p, modular=args.modular)
    _emit_json(
        args,
        {"valid": verdict.valid, "conflicts": [[list(a), list(b)] for a, b in verdict.conflicts]},
        "valid" if verdict.valid else f"{len(verdict.conflicts)} conflicts",
    )
    return EXIT_OK if verdict.valid else EXIT_INFEASIBLE


def cmd_solve(args) -> int:
    board = _board(args)
    upper = None
    if args.use_upper_bound:
        known = tables.qmax_for_divisors(board.n, board.d)
        upper = min(
            bounds.upper_bound_tiling(board.n, board.d, known),
            bounds.upper_bound_layer(board.n, board.d, tables.qmax_for_lower_dims(board.n, board.d)),
        )
    res = solver.max_partial(board, _opts(args), upper_bound=upper, method=args.method)
    _emit_json(args, res.to_json_dict(), f"best_size={res.best_size} status={res.status}")
    return EXIT_OK


def cmd_count(args) -> int:
    res = solver.count_solutions(_board(args), args.k, _opts(args))
    _emit_json(args, res.to_json_dict(), f"count={res.count} status={res.status}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    board = _board(args)
    lines = []
    total = 0
    for p in solver.enumerate_solutions(board, args.k, _opts(args)):
        lines.append(p.to_json())
        total += 1
    _emit(args, "\n".join(lines) + ("\n" if lines else ""), f"{total} placements")
    return EXIT_OK


def cmd_complete(args) -> int:
    partial = _read_placement(args)
    res = solver.complete(partial.board, partial, args.k, _opts(args), method=args.method)
    _emit_json(args, res.to_json_dict(), f"status={res.status}")
    if res.status == "infeasible":
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_qc(args) -> int:
    res = solver.completion_threshold(_board(args), _opts(args), method=args.method)
    _emit_json(
        args,
        {"qc": res.best_size, "status": res.status},
        f"qc={res.best_size} status={res.status}",
    )
    return EXIT_OK


def cmd_dominate(args) -> int:
    res = solver.min_domination(_board(args), _opts(args))
    _emit_json(args, res.to_json_dict(), f"min_domination={res.best_size}")
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def cmd_bounds(args) -> int:
    table = _load_known_table(args)
    records = bounds.bounds_report(_parse_range(args.n_range), args.d, table)
    if args.emit == "csv":
        _emit(args, bounds.report_to_csv(records), f"{len(records)} records")
    else:
        _emit_json(args, [r.to_json_dict() for r in records], f"{len(records)} records")
    return EXIT_OK


def cmd_model(args) -> int:
    board = _board(args)
    kind, _ = ipmodel.parse_mode(args.mode)
    model = ipmodel.build_base(board, args.mode)
    cuts = [c for c in args.cuts.split(",") if c] if args.cuts else []
    table = _load_known_table(args)
    known = dict(tables.QMAX_EXACT)
    if table:
        known.update(table)
    if "cube" in cuts:
        ipmodel.add_cube_cliques(model)
    if "star" in cuts:
        ipmodel.add_star_cliques(model)
    if "layer" in cuts:
        layer_table = {dd: v for (m, dd), v in known.items() if m == board.n and dd < board.d}
        ipmodel.add_layer_inequalities(model, layer_table)
    if "subsol" in cuts:
        sub_table = {m: v for (m, dd), v in known.items() if dd == board.d and m < board.n}
        ipmodel.add_subsolution_inequalities(model, sub_table, sorted(sub_table))
    if "oddcycle" in cuts:
        cycles = ipmodel.find_chordless_odd_cycles(board, limit=args.oddcycle_limit)
        ipmodel.add_odd_cycle_inequalities(model, cycles)
    text = ipmodel.export_lp(model)
    if args.warmstart_out and args.warmstart_in:
        with open(args.warmstart_in, "r", encoding="ascii") as fh:
            p = Placement.from_json(fh.read())
        with open(args.warmstart_out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(ipmodel.export_warmstart(p))
    _emit(args, text, f"{len(model.constraints)} constraints, {len(model.variables)} binaries")
    return EXIT_OK


def cmd_density(args) -> int:
    dmap = analysis.density_map(_board(args), args.k, _opts(args))
    if args.emit == "csv":
        _emit(args, analysis.density_export(dmap), f"{dmap.total_solutions} solutions")
    else:
        _emit_json(args, dmap.to_json_dict(), f"{dmap.total_solutions} solutions")
    return EXIT_OK


def cmd_regularity(args) -> int:
    p = _read_placement(args)
    res = analysis.regularity_check(p)
    obj = {"regular": res.regular}
    if res.regular:
        obj["start"] = list(res.start)
        obj["movements"] = [list(m) for m in res.movements]
    _emit_json(args, obj, "regular" if res.regular else "not regular")
    return EXIT_OK


def cmd_color(args) -> int:
    found = analysis.find_superimposable(args.n, args.count, _opts(args))
    if found is None:
        _emit_json(args, {"found": False}, "none")
        return EXIT_INFEASIBLE
    _emit_json(
        args,
        {"found": True, "solutions": [[list(q) for q in p.queens] for p in found]},
        f"{len(found)} disjoint solutions",
    )
    return EXIT_OK


def cmd_tables(args) -> int:
    report = analysis.tables_report(args.scope, _opts(args))
    _emit_json(args, report, f"scope={args.scope}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndqueens", description="n-queens in d dimensions: solving, bounds, models"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n=True, d=True, k=False):
        if n:
            p.add_argument("-n", type=int, required=True, help="board side length")
        if d:
            p.add_argument("-d", type=int, default=2, help="dimension (default 2)")
        if k:
            p.add_argument("-k", type=int, required=True, help="placement size")
        p.add_argument("--out", help="write output to file instead of stdout")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--time-limit", type=float, dest="time_limit")
        p.add_argument("--node-limit", type=int, dest="node_limit")
        p.add_argument("--modular", action="store_true")
        p.add_argument("--symmetry-reduction", action="store_true", dest="symmetry_reduction")

    p = sub.add_parser("construct", help="closed-form constructions")
    common(p)
    p.add_argument("--kind", choices=("hoffman", "regular"), default="hoffman")
    p.add_argument("--coeffs", help="comma-separated coefficients for regular solutions")
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--list-coeffs", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a placement certificate")
    common(p, n=False, d=False)
    p.add_argument("--in", dest="infile", default="-", help="placement JSON file or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="maximum non-attacking placement")
    common(p)
    p.add_argument("--method", choices=("auto", "branch", "ip"), default="auto")
    p.add_argument("--use-upper-bound", action="store_true", dest="use_upper_bound",
                   help="prime the search with tiling/layer upper bounds")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("count", help="count size-k placements")
    common(p, k=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", help="list size-k placements as JSON lines")
    common(p, k=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("complete", help="extend a partial placement to size k")
    common(p, n=False, d=False, k=True)
    p.add_argument("--in", dest="infile", default="-")
    p.add_argument("--method", choices=("auto", "branch", "ip"), default="auto")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("qc", help="completion threshold")
    common(p)
    p.add_argument("--method", choices=("auto", "branch", "ip"), default="auto")
    p.set_defaults(func=cmd_qc)

    p = sub.add_parser("dominate", help="minimum dominating queen set")
    common(p)
    p.set_defaults(func=cmd_dominate)

    p = sub.add_parser("bounds", help="lower/upper bound report")
    common(p, n=False)
    p.add_argument("--n-range", dest="n_range", required=True, help="e.g. 9:15 or 9,11,13")
    p.add_argument("--table", help="JSON table of known values {d: {n: value}}")
    p.add_argument("--emit", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("model", help="export an integer-programming model as LP")
    common(p)
    p.add_argument("--mode", default="max", help="max | fixed:K | refute:K")
    p.add_argument("--cuts", default="", help="comma list: cube,star,layer,subsol,oddcycle")
    p.add_argument("--table", help="JSON table of known values {d: {n: value}}")
    p.add_argument("--oddcycle-limit", type=int, default=100, dest="oddcycle_limit")
    p.add_argument("--warmstart-in", dest="warmstart_in", help="placement JSON for a warmstart")
    p.add_argument("--warmstart-out", dest="warmstart_out", help="write warmstart text here")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("density", help="per-square solution counts")
    common(p, k=True)
    p.add_argument("--emit", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("regularity", help="orbit/coset structure of a placement")
    common(p, n=False, d=False)
    p.add_argument("--in", dest="infile", default="-")
    p.set_defaults(func=cmd_regularity)

    p = sub.add_parser("color", help="disjoint (n,2) solutions / n-coloring certificate")
    common(p, d=False)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("tables", help="known-values tables with provenance")
    common(p, n=False, d=False)
    p.add_argument("--scope", choices=("all", "qmax", "counts", "qc"), default="all")
    p.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
