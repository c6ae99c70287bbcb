"""Command-line front end.

Every command prints a deterministic report.  Exit codes: 0 success (an
UNDECIDED verdict included), 1 a ``verify`` check failed, 2 parse error,
3 budget exhausted, 4 chain is not a cycle, 5 polygon cannot be squared,
6 empty pattern set.
"""

import argparse
import sys
from fractions import Fraction

from . import homology, refinement, surface
from .asymptotic import DEFAULT_MAX_N, asymptotic_norm_upper, lipschitz_bound
from .errors import (
    BudgetExhausted,
    ClockwisePolygon,
    DegenerateAfterZigzag,
    DimensionMismatch,
    DuplicateId,
    EdgeColorCountMismatch,
    EmptyPatternSet,
    EmptySet,
    NonConvexInput,
    NonSimplePolygon,
    NotACycle,
    NotIntegral,
    TileSyntaxError,
)
from .reduction import encode_as_wang, forget_colors, scale_to_integral, zigzag
from .report import Report, parse_report
from .tileset import (
    PolygonPrototileSet,
    canonical_serialize,
    format_cycle,
    parse_any,
    parse_cycle,
    parse_polygon_set,
    parse_wang_tileset,
    validate_polygon_set,
)

PARSE_ERRORS = (
    TileSyntaxError,
    DuplicateId,
    EmptySet,
    NonSimplePolygon,
    ClockwisePolygon,
    EdgeColorCountMismatch,
    DimensionMismatch,
)

EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_NOT_CYCLE = 4
EXIT_SQUARE = 5
EXIT_EMPTY_PATTERNS = 6


class CommandError(Exception):
    def __init__(self, code, message, report=None):
        super().__init__(message)
        self.code = code
        self.report = report


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path, parser=parse_any):
    try:
        return parser(_read(path))
    except PARSE_ERRORS as exc:
        raise CommandError(EXIT_PARSE, f"parse error: {exc}") from None


def _point(ids, vec):
    return "(" + ",".join(f"{tid}={Fraction(v)}" for tid, v in zip(ids, vec)) + ")"


def _tileset_block(report, ts):
    report.block("tileset", canonical_serialize(ts).splitlines())


def cmd_analyze(args):
    ts = _load(args.file)
    cx = homology.build_ap_complex(ts)
    rep = Report()
    rep.kv("command", "analyze")
    _tileset_block(rep, ts)
    if isinstance(ts, PolygonPrototileSet):
        rep.block("validation", validate_polygon_set(ts).lines())
    rep.kv("cells2", cx.n)
    rep.kv("cells1", cx.m)
    rep.block("switching_rules", [eq.format(cx.cells2) for eq in homology.switching_rules(cx)])
    basis = homology.cycle_space_basis(cx)
    rep.kv("kernel_dim", len(basis))
    rep.block("kernel_basis", [format_cycle(v, cx.cells2, skip_zero=False) for v in basis])
    cone = homology.nonneg_cycle_exists(cx)
    if not cone.exists:
        rep.kv("cone", "empty")
        rep.block("cone_certificate", ["y " + " ".join(str(v) for v in cone.certificate)])
        rep.kv("extreme_points", "[]")
        return rep
    rep.kv("cone", "nonempty")
    try:
        desc = homology.simplex_extreme_points(cx, budget=args.budget_nodes)
    except BudgetExhausted as exc:
        rep.kv("extreme_points", "incomplete")
        raise CommandError(EXIT_BUDGET, str(exc), rep) from None
    rep.kv("extreme_points", "[" + ", ".join(_point(cx.cells2, v) for v in desc.extreme_points) + "]")
    rep.block("extreme_points", [format_cycle(v, cx.cells2, skip_zero=False) for v in desc.extreme_points])
    return rep


def cmd_norm(args):
    ts = _load(args.file, parse_wang_tileset)
    cx = homology.build_ap_complex(ts)
    try:
        c = parse_cycle(args.cycle, cx.cells2)
    except PARSE_ERRORS as exc:
        raise CommandError(EXIT_PARSE, f"parse error: {exc}") from None
    rep = Report()
    rep.kv("command", "norm")
    _tileset_block(rep, ts)
    rep.kv("cycle", format_cycle(c, cx.cells2))
    try:
        table = asymptotic_norm_upper(cx, c, max_n=args.max_n, budget=args.budget_nodes)
    except NotACycle as exc:
        raise CommandError(EXIT_NOT_CYCLE, f"not a cycle: {exc}") from None
    rep.block("normtable", table.report_lines())
    best = table.best_upper
    rep.kv("best_upper", "none" if best is None else best)
    rep.kv("lipschitz_bound", lipschitz_bound(cx, c))
    exact = table.exact_rows
    if exact:
        row = min(exact, key=lambda r: (Fraction(r.value, r.n), r.n))
        if row.certificate is not None and row.certificate.witness is not None:
            rep.kv("witness_n", row.n)
            lines = [format_cycle(row.certificate.cycle, cx.cells2)]
            lines.extend(row.certificate.witness.report_lines())
            rep.block("surface", lines)
    if not table.complete:
        rep.kv("status", "partial")
        raise CommandError(EXIT_BUDGET, "norm search exceeded its budget", rep)
    rep.kv("status", "exact")
    return rep


def cmd_tileability(args):
    ts = _load(args.file, parse_wang_tileset)
    verdict = refinement.tileability(ts, max_p=args.max_p, budget=args.budget_nodes)
    rep = Report()
    rep.kv("command", "tileability")
    _tileset_block(rep, ts)
    rep.kv("verdict", verdict.kind)
    if verdict.reason:
        rep.kv("reason", verdict.reason)
    rep.block("verdict", verdict.report_lines())
    return rep


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_squareify(args):
    ps = _load(args.file, parse_polygon_set)
    scaled, scale = scale_to_integral(ps)
    try:
        wang, emap = encode_as_wang(zigzag(scaled))
    except (NonConvexInput, DegenerateAfterZigzag, NotIntegral) as exc:
        raise CommandError(EXIT_SQUARE, f"cannot square the polygons: {exc}") from None
    rep = Report()
    rep.kv("command", "squareify")
    rep.kv("scale", scale)
    rep.kv("tiles", len(wang))
    rep.kv("seams", len(emap.seam_colors))
    _tileset_block(rep, wang)
    rep.block("encoding", emap.report_lines())
    if args.out:
        _write(args.out, canonical_serialize(wang))
    return rep


def cmd_wp(args):
    ts = _load(args.file, parse_wang_tileset)
    rep = Report()
    rep.kv("command", "wp")
    rep.kv("p", args.p)
    try:
        ps = refinement.enumerate_patterns(ts, args.p, budget=args.budget_nodes)
    except BudgetExhausted as exc:
        rep.kv("patterns", "incomplete")
        raise CommandError(EXIT_BUDGET, str(exc), rep) from None
    rep.kv("patterns", ps.count)
    rep.block("pattern_counts", [f"center {t.id} {n}" for t, n in zip(ts.tiles, ps.counts())])
    try:
        wp = refinement.build_wp_tileset(ps)
    except EmptyPatternSet as exc:
        raise CommandError(EXIT_EMPTY_PATTERNS, str(exc), rep) from None
    rep.kv("supertiles", len(wp))
    _tileset_block(rep, wp)
    if args.out:
        _write(args.out, canonical_serialize(wp))
    return rep


def cmd_forget(args):
    ts = _load(args.file, parse_wang_tileset)
    out = forget_colors(ts)
    rep = Report()
    rep.kv("command", "forget")
    _tileset_block(rep, out)
    if args.out:
        _write(args.out, canonical_serialize(out))
    return rep


# -- verification -------------------------------------------------------------


def _parse_surface(ts, lines):
    ids = ts.ids
    copies, pairs, stated = [], [], {}
    cycle = None
    side = {name: i for i, name in enumerate(surface.SIDE_NAMES)}

    def slot(tok):
        cid, _, name = tok.partition(".")
        return int(cid), side[name]

    for line in lines:
        toks = line.split()
        if toks[0] == "cycle":
            cycle = parse_cycle(line, ids)
        elif toks[0] == "copy":
            copies.append(surface.SquareCopy(int(toks[1]), ids.index(toks[2]), 1 if toks[3] == "+" else -1))
        elif toks[0] == "glue":
            pairs.append((slot(toks[1]), slot(toks[2])))
        elif toks[0].endswith(":"):
            stated[toks[0][:-1]] = int(toks[1])
    return surface.GluedSurface(ts, tuple(copies), tuple(pairs)), cycle, stated


def _parse_tiling(lines):
    k = l = s = None
    cells = []
    for line in lines:
        toks = line.split()
        if toks[0] == "period":
            k, l, s = map(int, toks[1:4])
        elif toks[0] == "at":
            cells.append((int(toks[1]), int(toks[2]), toks[3]))
    return surface.PeriodicTiling(k, l, s, tuple(sorted(cells)))


def verify_report(text):
    """Re-check every certificate in a report; returns (ok, list of result lines)."""
    values, blocks = parse_report(text)
    results = []
    ts = None
    for name, lines in blocks:
        if name == "tileset":
            ts = parse_any("\n".join(lines))
    if ts is None:
        return False, ["tileset: missing"]
    cx = homology.build_ap_complex(ts)
    ok = True

    def record(label, good):
        nonlocal ok
        ok &= bool(good)
        results.append(f"{label}: {'ok' if good else 'FAILED'}")

    for name, lines in blocks:
        if name == "extreme_points":
            for i, line in enumerate(lines):
                c = parse_cycle(line, cx.cells2)
                good = (
                    homology.is_cycle(cx, c)
                    and all(v >= 0 for v in c)
                    and sum(c) == 1
                    and homology.is_vertex(cx, c)
                )
                record(f"extreme_point({i})", good)
        elif name == "cone_certificate":
            y = tuple(Fraction(v) for v in lines[0].split()[1:])
            record("cone_certificate", homology.check_empty_cone_certificate(cx, y))
        elif name == "surface":
            surf, cycle, stated = _parse_surface(ts, lines)
            problems = surface.check_surface(surf)
            good = not problems and cycle is not None and tuple(surf.cycle()) == tuple(cycle)
            good = good and stated.get("chi", surf.chi) == surf.chi and stated.get("V", surf.V) == surf.V
            record("surface", good)
        elif name == "verdict":
            kind = lines[0].split()[1]
            cert = lines[1].split() if len(lines) > 1 else []
            if kind == refinement.CANNOT_TILE and cert[1] == "EmptyCone":
                y = tuple(Fraction(v) for v in cert[2:])
                record("verdict EmptyCone", homology.check_empty_cone_certificate(cx, y))
            elif kind == refinement.CANNOT_TILE:
                p = int(cert[2].partition("=")[2])
                record(f"verdict NoPattern p={p}", not refinement.pattern_exists_bruteforce(ts, p))
            elif kind == refinement.TILES_PERIODICALLY:
                tiling = _parse_tiling(lines[2:])
                record("verdict PeriodicTiling", not tiling.problems(ts))
            else:
                results.append("verdict UNDECIDED: nothing to check")
    if "cycle" in values and values.get("command") == "norm":
        c = parse_cycle(values["cycle"], cx.cells2)
        record("cycle", homology.is_cycle(cx, c))
    return ok, results


def cmd_verify(args):
    text = _read(args.file)
    rep = Report()
    rep.kv("command", "verify")
    try:
        ok, results = verify_report(text)
    except PARSE_ERRORS + (ValueError, IndexError, KeyError) as exc:
        raise CommandError(EXIT_PARSE, f"unreadable report: {exc}") from None
    rep.lines.extend(results)
    rep.kv("verified", "yes" if ok else "no")
    if not ok:
        rep.exit_code = EXIT_VERIFY
    return rep


# -- entry point --------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=surface.DEFAULT_NODE_BUDGET, help="search node budget")
    common.add_argument("--seed", type=int, default=None, help="accepted for compatibility; all algorithms are deterministic")
    common.add_argument("--out", default=None, help="write the produced tile set (or the report) to this file")

    parser = argparse.ArgumentParser(prog="wangnorm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="complex, switching rules, cone and its extreme points")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("norm", parents=[common], help="norm table of a cycle")
    p.add_argument("file")
    p.add_argument("cycle", help='e.g. "cycle A=1/2 B=1/2"')
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--budget", dest="budget_nodes", type=int, help="alias of --budget-nodes")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("tileability", parents=[common], help="decide tileability within budgets")
    p.add_argument("file")
    p.add_argument("--max-p", type=int, default=refinement.DEFAULT_MAX_P)
    p.add_argument("--budget", dest="budget_nodes", type=int, help="alias of --budget-nodes")
    p.set_defaults(func=cmd_tileability)

    p = sub.add_parser("squareify", parents=[common], help="encode polygon prototiles as Wang tiles")
    p.add_argument("file")
    p.set_defaults(func=cmd_squareify)

    p = sub.add_parser("wp", parents=[common], help="build the enforced-color tile set W^p")
    p.add_argument("file")
    p.add_argument("-p", type=int, default=1)
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("forget", parents=[common], help="recolor every edge with one color")
    p.add_argument("file")
    p.set_defaults(func=cmd_forget)

    p = sub.add_parser("verify", parents=[common], help="re-check the certificates in a report")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)
    return parser


_TILESET_COMMANDS = {"squareify", "wp", "forget"}


def run(argv):
    """Run a command; returns (exit code, report text, error message)."""
    args = build_parser().parse_args(argv)
    if args.budget_nodes is None:
        args.budget_nodes = surface.DEFAULT_NODE_BUDGET
    try:
        rep = args.func(args)
    except CommandError as exc:
        text = exc.report.text() if exc.report is not None else ""
        return exc.code, text, str(exc)
    except OSError as exc:
        return EXIT_PARSE, "", str(exc)
    text = rep.text()
    if args.out and args.command not in _TILESET_COMMANDS:
        _write(args.out, text)
    return rep.exit_code, text, None


def main(argv=None):
    code, text, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    if err:
        print(f"error: {err}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
