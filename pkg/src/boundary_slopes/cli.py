"""Command-line front end: ``boundary-slopes <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import data, families
from .degeneration import format_index, read_index_file
from .gluing import ExponentMatrix, build_R, order_classes, parse_edge_table
from .peripheral import PeripheralCurve, parse_curves
from .search import BudgetError, CertificationMismatch, evaluate_index, exhaustive_search
from .triangulation import (
    EdgeClass,
    Triangulation,
    TriangulationError,
    apply_delta,
    diagnostics,
    edge_classes,
    parse_triangulation,
)

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("boundary_slopes")


class UsageError(ValueError):
    pass


@dataclass
class Problem:
    """Everything a command needs, resolved from the command-line options."""

    name: str
    triangulation: Triangulation
    classes: list[EdgeClass]
    omit: object = None
    curves: tuple[PeripheralCurve, PeripheralCurve] | None = None
    indices: list[tuple[int, ...]] | None = None
    renumbered: bool = False

    def R(self) -> ExponentMatrix:
        if self.omit is None:
            raise UsageError("--omit-edge is required for this triangulation")
        return build_R(self.triangulation, self.classes, self.omit)


def _text(source: str, suffix: str) -> str | None:
    """File contents if ``source`` is a path, shipped data if it is a shipped name."""
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    try:
        return data.read_text(f"{source}{suffix}")
    except FileNotFoundError:
        return None


def _read_triangulation(source: str) -> Triangulation:
    if source in data.TRIANGULATIONS:
        return data.triangulation(source)
    path = Path(source)
    if not path.is_file():
        raise UsageError(f"no triangulation file or shipped name {source!r} "
                         f"(shipped: {', '.join(data.TRIANGULATIONS)})")
    text = path.read_text(encoding="utf-8")
    for line in text.splitlines():
        if line.startswith("#") and line.lstrip("# ").startswith("base:"):
            base = line.split(":", 1)[1].strip()
            return apply_delta(_read_triangulation(base), text)
    return parse_triangulation(text)


def load_problem(args) -> Problem:
    source = args.triangulation
    tri = _read_triangulation(source)
    shipped = families.SHIPPED_MEMBERS.get(source)
    omit = getattr(args, "omit_edge", None)
    renumbered = False
    if shipped and not Path(source).is_file():
        fam, n = shipped
        mem = families.member(fam, n)
        tri = mem.triangulation
        renumbered = data.relabeling(source) is not None
        classes = order_classes(edge_classes(tri), families.class_representatives(families.family_spec(fam), tri.size))
        prob = Problem(source, tri, classes, omit or families.family_spec(fam).omit,
                       (mem.meridian, mem.longitude), list(mem.indices), renumbered)
    else:
        classes = edge_classes(tri)
        prob = Problem(source, tri, classes, omit)
    row_order = getattr(args, "row_order", None)
    if row_order:
        text = _text(row_order, ".edges")
        if text is None:
            raise UsageError(f"no edge table {row_order!r}")
        reps = [members[0] for _, _, members in parse_edge_table(text)]
        prob.classes = order_classes(edge_classes(prob.triangulation), reps)
    curves = getattr(args, "curves", None)
    if curves:
        text = _text(curves, ".curves")
        if text is None:
            raise UsageError(f"no curve file {curves!r}")
        prob.curves = parse_curves(text)
    indices = getattr(args, "indices", None)
    if indices:
        text = _text(indices, ".idx")
        if text is None:
            raise UsageError(f"no index file {indices!r}")
        prob.indices = read_index_file(text)
    if prob.curves and len(prob.curves[0]) != 2 * tri.size:
        raise UsageError(f"curves have {len(prob.curves[0]) // 2} tets, triangulation has {tri.size}")
    return prob


def _emit(obj, as_json: bool, text: str, out) -> None:
    if as_json:
        out.write(json.dumps(obj) + "\n")
    else:
        out.write(text + ("\n" if not text.endswith("\n") else ""))


# --------------------------------------------------------------------------
# commands


def cmd_validate(args, out) -> int:
    prob = load_problem(args)
    tri = prob.triangulation
    degrees = [c.degree for c in prob.classes]
    notes = diagnostics(tri, prob.classes)
    summary = f"{tri.size} tets, {len(prob.classes)} edge classes, degrees {degrees}"
    if prob.renumbered:
        summary += " (tets renumbered to match the curve data)"
    text = "\n".join([summary] + [f"warning: {n}" for n in notes] + ["ok"])
    _emit({"tets": tri.size, "edge_classes": len(prob.classes), "degrees": degrees,
           "warnings": notes, "ok": True}, args.json, text, out)
    return EXIT_OK


def cmd_edges(args, out) -> int:
    prob = load_problem(args)
    rows = [{"id": c.id, "degree": c.degree, "members": [f"{t}({p})" for t, p in c.members]}
            for c in prob.classes]
    text = "\n".join(f"{r['id']} {r['degree']}: {' '.join(r['members'])}" for r in rows)
    _emit(rows, args.json, text, out)
    return EXIT_OK


def cmd_matrix(args, out) -> int:
    R = load_problem(args).R()
    _emit({"omitted_edge": R.omitted_edge, "omitted_member": f"{R.omitted_member[0]}:{R.omitted_member[1]}",
           "rows": [list(r) for r in R.rows]}, args.json, R.dump(), out)
    return EXIT_OK


def _need_curves(prob: Problem):
    if prob.curves is None:
        raise UsageError("--curves is required")
    return prob.curves


def cmd_slopes(args, out) -> int:
    prob = load_problem(args)
    m, l = _need_curves(prob)
    if not prob.indices:
        raise UsageError("--indices is required")
    R = prob.R()
    n = R.n_tets
    for index in prob.indices:
        if len(index) != n:
            raise UsageError(f"index {format_index(index)} has length {len(index)}, expected {n}")
        res = evaluate_index(R, m, l, index)
        rec = res.to_json()
        if args.json:
            out.write(json.dumps(rec) + "\n")
        elif res.certified:
            out.write(f"{format_index(index)}  slope {rec['slope']}  "
                      f"(v_mu, v_lambda) = ({res.v_mu}, {res.v_lambda})  c = {rec['c']}\n")
        else:
            out.write(f"{format_index(index)}  not sign-definite\n")
    return EXIT_OK


def cmd_search(args, out) -> int:
    prob = load_problem(args)
    m, l = _need_curves(prob)

    def progress(done, total):
        if args.progress:
            print(f"\rchunk {done}/{total}", end="", file=sys.stderr, flush=True)

    report = exhaustive_search(prob.R(), m, l, workers=args.workers, resume_token=args.resume,
                               prune=args.prune, max_chunks=args.max_chunks, force=args.force,
                               progress=progress)
    if args.progress:
        print(file=sys.stderr)
    if args.json:
        out.write(json.dumps(report.to_json()) + "\n")
    else:
        for r in report.certified:
            out.write(f"{format_index(r.index)}  slope {r.slope}  "
                      f"d = {list(r.d)}\n")
        out.write(f"scanned {report.scanned} of {report.total}; distinct slopes: "
                  f"{', '.join(map(str, report.distinct_slopes)) or 'none'}\n")
        if report.resume_token:
            out.write(f"resume token: {report.resume_token}\n")
        log.info("wall time %.1f s", report.wall_time)
    return EXIT_OK


def cmd_family(args, out) -> int:
    rows = families.family_report(args.family, args.max_n)
    if args.json:
        out.write(json.dumps([r.to_json() for r in rows]) + "\n")
    else:
        for r in rows:
            flags = " ".join(f"{k}={'-' if v is None else ('ok' if v else 'FAIL')}"
                             for k, v in (("closed_form", r.closed_form_ok), ("lemma", r.lemma_ok),
                                          ("recurrence", r.recurrence_ok)))
            out.write(f"n={r.n:<3} tets={r.tets:<3} slopes {', '.join(map(str, r.slopes))}  {flags}\n")
    return EXIT_OK if all(r.ok for r in rows) else EXIT_INTERNAL


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boundary-slopes",
                                     description="Boundary slopes from ideal triangulations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, curves=False):
        p.add_argument("--triangulation", "-t", required=True,
                       help=f"triangulation file or shipped name ({', '.join(data.TRIANGULATIONS)})")
        p.add_argument("--row-order", help="edge table (file or shipped name) fixing the class order")
        p.add_argument("--json", action="store_true", help="JSON output")
        if curves:
            p.add_argument("--omit-edge", help='redundant edge class: "tet:pair" member or class id')
            p.add_argument("--curves", help="meridian/longitude file or shipped name")

    p = sub.add_parser("validate", help="check a gluing table and summarize its edges")
    common(p)
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("edges", help="list edge classes")
    common(p)
    p.set_defaults(func=cmd_edges)
    p = sub.add_parser("matrix", help="dump the matrix R")
    common(p, curves=True)
    p.set_defaults(func=cmd_matrix)
    p = sub.add_parser("slopes", help="evaluate given degeneration indices")
    common(p, curves=True)
    p.add_argument("--indices", help="index file (one index per line over 0, 1, i) or shipped name")
    p.set_defaults(func=cmd_slopes)
    p = sub.add_parser("search", help="scan all 3^n degeneration indices")
    common(p, curves=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--resume", metavar="TOKEN", help="continue an interrupted scan")
    p.add_argument("--max-chunks", type=int, help="stop after this many chunks")
    p.add_argument("--prune", action="store_true", help="exact depth-first scan with pruning")
    p.add_argument("--force", action="store_true", help="allow n above the hard limit")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_search)
    p = sub.add_parser("family", help="build K_n or J_n members and check the closed forms")
    p.add_argument("--family", choices=["K", "J", "k", "j"], required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_family)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args, out)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CertificationMismatch, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (TriangulationError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
