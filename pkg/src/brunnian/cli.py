"""Command-line entry point: ``brunnian verify|table|density|group-check``.

Exit codes: 0 verified True, 1 not decided (or not certified), 2 invalid
input, 3 over the point or factoring budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .construction import ConjectureReport, GroupCheck, Verdict, group_check, verify_instance
from .errors import DomainError, InfeasibleError, ParseError
from .permgroup import DEFAULT_POINT_BUDGET
from .poly import parse_poly
from .tables import DensityCount, TableRow, density, load_fixture, table_rows

EXIT_TRUE, EXIT_NOT_DECIDED, EXIT_INVALID, EXIT_INFEASIBLE = 0, 1, 2, 3


def _md_table(header: list[str], rows: list[list]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join("" if v is None else str(v) for v in r) + " |" for r in rows]
    return "\n".join(lines)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _flat(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flat(v, f"{prefix}{k}."))
        elif isinstance(v, list):
            out[prefix + k] = "; ".join(map(str, v))
        else:
            out[prefix + k] = v
    return out


def render_report(report: ConjectureReport, fmt: str) -> str:
    d = report.to_dict()
    if fmt == "json":
        return json.dumps(d, indent=2)
    flat = _flat({k: v for k, v in d.items() if v is not None})
    if fmt == "csv":
        return _csv(list(flat), [list(flat.values())])
    return _md_table(["field", "value"], [[k, v] for k, v in flat.items()])


def render_rows(rows: list[TableRow], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2)
    if fmt == "csv":
        header = ["n", "p", "poly", "primitive", "verdict", "paper_verdict", "x_order", "warnings"]
        return _csv(header, [[r.n, r.p, r.poly, r.primitive, r.verdict.value, r.paper_verdict,
                              r.x_order, "; ".join(r.warnings)] for r in rows])
    header = ["n", "p", "P(x)", "B(n,p,P)", "primitive", "notes"]
    return _md_table(header, [[r.n, r.p, r.poly, r.verdict.table_label(),
                               "deferred" if r.primitive is None else r.primitive, "; ".join(r.warnings)]
                              for r in rows])


def render_density(dc: DensityCount, fmt: str) -> str:
    d = dc.to_dict()
    if fmt == "json":
        return json.dumps(d, indent=2)
    if fmt == "csv":
        return _csv(list(d), [list(d.values())])
    return _md_table(["quantity", "value"], [[k, v] for k, v in d.items()])


def render_group_check(gc: GroupCheck, fmt: str) -> str:
    d = gc.to_dict()
    if fmt == "json":
        return json.dumps(d, indent=2)
    flat = _flat(d)
    if fmt == "csv":
        return _csv(list(flat), [list(flat.values())])
    return _md_table(["field", "value"], [[k, v] for k, v in flat.items()])


def _n_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <lo>..<hi>, got {text!r}") from None
    if hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo_i, hi_i + 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brunnian", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    formats = ["md", "csv", "json"]

    v = sub.add_parser("verify", help="full report for one (p, f)")
    v.add_argument("-p", type=int, required=True)
    v.add_argument("-f", required=True, help="polynomial such as 'x^7+x^6+2'")
    v.add_argument("--group-check", action="store_true")
    v.add_argument("--points", type=int, default=DEFAULT_POINT_BUDGET)
    v.add_argument("--format", choices=formats, default="md")

    t = sub.add_parser("table", help="verdict table for one prime")
    t.add_argument("-p", required=True, help="prime, or 'all' for every bundled table")
    t.add_argument("--n", type=_n_range, default=None, help="<lo>..<hi>")
    t.add_argument("--source", choices=["paper", "search"], default="paper")
    t.add_argument("--format", choices=formats, default="md")
    t.add_argument("--jobs", type=int, default=1)

    d = sub.add_parser("density", help="fraction of (p, n) pairs the criterion leaves open")
    d.add_argument("-N", type=int, required=True)
    d.add_argument("--format", choices=formats, default="md")

    g = sub.add_parser("group-check", help="Schreier-Sims certificate for <G_1..G_n> and <C, G>")
    g.add_argument("-p", type=int, required=True)
    g.add_argument("-n", type=int, required=True)
    g.add_argument("-f", default=None)
    g.add_argument("--points", type=int, default=DEFAULT_POINT_BUDGET)
    g.add_argument("--format", choices=formats, default="md")
    return parser


def _verify(args) -> int:
    report = verify_instance(args.p, args.f, args.group_check, args.points)
    cert = report.group_certificate
    if cert is not None and not cert.equal:
        report.warnings.append("group check: <G_1, ..., G_n> is smaller than GL_n(F_p)")
    print(render_report(report, args.format))
    if args.group_check and cert is None:
        return EXIT_INFEASIBLE
    ok = report.verdict is Verdict.TRUE and report.identities_ok and (cert is None or cert.equal)
    return EXIT_TRUE if ok else EXIT_NOT_DECIDED


def _table(args) -> int:
    if args.p == "all":
        if args.n is not None:
            raise DomainError("--n cannot be combined with -p all")
        primes = sorted({r.p for r in load_fixture()})
    else:
        try:
            primes = [int(args.p)]
        except ValueError:
            raise DomainError(f"-p expects a prime or 'all', got {args.p!r}") from None
    rows = []
    for p in primes:
        rows += table_rows(p, args.n, args.source, args.jobs)
    print(render_rows(rows, args.format))
    return EXIT_TRUE


def _density(args) -> int:
    print(render_density(density(args.N), args.format))
    return EXIT_TRUE


def _group_check(args) -> int:
    f = None if args.f is None else parse_poly(args.f, args.p)
    gc = group_check(args.p, args.n, f, args.points)
    print(render_group_check(gc, args.format))
    return EXIT_TRUE if gc.conjugates.equal else EXIT_NOT_DECIDED


COMMANDS = {"verify": _verify, "table": _table, "density": _density, "group-check": _group_check}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_TRUE
    try:
        return COMMANDS[args.command](args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParseError, DomainError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
