"""Command line entry point: ``snakepoly <subcommand> ...`` or ``python -m snakepoly``.

Exit codes: 0 pass, 1 mismatch, 2 budget exhausted, 3 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from collections.abc import Callable, Sequence

from . import __version__, bijection, catalog, inscribed, lattice, maximal
from .series import SeriesError

SCHEMA = 1
EXIT_OK, EXIT_MISMATCH, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3

TABLE1 = [1, 2, 6, 14, 34, 82, 198, 470, 1122, 2662, 6334, 14970, 35506, 83734, 198086, 466314]
PDS2D_LISTED = [1, 1, 2, 6, 14, 32, 72, 160, 354]
PDS3D_LISTED = [1, 1, 3, 13, 45, 153, 517, 1737, 5829]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonable(x):
    """Big integers become strings; tuples become lists."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(command: str, params: dict, body: dict, fmt: str, rows: list[dict] | None = None) -> None:
    if fmt == "json" or rows is None:
        doc = {"schema": SCHEMA, "version": __version__, "command": command, "parameters": params}
        doc.update(_jsonable(body))
        print(json.dumps(doc, indent=2, sort_keys=False))
        return
    header = " ".join(f"{k}={v}" for k, v in params.items())
    if fmt == "csv":
        buf = io.StringIO()
        print(f"# schema={SCHEMA} command={command} {header}", file=buf)
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
        return
    print(f"# {command} {header}")
    if rows:
        cols = list(rows[0])
        widths = [max(len(c), *(len(str(r[c])) for r in rows)) for c in cols]
        print("  ".join(c.rjust(n) for c, n in zip(cols, widths)))
        for r in rows:
            print("  ".join(str(r[c]).rjust(n) for c, n in zip(cols, widths)))


# -- subcommands ------------------------------------------------------------------

def cmd_gf(args) -> int:
    try:
        r = catalog.lookup(args.name)
    except ValueError as e:
        raise UsageError(str(e)) from None
    coeffs = r.coefficients(args.order)
    params = {"name": args.name, "order": args.order}
    rows = [{"n": n, "count": c} for n, c in enumerate(coeffs)]
    _emit("gf expand", params, {"coefficients": coeffs}, args.format, rows)
    return EXIT_OK


def _class_counts(cls: str, n: int, dim: int, workers: int, budget: int | None) -> list[int]:
    if cls == "pds":
        return lattice.count_pds_table(n, dim)[1:]
    if cls == "snake":
        t = lattice.enumerate_snakes(n, dim, workers=workers, memory_budget=budget)
        return [t[i] for i in range(1, n + 1)]
    counts = [0] * n
    for s in lattice.iter_snakes(n, dim, "kiss-free", workers):
        counts[len(s) - 1] += 1
    return counts


def _parse_box(text: str) -> tuple[int, int]:
    try:
        b, k = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"bad rectangle {text!r}; expected BxK") from None
    return b, k


def cmd_enumerate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.cls == "kiss-free" and args.dim != 2:
        raise UsageError("kiss-free snakes are planar")
    params = {"class": args.cls, "dim": args.dim, "n": args.n, "workers": args.workers}
    if args.inscribed or args.emit:
        box = _parse_box(args.inscribed) if args.inscribed else None
        if box and args.dim != 2:
            raise UsageError("--inscribed is planar")
        params["inscribed"] = args.inscribed
        count = 0
        out = open(args.emit, "w") if args.emit else None
        try:
            for s in lattice.iter_snakes(args.n, args.dim, args.cls, args.workers):
                if box and s.extent() != box:
                    continue
                count += 1
                if out:
                    out.write(json.dumps(s.to_json_obj()) + "\n")
        finally:
            if out:
                out.close()
        _emit("enumerate", params, {"count": count}, args.format, [{"n": args.n, "count": count}])
        return EXIT_OK
    counts = _class_counts(args.cls, args.n, args.dim, args.workers, args.memory_budget)
    rows = [{"n": i + 1, "count": c} for i, c in enumerate(counts)]
    _emit("enumerate", params, {"count": counts[-1], "table": counts}, args.format, rows)
    return EXIT_OK


def cmd_inscribed(args) -> int:
    if args.b < 1:
        raise UsageError("--b must be >= 1")
    gf = inscribed.gf_inscribed_pds(args.b, args.order)
    table = sorted(gf.table().items())
    params = {"b": args.b, "order": args.order, "verify": args.verify}
    rows = [{"k": k, "n": n, "count": c} for (k, n), c in table]
    body = {"coefficients": [[k, n, c] for (k, n), c in table]}
    status = EXIT_OK
    if args.verify:
        n_max = min(args.order, args.n_max)
        bad = inscribed.verify_inscribed(args.b, args.k_max, n_max, args.order)
        body["verified"] = {"k_max": args.k_max, "n_max": n_max, "mismatches": bad}
        if bad:
            b, k, n, got, want = bad[0]
            print(f"mismatch at (b={b}, k={k}, n={n}): gf {got} vs oracle {want}", file=sys.stderr)
            status = EXIT_MISMATCH
    _emit("inscribed", params, body, args.format, rows)
    return status


def _parse_rows(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad row list {text!r}") from None


def cmd_bijection(args) -> int:
    if args.mode == "forward":
        if not args.rows:
            raise UsageError("forward needs --rows")
        g = bijection.Bargraph(_parse_rows(args.rows))
        s = bijection.bargraph_to_bubble(g)
        params = {"mode": "forward", "rows": list(g.rows)}
        _emit("bijection", params, {"bubble": s.to_json_obj(), "width": s.extent()[0]}, "json")
        return EXIT_OK
    if args.mode == "inverse":
        if not args.cells:
            raise UsageError("inverse needs --cells")
        with open(args.cells) as fh:
            s = lattice.CellSet.from_json_obj(json.load(fh))
        try:
            g = bijection.bubble_to_bargraph(s)
        except bijection.InvalidBubble as e:
            print(f"not a bubble: {e}", file=sys.stderr)
            return EXIT_MISMATCH
        _emit("bijection", {"mode": "inverse", "cells": args.cells}, {"rows": list(g.rows)}, "json")
        return EXIT_OK
    report = check_bijection(args.max_cells, args.max_width)
    params = {"mode": "check", "max_cells": args.max_cells, "max_width": args.max_width}
    _emit("bijection", params, report, "json")
    return EXIT_OK if report["ok"] else EXIT_MISMATCH


def check_bijection(max_cells: int, max_width: int) -> dict:
    """Round trip and injectivity over every bargraph with <= max_cells cells and width <= max_width."""
    images: dict = {}
    failures = []
    checked = 0

    def rec(rows: list[int], area: int):
        nonlocal checked
        if rows:
            g = bijection.Bargraph(tuple(rows))
            checked += 1
            try:
                s = bijection.bargraph_to_bubble(g)
                back = bijection.bubble_to_bargraph(s)
            except ValueError as e:
                failures.append({"rows": list(rows), "error": str(e)})
            else:
                if back != g or s.extent()[0] != g.width + 1:
                    failures.append({"rows": list(rows), "error": "round trip or width map"})
                if s in images:
                    failures.append({"rows": list(rows), "error": f"collides with {images[s]}"})
                images[s] = list(rows)
        for n in range(1, max_width + 1):
            if area + n <= max_cells:
                rows.append(n)
                rec(rows, area + n)
                rows.pop()

    rec([], 0)
    return {"ok": not failures, "checked": checked, "failures": failures[:20]}


def cmd_maxlen(args) -> int:
    try:
        if args.mode == "report":
            rep = maximal.conjecture_report(args.bmax, args.kmax, args.workers, args.node_budget)
            rows = [
                {"b": r.b, "k": r.k, "formula": r.formula, "pds": r.pds,
                 "kiss_free": r.kiss_free, "general": r.general}
                for r in rep.rows
            ]
            smallest = rep.smallest_general_excess()
            body = {
                "rows": rows,
                "kiss_free_violations": rep.kiss_free_violations,
                "pds_mismatches": rep.pds_mismatches,
                "general_excess": rep.general_excess,
                "smallest_general_excess": None if smallest is None else {
                    "b": smallest.spec.b, "k": smallest.spec.k, "length": smallest.length,
                    "path": smallest.path,
                },
            }
            params = {"bmax": args.bmax, "kmax": args.kmax, "node_budget": args.node_budget}
            _emit("maxlen report", params, body, args.format, rows)
            return EXIT_OK
        if args.b is None or args.k is None:
            raise UsageError("maxlen needs --b and --k")
        spec = maximal.SearchSpec(args.b, args.k, args.cls, args.node_budget)
        res = maximal.max_snake_length(spec, args.workers)
    except maximal.SearchBudgetExceeded as e:
        print(str(e), file=sys.stderr)
        return EXIT_BUDGET
    formula = maximal.formula_max_pds(args.b, args.k)
    if args.witness:
        with open(args.witness, "w") as fh:
            json.dump({"schema": SCHEMA, "path": res.path, **res.witness.to_json_obj()}, fh)
    params = {"b": args.b, "k": args.k, "class": spec.cls, "node_budget": args.node_budget}
    body = {"length": res.length, "formula": formula, "path": res.path, "nodes": res.nodes}
    _emit("maxlen", params, body, args.format, [{"b": args.b, "k": args.k, "length": res.length}])
    return EXIT_OK


# -- verification pipeline ------------------------------------------------------

PROFILES = {
    "quick": {"table1": 12, "gf_n": 10, "inscribed_b": 4, "inscribed_n": 12,
              "bijection_cells": 6, "grid": 5},
    "full": {"table1": 16, "gf_n": 14, "inscribed_b": 5, "inscribed_n": 14,
             "bijection_cells": 8, "grid": 6},
}


def _diff(name: str, got: Sequence, want: Sequence) -> list[dict]:
    return [
        {"check": name, "index": i, "got": g, "expected": w}
        for i, (g, w) in enumerate(zip(got, want))
        if g != w
    ] + ([{"check": name, "length": [len(got), len(want)]}] if len(got) != len(want) else [])


def _checks(p: dict, workers: int) -> list[tuple[str, Callable[[], list]]]:
    def table1():
        t = lattice.enumerate_snakes(p["table1"], 2, workers=workers)
        return _diff("table1", [t[n] for n in range(1, p["table1"] + 1)], TABLE1[: p["table1"]])

    def gf2d():
        n = p["gf_n"]
        exp = catalog.gf_pds_2d().coefficients(n)
        return _diff("gf2d", exp, lattice.count_pds_table(n, 2)) + _diff(
            "gf2d_listed", exp[:9], PDS2D_LISTED
        )

    def gf3d():
        n = min(p["gf_n"], 10)
        exp = catalog.gf_pds_3d().coefficients(n)
        return _diff("gf3d", exp, lattice.count_pds_table(n, 3)) + _diff(
            "gf3d_listed", exp[:9], PDS3D_LISTED
        )

    def identities():
        out = []
        for n in (2, 3, 4, 5):
            pds = catalog.gf_pds_nd(n)
            if catalog.gf_s1_nd(n) + catalog.gf_s2_nd(n, pds) != pds:
                out.append({"check": "partition", "dim": n})
        if catalog.gf_pds_nd(2) != catalog.gf_pds_2d() or catalog.gf_pds_nd(3) != catalog.gf_pds_3d():
            out.append({"check": "nd_specialization"})
        return out

    def inscribed_check():
        out = []
        for b in range(2, p["inscribed_b"] + 1):
            for b_, k, n, got, want in inscribed.verify_inscribed(b, 6, p["inscribed_n"]):
                out.append({"check": "inscribed", "b": b_, "k": k, "n": n, "got": got, "expected": want})
        return out

    def bubbles():
        order = 14
        bad = []
        total = inscribed.gf_bubble_all(order)
        if inscribed.bubble_map(total) != total:
            bad.append({"check": "bubble_fixed_point_residual"})
        census = lattice.pds_census(order)
        by_n = [0] * (order + 1)
        for (r, k, n, w), v in census.bubbles.items():
            by_n[n] += v
        bad += _diff("bubble_total", total.specialize(t=1, w=1).integer_coefficients(), by_n)
        return bad

    def bij():
        rep = check_bijection(p["bijection_cells"], 4)
        return [{"check": "bijection", **f} for f in rep["failures"]]

    report = []

    def grid_report():
        if not report:
            report.append(maximal.conjecture_report(p["grid"], p["grid"], workers))
        return report[0]

    def kiss_free_formula():
        return [{"check": "kiss_free_formula", "b": b, "k": k} for b, k in grid_report().kiss_free_violations]

    def pds_formula():
        return [{"check": "pds_formula", "b": b, "k": k} for b, k in grid_report().pds_mismatches]

    def general_excess():
        if p["grid"] >= 6 and grid_report().smallest_general_excess() is None:
            return [{"check": "general_excess_missing"}]
        return []

    return [
        ("table1", table1),
        ("gf2d", gf2d),
        ("gf3d", gf3d),
        ("rational_identities", identities),
        ("inscribed", inscribed_check),
        ("bubbles", bubbles),
        ("bijection", bij),
        ("extremal_kiss_free", kiss_free_formula),
        ("extremal_pds_formula", pds_formula),
        ("extremal_general", general_excess),
    ]


def run_verify(profile: str, workers: int = 1) -> dict:
    results = []
    for name, fn in _checks(PROFILES[profile], workers):
        t0 = time.perf_counter()
        try:
            diff = fn()
            status = "pass" if not diff else "fail"
        except (lattice.MemoryBudgetExceeded, maximal.SearchBudgetExceeded) as e:
            diff, status = [{"check": name, "error": str(e)}], "budget"
        results.append(
            {"name": name, "status": status, "seconds": round(time.perf_counter() - t0, 3), "diff": diff}
        )
    return {"profile": profile, "checks": results}


def cmd_verify(args) -> int:
    report = run_verify(args.profile, args.workers)
    statuses = {r["status"] for r in report["checks"]}
    status = "fail" if "fail" in statuses else "budget" if "budget" in statuses else "pass"
    params = {"profile": args.profile, "workers": args.workers}
    rows = [{"check": r["name"], "status": r["status"], "seconds": r["seconds"]} for r in report["checks"]]
    _emit("verify", params, {"status": status, "checks": report["checks"]}, args.format, rows)
    return {"pass": EXIT_OK, "fail": EXIT_MISMATCH, "budget": EXIT_BUDGET}[status]


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--workers", type=int, default=1)

    p = _Parser(prog="snakepoly", description="Exact enumeration of snake polyominoes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gf = sub.add_parser("gf", help="closed-form generating functions")
    gsub = gf.add_subparsers(dest="gf_command", required=True, parser_class=_Parser)
    ex = gsub.add_parser("expand", parents=[common], help="expand a GF to a given order")
    ex.add_argument("--name", required=True, help="sne, pds2d, pds3d, pdsnd:N or pdsx1:N")
    ex.add_argument("--order", type=int, default=20)
    ex.set_defaults(func=cmd_gf)

    en = sub.add_parser("enumerate", parents=[common], help="brute-force counts")
    en.add_argument("--class", dest="cls", choices=("snake", "pds", "kiss-free"), default="snake")
    en.add_argument("--dim", type=int, default=2)
    en.add_argument("--n", type=int, required=True)
    en.add_argument("--inscribed", metavar="BxK", help="only snakes with this bounding box")
    en.add_argument("--emit", metavar="FILE", help="write the cell sets as JSON lines")
    en.add_argument("--memory-budget", type=int, default=None, help="bytes; also SNAKEPOLY_MEMORY_BUDGET")
    en.set_defaults(func=cmd_enumerate)

    ins = sub.add_parser("inscribed", parents=[common], help="width-b inscribed PDS series")
    ins.add_argument("--b", type=int, required=True)
    ins.add_argument("--order", type=int, default=20)
    ins.add_argument("--verify", action="store_true")
    ins.add_argument("--k-max", type=int, default=6)
    ins.add_argument("--n-max", type=int, default=14)
    ins.set_defaults(func=cmd_inscribed)

    bj = sub.add_parser("bijection", parents=[common], help="bargraph to bubble map")
    bj.add_argument("mode", choices=("forward", "inverse", "check"))
    bj.add_argument("--rows", help="comma-separated row lengths, bottom to top")
    bj.add_argument("--cells", help="JSON file holding a cell set")
    bj.add_argument("--max-cells", type=int, default=8)
    bj.add_argument("--max-width", type=int, default=4)
    bj.set_defaults(func=cmd_bijection)

    mx = sub.add_parser("maxlen", parents=[common], help="longest inscribed snakes")
    mx.add_argument("mode", nargs="?", choices=("search", "report"), default="search")
    mx.add_argument("--b", type=int)
    mx.add_argument("--k", type=int)
    mx.add_argument("--class", dest="cls", default="general",
                    choices=("pds", "kiss-free", "kiss_free", "general"))
    mx.add_argument("--witness", help="write the witness cell set to this JSON file")
    mx.add_argument("--bmax", type=int, default=6)
    mx.add_argument("--kmax", type=int, default=6)
    mx.add_argument("--node-budget", type=int, default=maximal.DEFAULT_NODE_BUDGET)
    mx.set_defaults(func=cmd_maxlen)

    vf = sub.add_parser("verify", parents=[common], help="run the reproduction checks")
    vf.add_argument("--profile", choices=tuple(PROFILES), default="quick")
    vf.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        print("snakepoly: error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"snakepoly: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except lattice.MemoryBudgetExceeded as e:
        print(f"snakepoly: memory budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, SeriesError) as e:
        print(f"snakepoly: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
