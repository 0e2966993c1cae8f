"""Command-line front end.

Exit codes: 0 success, 1 a computed result contradicts the theorem being checked,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import report
from .arith import class_sort_key
from .curve import Curve, SingularCurveError
from .descent import (
    DEFAULT_POINT_BOUND,
    DEFAULT_TORSOR_BOUND,
    Excluded,
    Obstructed,
    REAL_PLACE,
    Solved,
    Torsor,
    Unknown,
    descend,
    search_torsor,
)
from .family import TABLE1, TABLE2, FamilyError, FamilyParams, analyse, scan_pairs
from .torsion import torsion_subgroup

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _status_text(s) -> str:
    if isinstance(s, Solved):
        w = s.witness
        return f"Solved(N={w.N}, M={w.M}, e={w.e})"
    if isinstance(s, Obstructed):
        return "Obstructed(real)" if s.modulus == REAL_PLACE else f"Obstructed({s.modulus})"
    if isinstance(s, Unknown):
        return f"Unknown({s.search_bound})"
    if isinstance(s, Excluded):
        return f"Excluded(via {s.via})"
    return repr(s)


def _poly(terms: list[tuple[int, str]], sep: str = "") -> str:
    """Render sum(c * m) with signs folded in and zero terms dropped."""
    out = ""
    for c, mono in terms:
        if c == 0:
            continue
        coef = "" if abs(c) == 1 and mono else str(abs(c)) + sep
        if not out:
            out = ("-" if c < 0 else "") + coef + mono
        else:
            out += (" - " if c < 0 else " + ") + coef + mono
    return out or "0"


def _fmt_curve(d: dict) -> str:
    return "y^2 = " + _poly([(1, "x^3"), (d["a"], "x^2"), (d["b"], "x")])


def _fmt_classes(cs) -> str:
    return "{" + ", ".join(str(c) for c in sorted(cs, key=class_sort_key)) + "}"


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _render_descent_doc(doc: dict) -> str:
    out = [f"curve: {_fmt_curve(doc['curve'])}"]
    for key in ("gamma", "gamma_bar"):
        side = doc[key]
        c = side["curve"]
        out.append(f"\n[{key}] on {_fmt_curve(c)}")
        out.append(f"confirmed: {_fmt_classes(side['confirmed'])}")
        out.append(f"possible:  {_fmt_classes(side['possible'])}")
        rows = [[t["class"], t["b1"], t["a"], t["b2"], _status_text(report.status_from_dict(t))]
                for t in side["torsors"]]
        out.append(_table(["class", "b1", "a", "b2", "status"], rows).rstrip("\n"))
    r = doc["rank"]
    out.append(f"\nrank bounds: [{r['lower']}, {r['upper']}]")
    if "torsion" in doc:
        gens = ", ".join(f"({g['x']}, {g['y']})" for g in doc["torsion"]["generators"])
        out.append(f"torsion: {doc['torsion']['structure']} generated by [{gens}]")
    if "rank_over_Qi" in doc:
        r = doc["rank_over_Qi"]
        out.append(f"rank over Q(i): [{r['lower']}, {r['upper']}]")
    for v in doc.get("verdicts", []):
        out.append(f"claim {v['theorem']}: {v['status']}" + "".join(f"\n  {n}" for n in v["notes"]))
    return "\n".join(out) + "\n"


def _render_rows(doc: dict) -> str:
    rows = []
    for r in doc["rows"]:
        fam = r["family"]
        kl = [fam.get("k", ""), fam.get("l", "")]
        rank = f"[{r['rank']['lower']}, {r['rank']['upper']}]"
        qi = f"[{r['rank_over_Qi']['lower']}, {r['rank_over_Qi']['upper']}]"
        rows.append([*kl, fam["p"], fam["q"], rank, qi, r["torsion"]["structure"], r["row_status"]])
    return _table(["k", "l", "p", "q", "rank", "rank Q(i)", "torsion", "status"], rows)


def _emit(doc: dict, fmt: str, out_path: str | None, render) -> None:
    text = report.dumps(doc) if fmt == "json" else render(doc)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _positive(name: str, value: int) -> None:
    if value < 1:
        raise UsageError(f"--{name} must be positive, got {value}")


# -- workers (module level so they pickle) ----------------------------------


def _row(params: FamilyParams, theorem: str, bound: int, point_bound: int | None) -> dict:
    res = analyse(params, bound, point_bound)
    d = report.family_to_dict(res)
    wanted = [v for v in d["verdicts"] if v["theorem"] == theorem]
    d["row_status"] = wanted[0]["status"] if wanted else "N/A"
    return d


def _row_star(args) -> dict:
    return _row(*args)


def _rows(jobs: list[tuple], n_jobs: int) -> list[dict]:
    if n_jobs <= 1 or len(jobs) <= 1:
        return [_row_star(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_row_star, jobs))


# -- subcommands --------------------------------------------------------------


def cmd_descend(args) -> int:
    _positive("bound", args.bound)
    c = Curve(args.a, args.b)
    res = descend(c, args.bound, args.point_bound or None)
    body = report.descent_to_dict(res)
    body["torsion"] = report.torsion_to_dict(torsion_subgroup(c))
    params = {"a": args.a, "b": args.b, "bound": args.bound, "point_bound": args.point_bound}
    _emit(report.document("descend", params, body), args.format, args.out, _render_descent_doc)
    return EXIT_OK


def cmd_torsion(args) -> int:
    c = Curve(args.a, args.b)
    body = {"curve": report.curve_to_dict(c), "torsion": report.torsion_to_dict(torsion_subgroup(c))}

    def render(doc):
        t = doc["torsion"]
        pts = ", ".join("O" if p is None else f"({p['x']}, {p['y']})" for p in t["points"])
        return f"torsion: {t['structure']}\npoints: {pts}\n"

    _emit(report.document("torsion", {"a": args.a, "b": args.b}, body), args.format, args.out, render)
    return EXIT_OK


def _family_params(args) -> FamilyParams:
    if args.k is not None or args.l is not None:
        if args.k is None or args.l is None:
            raise UsageError("--k and --l must be given together")
        if args.p is not None or args.q is not None:
            raise UsageError("give either --p/--q or --k/--l")
        return FamilyParams.from_kl(args.k, args.l)
    if args.p is None or args.q is None:
        raise UsageError("--p and --q are required")
    return FamilyParams(args.p, args.q)


def cmd_family(args) -> int:
    _positive("bound", args.bound)
    params = _family_params(args)
    body = report.family_to_dict(analyse(params, args.bound, args.point_bound or None))
    echo = {"p": params.p, "q": params.q, "bound": args.bound, "point_bound": args.point_bound}
    _emit(report.document("family", echo, body), args.format, args.out, _render_descent_doc)
    mismatch = any(v["status"] == "MISMATCH" for v in body["verdicts"])
    return EXIT_MISMATCH if mismatch else EXIT_OK


def _rows_exit(rows: list[dict]) -> int:
    return EXIT_MISMATCH if any(r["row_status"] == "MISMATCH" for r in rows) else EXIT_OK


def cmd_table(args) -> int:
    _positive("bound", args.bound)
    pb = args.point_bound or None
    if args.which == "1":
        jobs = [(FamilyParams(p, q), "1.1", args.bound, pb) for p, q in TABLE1]
    else:
        jobs = [(FamilyParams.from_kl(k, l), "1.2", args.bound, pb) for k, l in TABLE2]
    rows = _rows(jobs, args.jobs)
    params = {"table": int(args.which), "bound": args.bound, "point_bound": args.point_bound}
    _emit(report.document("table", params, {"rows": rows}), args.format, args.out, _render_rows)
    return _rows_exit(rows)


def cmd_scan(args) -> int:
    _positive("limit", args.limit)
    _positive("bound", args.bound)
    pairs = scan_pairs(args.theorem, args.limit, args.all_congruent)
    jobs = [(fp, args.theorem, args.bound, args.point_bound or None) for fp in pairs]
    rows = _rows(jobs, args.jobs)
    params = {"theorem": args.theorem, "limit": args.limit, "all_congruent": args.all_congruent,
              "bound": args.bound, "point_bound": args.point_bound}
    _emit(report.document("scan", params, {"rows": rows}), args.format, args.out, _render_rows)
    return _rows_exit(rows)


def cmd_torsor(args) -> int:
    _positive("bound", args.bound)
    try:
        t = Torsor(args.b1, args.a, args.b2)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    status = search_torsor(t, args.bound)
    body = {"torsor": {"b1": t.b1, "a": t.a, "b2": t.b2}, **report.status_to_dict(status)}

    def render(doc):
        rhs = _poly([(t.b1, "M^4"), (t.a, "M^2 e^2"), (t.b2, "e^4")], sep=" ")
        return f"N^2 = {rhs}: {_status_text(status)}\n"

    params = {"b1": args.b1, "a": args.a, "b2": args.b2, "bound": args.bound}
    _emit(report.document("torsor", params, body), args.format, args.out, render)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epq-descent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bound=True, point_bound=True, jobs=False):
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--out", metavar="FILE")
        p.add_argument("--timing", action="store_true", help="report wall time on stderr")
        if bound:
            p.add_argument("--bound", type=int, default=DEFAULT_TORSOR_BOUND)
        if point_bound:
            p.add_argument("--point-bound", type=int, default=DEFAULT_POINT_BOUND,
                           help="naive point search height, used only when the descent leaves a gap (0 disables)")
        if jobs:
            p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("descend", help="2-isogeny descent and torsion of y^2 = x^3 + a x^2 + b x")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("torsion", help="torsion subgroup of y^2 = x^3 + a x^2 + b x")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, required=True)
    common(p, bound=False, point_bound=False)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("family", help="analyse E_pq: y^2 = x^3 - 5pq x")
    for flag in ("--p", "--q", "--k", "--l"):
        p.add_argument(flag, type=int)
    common(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("table", help="recompute a table of the rank theorems")
    p.add_argument("which", choices=("1", "2"))
    common(p, jobs=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("scan", help="verify every qualifying prime pair below a limit")
    p.add_argument("--theorem", choices=("1.1", "1.2"), required=True)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--all-congruent", action="store_true",
                   help="for 1.2, keep pairs that fail the perfect-square condition")
    common(p, jobs=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("torsor", help="resolve N^2 = b1 M^4 + a M^2 e^2 + b2 e^4")
    p.add_argument("--b1", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b2", type=int, required=True)
    common(p, point_bound=False)
    p.set_defaults(func=cmd_torsor)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (UsageError, SingularCurveError, FamilyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.timing:
        print(f"timing_ms: {1000 * (time.perf_counter() - start):.1f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
