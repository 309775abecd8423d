"""Command-line interface: ``tcrp {plan,bounds,table,verify,instability}``.

Exit status: 0 on success, 1 when a verification or consistency check fails,
2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from tcrp import bounds, verify
from tcrp.instability import estimate_instability
from tcrp.planner import MotionPlanner, builtin_planner, veronese_planner
from tcrp.projective import ProjectivePoint

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def choose_planner(n: int, kind: str | None) -> MotionPlanner:
    if n < 1:
        raise UsageError("n must be at least 1")
    kind = kind or ("builtin" if n <= 7 else "veronese")
    if kind == "builtin":
        if n > 7:
            raise UsageError("built-in planners cover 1 <= n <= 7; use --planner veronese")
        return builtin_planner(n)
    return veronese_planner(n)


def _point(n: int, coords: list[float], flag: str) -> ProjectivePoint:
    if len(coords) != n + 1:
        raise UsageError(f"{flag} needs {n + 1} coordinates for RP^{n}, got {len(coords)}")
    if not any(coords):
        raise UsageError(f"{flag} is the zero vector, which spans no line")
    return ProjectivePoint.from_vector(coords)


def cmd_plan(args) -> tuple[str, int]:
    planner = choose_planner(args.n, args.planner)
    A = _point(args.n, args.a, "--a")
    B = _point(args.n, args.b, "--b")
    i, path = planner.plan_with_index(A, B)
    rule = planner.rules[i]
    rec = path.to_record(args.resolution)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rule_index", "rule_label", "t"] + [f"x{k}" for k in range(1, args.n + 2)])
        for s in rec["samples"]:
            w.writerow([i + 1, rule.label, repr(s["t"])] + [repr(c) for c in s["coords"]])
        return buf.getvalue(), EXIT_OK
    out = {"n": args.n, "planner": planner.name, "rule_index": i + 1, "rule_label": rule.label}
    out.update(segments=rec["segments"], samples=rec["samples"])
    return _dump(out), EXIT_OK


def cmd_bounds(args) -> tuple[str, int]:
    if args.n < 1:
        raise UsageError("n must be at least 1")
    if args.space == "cp":
        res = bounds.zd_cuplength_cp_details(args.n)
        rec = {
            "space": "CP",
            "n": args.n,
            "zero_divisor_cup_length": res.cup_length,
            "top_coefficient": res.top_coefficient,
            "lower": res.lower,
            "upper": res.upper,
            "tc": res.value,
        }
        return _dump(rec), EXIT_OK
    try:
        report = bounds.bounds_report(args.n)
    except bounds.ConsistencyError as exc:
        return _dump({"n": args.n, "error": str(exc)}), EXIT_FAIL
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=bounds.CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        row = report.csv_row()
        w.writerow({k: ("" if row[k] is None else row[k]) for k in bounds.CSV_FIELDS})
        return buf.getvalue(), EXIT_OK
    return _dump(report.to_record()), EXIT_OK


def cmd_table(args) -> tuple[str, int]:
    if not 1 <= args.max <= bounds.TABLE_MAX_N:
        raise UsageError(f"--max must lie in 1..{bounds.TABLE_MAX_N}")
    reports = [bounds.bounds_report(n, check=False) for n in range(1, args.max + 1)]
    status = EXIT_OK if all(r.sandwich_ok() for r in reports) else EXIT_FAIL
    if args.format == "json":
        return _dump([r.to_record() for r in reports]), status
    return bounds.table_csv(args.max), status


def cmd_verify(args) -> tuple[str, int]:
    if args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(verify.SUITES)}")
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    rep = verify.report(args.suite, args.seed, args.samples)
    return _dump(rep), EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_instability(args) -> tuple[str, int]:
    if args.delta <= 0:
        raise UsageError("--delta must be positive")
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    planner = choose_planner(args.n, args.planner)
    est = estimate_instability(planner, args.samples, args.delta, seed=args.seed)
    rec = {"n": args.n, "planner": planner.to_record(), "seed": args.seed}
    rec.update(est.to_record())
    return _dump(rec), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tcrp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("plan", help="plan a motion between two lines")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=_floats, required=True, help="start line, comma-separated coordinates")
    sp.add_argument("--b", type=_floats, required=True, help="target line, comma-separated coordinates")
    sp.add_argument("--resolution", type=int, default=101)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--planner", choices=("builtin", "veronese"))
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("bounds", help="bounds on TC for one n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--space", choices=("rp", "cp"), default="rp")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("table", help="bounds table for n = 1..max")
    sp.add_argument("--max", type=int, default=bounds.TABLE_MAX_N)
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("verify", help="run a seeded property suite")
    sp.add_argument("--suite", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("instability", help="estimate the order of instability of a planner")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--delta", type=float, default=1e-3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--planner", choices=("builtin", "veronese"))
    sp.set_defaults(func=cmd_instability)
    return p


def _join_coordinate_flags(argv: list[str]) -> list[str]:
    # "--b -6,5" would otherwise read "-6,5" as an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--a", "--b"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_coordinate_flags(argv))
    if getattr(args, "resolution", 2) < 2:
        print("tcrp: error: --resolution must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        text, status = args.func(args)
    except UsageError as exc:
        print(f"tcrp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
