"""Command-line front end.

Exit status: 0 success, 1 bad input, 2 internal consistency failure,
3 oracle disagreement (or no period found within the oracle's budget).
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io
from .errors import ConsistencyError, InputError, NoPeriodUpTo, OracleMismatch
from .flows import analyze_flow, gen_example, gen_random
from .markov import height, markov_table
from .plmap import rotation_number_float, rotation_number_oracle
from .traintrack import run_pipeline

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY, EXIT_ORACLE = 0, 1, 2, 3



def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"

def _fmt_bound(report) -> str:
    if report.bound < 10**12:
        return str(report.bound)
    return f"{report.base}^{report.height}*{report.height}"


def _emit(args, docs, text_lines):
    if args.format == "json":
        out = docs[0] if len(docs) == 1 else docs
        sys.stdout.write(io.dumps(out))
    else:
        for line in text_lines:
            print(line)


def cmd_validate(args):
    status = EXIT_OK
    for path in args.files:
        try:
            t = io.load_map(path)
            print(f"{path}: ok, base {t.base}, {len(t.pieces)} pieces")
        except InputError as exc:
            print(f"{path}: invalid: {type(exc).__name__}: {exc}")
            status = EXIT_INPUT
    return status


def cmd_height(args):
    docs, lines = [], []
    for path in args.files:
        m = height(io.load_map(path))
        docs.append({"file": path, "height": m})
        lines.append(f"{path}: {m}")
    _emit(args, docs, lines)
    return EXIT_OK


def cmd_markov(args):
    t = io.load_map(args.file)
    m = args.m or height(t)
    table = markov_table(t, m)
    doc = io.table_to_doc(table)
    lines = [f"m = {m}, base {table.base}"]
    for i, e in enumerate(doc["entries"]):
        rest = ", ".join(f"{k}={v}" for k, v in e.items() if k != "type")
        lines.append(f"  I{i}: {e['type']} {rest}")
    _emit(args, [doc], lines)
    return EXIT_OK


def cmd_track(args):
    result = run_pipeline(io.load_map(args.file))
    track = {"tau": result.tau, "tau0": result.tau0, "final": result.final}[args.stage]
    if args.dot:
        sys.stdout.write(track.to_dot(args.stage))
        return EXIT_OK
    doc = io.track_to_doc(track)
    lines = [
        f"stage {args.stage}: {len(track.switches)} switches, {len(track.edges)} edges, "
        f"{track.total_weight()} interval items, {len(track.circles())} circles"
    ]
    _emit(args, [doc], lines)
    return EXIT_OK


def _rotnum_one(path, check_oracle, q_max):
    """Worker for one file; returns (doc, text lines, exit status)."""
    try:
        t = io.load_map(path)
        report = run_pipeline(t).report
    except InputError as exc:
        return {"file": path, "error": str(exc)}, [f"{path}: invalid: {exc}"], EXIT_INPUT
    except ConsistencyError as exc:
        return {"file": path, "error": str(exc)}, [f"{path}: internal error: {exc}"], EXIT_CONSISTENCY
    doc = {"file": path, **io.report_to_doc(report)}
    rot = report.rotation_number
    lines = [
        f"{path}: rotation number {rot} (~{float(rot):.6f}), least period {report.least_period}, "
        f"periodic point {report.periodic_point}, height {report.height}, bound {_fmt_bound(report)}"
    ]
    for o in report.circles:
        lines.append(f"  circle: {o.interval_count} intervals, point {o.point}")
    for o in report.cycles:
        lines.append(f"  {o.direction} cycle: {o.interval_count} intervals, point {o.point}, return slope {o.return_slope}")
    status = EXIT_OK
    if check_oracle:
        try:
            oracle = rotation_number_oracle(t, q_max or report.least_period)
            agree = (oracle.rotation_number, oracle.least_period) == (rot, report.least_period)
            doc["oracle"] = {
                "rotation_number": io.format_rational(oracle.rotation_number),
                "least_period": oracle.least_period,
                "agrees": agree,
            }
        except NoPeriodUpTo as exc:
            agree = False
            doc["oracle"] = {"error": str(exc), "agrees": False}
        lines.append(f"  oracle: {'agrees' if agree else 'MISMATCH'}")
        if not agree:
            status = EXIT_ORACLE
    return doc, lines, status


def cmd_rotnum(args):
    if args.float:
        docs, lines = [], []
        for path in args.files:
            est = rotation_number_float(io.load_map(path), args.iters)
            docs.append({"file": path, "rotation_number_float": est, "iterations": args.iters})
            lines.append(f"{path}: {est:.12f} (N={args.iters}, error <= {1 / args.iters:.2g} + round-off)")
        _emit(args, docs, lines)
        return EXIT_OK
    jobs = [(p, args.check_oracle, args.q_max) for p in args.files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_rotnum_one, *zip(*jobs)))
    else:
        results = [_rotnum_one(*j) for j in jobs]
    _emit(args, [r[0] for r in results], [line for r in results for line in r[1]])
    return max(r[2] for r in results)


def cmd_oracle(args):
    t = io.load_map(args.file)
    try:
        res = rotation_number_oracle(t, args.q_max)
    except NoPeriodUpTo as exc:
        print(f"{args.file}: {exc}")
        return EXIT_ORACLE
    doc = {
        "rotation_number": io.format_rational(res.rotation_number),
        "least_period": res.least_period,
        "witness": io.format_rational(res.witness),
    }
    _emit(args, [doc], [f"{args.file}: rotation number {res.rotation_number}, least period {res.least_period}, witness {res.witness}"])
    return EXIT_OK


def cmd_bound_check(args):
    status = EXIT_OK
    print("file,height,least_period,max_itinerary,bound_ok")
    for path in args.files:
        report = run_pipeline(io.load_map(path)).report
        longest = max(o.interval_count for o in report.orbits)
        ok = longest <= report.bound and report.least_period <= report.bound
        print(f"{path},{report.height},{report.least_period},{longest},{'yes' if ok else 'no'}")
        if not ok:
            status = EXIT_CONSISTENCY
    return status


def _write_or_print(doc, out):
    if out:
        io.write_document(out, doc)
    else:
        sys.stdout.write(io.dumps(doc))


def cmd_gen(args):
    fam = args.family
    if fam == "random":
        if args.count == 1 and args.leaves:
            _write_or_print(io.map_to_doc(gen_random(args.base, args.leaves, args.seed)), args.output)
            return EXIT_OK
        if not args.out_dir:
            raise InputError("--out-dir is required with --count > 1")
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        valid = [L for L in range(1, args.max_leaves + 1) if (L - 1) % (args.base - 1) == 0]
        for j in range(args.count):
            L = args.leaves or valid[j % len(valid)]
            seed = args.seed + j
            t = gen_random(args.base, L, seed)
            io.write_document(out / f"random_n{args.base}_L{L}_s{seed}.map", io.map_to_doc(t))
        return EXIT_OK
    if fam == "4.1":
        obj = gen_example("4.1", amount=io.parse_rational(args.amount), base=args.base)
    elif fam == "4.2":
        obj = gen_example("4.2", k=args.k, s=args.s)
    else:
        obj = gen_example("4.3", r1=args.r1, r2=args.r2, r3=args.r3)
    doc = io.track_to_doc(obj) if fam == "4.3" else io.map_to_doc(obj)
    _write_or_print(doc, args.output)
    return EXIT_OK


def cmd_flow(args):
    report = analyze_flow(io.load_track(args.file))
    doc = {
        "circles": list(report.circles),
        "cycles": [{"weight": c.weight, "direction": c.direction} for c in report.cycles],
        "stuck": list(report.stuck),
        "splits": report.splits,
    }
    counts = ", ".join(
        _plural(n, word) for n, word in ((report.splits, "split"), (len(report.circles), "circle"), (len(report.cycles), "cycle"))
    )
    lines = [f"{args.file}: {counts}"]
    lines += [f"  circle of weight {w}" for w in report.circles]
    lines += [f"  {c.direction} cycle of weight {c.weight}" for c in report.cycles]
    lines += [f"  stuck sink: edge {e}" for e in report.stuck]
    _emit(args, [doc], lines)
    return EXIT_OK


def cmd_report(args):
    """Corpus experiment: CSV tables plus figures written to --out-dir."""
    from . import plotting
    from .flows import example42, example43

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    maps = []
    for k, s in [(1, 1), (2, 0), (2, 2), (3, 6), (3, 2), (4, 14)]:
        maps.append((f"ex42_k{k}_s{s}", example42(k, s)))
    for base, leaves in [(2, range(1, 10)), (3, range(1, 10, 2))]:
        for j in range(args.count):
            L = list(leaves)[j % len(leaves)]
            maps.append((f"random_n{base}_L{L}_s{args.seed + j}", gen_random(base, L, args.seed + j)))
    rows = []
    for name, t in maps:
        res = run_pipeline(t)
        rep = res.report
        rows.append(
            {
                "name": name,
                "base": t.base,
                "height": rep.height,
                "rotation_number": io.format_rational(rep.rotation_number),
                "least_period": rep.least_period,
                "max_itinerary": max(o.interval_count for o in rep.orbits),
                "splits": res.trace.splits,
                "log2_bound": f"{rep.height * math.log2(t.base) + math.log2(rep.height):.3f}",
            }
        )
    plotting.write_csv(rows, out / "corpus.csv")
    plotting.plot_period_vs_height(rows, out / "period_vs_height.png")
    flow_rows = []
    for r1 in (1, 2, 4):
        for r3 in (1, 3):
            for r2 in range(1, 11):
                rep = analyze_flow(example43(r1, r2, r3))
                flow_rows.append({"r1": r1, "r2": r2, "r3": r3, "weight": rep.circles[0], "m": r1 + 3 * r2 + r3})
    plotting.write_csv(flow_rows, out / "flow_growth.csv", fields=["r1", "r2", "r3", "m", "weight"])
    plotting.plot_flow_growth(flow_rows, out / "flow_growth.png")
    for name in ("corpus.csv", "period_vs_height.png", "flow_growth.csv", "flow_growth.png"):
        print(out / name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plrot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("validate", help="check map files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("height", help="print the height of each map")
    p.add_argument("files", nargs="+")
    fmt(p)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("markov", help="print the Markov table")
    p.add_argument("file")
    p.add_argument("--m", type=int, help="grid size (default: the height)")
    fmt(p)
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("track", help="show a train-track stage")
    p.add_argument("file")
    p.add_argument("--stage", choices=["tau", "tau0", "final"], default="final")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    fmt(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("rotnum", help="exact (or float) rotation number")
    p.add_argument("files", nargs="+")
    p.add_argument("--float", action="store_true", help="floating-point Poincare estimate instead")
    p.add_argument("--iters", type=int, default=10_000)
    p.add_argument("--check-oracle", action="store_true", help="cross-check with the brute-force oracle")
    p.add_argument("--q-max", type=int, help="oracle budget (default: the reported least period)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for many files")
    fmt(p)
    p.set_defaults(func=cmd_rotnum)

    p = sub.add_parser("oracle", help="brute-force rotation number")
    p.add_argument("file")
    p.add_argument("--q-max", type=int, help="default: base**height * height")
    fmt(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bound-check", help="check itinerary lengths against base**m * m")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_bound_check)

    p = sub.add_parser("gen", help="write example or random map/track files")
    p.add_argument("family", choices=["4.1", "4.2", "4.3", "random"])
    p.add_argument("-o", "--output")
    p.add_argument("--amount", default="1/3", help="rotation amount for 4.1")
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--r1", type=int, default=1)
    p.add_argument("--r2", type=int, default=1)
    p.add_argument("--r3", type=int, default=2)
    p.add_argument("--leaves", type=int)
    p.add_argument("--max-leaves", type=int, default=9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("flow", help="analyze an abstract track file")
    p.add_argument("file")
    fmt(p)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("report", help="corpus experiment: CSV plus figures")
    p.add_argument("--out-dir", default="report")
    p.add_argument("--count", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"internal consistency error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
