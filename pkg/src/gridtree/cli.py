"""Command-line front end: ``gridtree {flow,check,solve,oracle,generate,bench}``.

Every number is printed twice, as an exact "num/den" string and as a
6-significant-digit decimal marked with "≈".  Exit codes: 0 on success, 1
when the result is infeasible or empty, 2 on usage errors.
"""
import argparse
import csv
import decimal
import io
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional

from . import exact_solver, fptas, hardgen, oracle
from .flow import check_feasible, compute_flow, objectives
from .model import (ModelError, Network, is_infinite, network_to_dict, orientation_to_dict,
                    parse_network, parse_orientation)
from .rounding import build_grids, rounded_entering

EXIT_OK, EXIT_EMPTY, EXIT_USAGE = 0, 1, 2
OBJECTIVES = ("min-max-load", "max-min-load", "min-reserve")


class UsageError(Exception):
    pass


def exact(x) -> str:
    if x is None:
        return "undefined"
    if is_infinite(x):
        return str(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def approx(x) -> str:
    if x is None or is_infinite(x):
        return exact(x)
    x = Fraction(x)
    with decimal.localcontext() as ctx:
        ctx.prec = 6
        value = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
    return "≈" + format(value, "g")


def number(x) -> dict:
    return {"exact": exact(x), "approx": approx(x)}


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError("not a rational number: %r" % text)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror))


def _emit(doc, out) -> None:
    out.write(json.dumps(doc, ensure_ascii=False, indent=2) + "\n")


def _load(args) -> Network:
    return parse_network(_read(args.instance))


# -- subcommands --------------------------------------------------------------

def cmd_flow(args, out) -> int:
    net = _load(args)
    o = parse_orientation(net, _read(args.orientation))
    fa = compute_flow(net, o)
    report = check_feasible(net, o)
    doc = {
        "arcs": [{"arc": [a, b], "flow": number(fa.arc_flow[(a, b)])} for a, b in o.arcs],
        "loads": {s: number(fa.load[s]) for s in net.sources},
        "feasible": report.feasible,
        "violations": [{"node": v.node, "kind": v.kind} for v in report.violations],
    }
    if fa.load:
        lo, hi, res = objectives(net, fa)
        doc["objectives"] = {"min_load": number(lo), "max_load": number(hi), "reserve": number(res)}
    if args.rounded:
        ctx = build_grids(net, args.eps_prime)
        r = rounded_entering(net, o.arcs, ctx)
        doc["rounded"] = {
            "eps_prime": exact(ctx.eps_prime), "eps": exact(ctx.eps),
            "arcs": [{"arc": [a, b], "flow": number(r[b])} for a, b in o.arcs],
            "loads": {s: number(r[s] / net.prod(s)) for s in net.sources},
        }
    _emit(doc, out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    net = _load(args)
    o = parse_orientation(net, _read(args.orientation))
    report = check_feasible(net, o)
    _emit({"feasible": report.feasible,
           "violations": [{"node": v.node, "kind": v.kind} for v in report.violations]}, out)
    return EXIT_OK if report.feasible else EXIT_EMPTY


def cmd_solve(args, out) -> int:
    net = _load(args)
    stats: dict = {}
    if args.objective == "min-max-load":
        result = exact_solver.solve_min_max_load(net, stats)
    elif args.objective == "max-min-load":
        result = fptas.solve_max_min_load_fptas(net, args.eps_prime, stats)
    else:
        result = fptas.solve_min_reserve_fptas(net, args.eps_prime, stats)
    if result is None:
        _emit({"objective": args.objective, "value": None, "orientation": None}, out)
        return EXIT_EMPTY
    o, value = result
    doc = {"objective": args.objective, "value": number(value),
           "orientation": orientation_to_dict(o)}
    if args.objective == "min-max-load":
        doc["iterations"] = stats["iterations"]
    else:
        doc["eps_prime"] = exact(args.eps_prime)
        doc["rounded_value"] = number(stats["rounded_value"])
        doc["table_stats"] = {k: stats[k] for k in ("grid_size", "entries", "rational_ops")}
    _emit(doc, out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    net = _load(args)
    stats: dict = {}
    result = oracle.brute_force_optimum(net, args.objective, stats=stats)
    if result is None:
        _emit({"objective": args.objective, "value": None, "orientation": None,
               "count_feasible": 0}, out)
        return EXIT_EMPTY
    o, value = result
    _emit({"objective": args.objective, "value": exact(value), "approx": approx(value),
           "orientation": orientation_to_dict(o), "count_feasible": stats["count_feasible"]}, out)
    return EXIT_OK


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError("expected a comma-separated list of integers: %r" % text)


def cmd_generate(args, out) -> int:
    if args.kind == "random":
        net = hardgen.gen_random_tree(args.n, args.seed, args.profile)
        meta = {"kind": "random", "n": args.n, "seed": args.seed, "profile": args.profile}
    elif args.kind == "gadget":
        if args.x is None or args.m is None:
            raise UsageError("gadget needs --x and --m")
        net = hardgen.gen_gadget(args.x, args.m)
        meta = {"kind": "gadget", "x": args.x, "m": args.m, "N": net.n,
                "terminal_flow": exact(hardgen.gadget_power(args.x, args.m))}
    else:
        if args.xs is None or args.B is None:
            raise UsageError("%s needs --xs and --B" % args.kind)
        xs = _int_list(args.xs)
        if args.kind == "reduction":
            net, rmeta = hardgen.gen_subset_sum_reduction(xs, args.B, strict=args.strict)
        else:
            net, rmeta = hardgen.gen_inapprox_instance(xs, args.B, args.c)
        meta = dict(kind=args.kind, **rmeta.to_dict())
    instance = json.dumps(network_to_dict(net)) + "\n"
    meta_text = json.dumps(meta, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(instance)
    else:
        out.write(instance)
    meta_path = args.meta or (args.out + ".meta.json" if args.out else None)
    if meta_path:
        with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(meta_text)
    else:
        sys.stderr.write(meta_text)
    return EXIT_OK


BENCH_COLUMNS = ["instance", "n", "grid_size", "eps_prime", "objective", "value",
                 "wall_time", "rational_ops"]


def bench_suite(sizes, seeds, eps_prime, objectives_=OBJECTIVES, profile="default",
                fixed_time: bool = False) -> str:
    """CSV report of every objective on seeded random trees, sorted by instance id."""
    rows = []
    for n in sizes:
        for seed in range(seeds):
            net = hardgen.gen_random_tree(n, seed, profile)
            ident = "random-%s-n%d-s%d" % (profile, n, seed)
            for objective in objectives_:
                stats: dict = {}
                start = time.perf_counter()
                if objective == "min-max-load":
                    result = exact_solver.solve_min_max_load(net, stats)
                elif objective == "max-min-load":
                    result = fptas.solve_max_min_load_fptas(net, eps_prime, stats)
                else:
                    result = fptas.solve_min_reserve_fptas(net, eps_prime, stats)
                elapsed = 0.0 if fixed_time else time.perf_counter() - start
                grid = stats.get("grid_size")
                if grid is None:
                    grid = build_grids(net, eps_prime).flow_grid_size()
                rows.append({
                    "instance": ident, "n": n, "grid_size": grid, "eps_prime": exact(eps_prime),
                    "objective": objective, "value": "" if result is None else exact(result[1]),
                    "wall_time": "%.6f" % elapsed,
                    "rational_ops": stats.get("rational_ops", stats.get("iterations", 0)),
                })
    rows.sort(key=lambda r: (r["n"], r["instance"], OBJECTIVES.index(r["objective"])))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def cmd_bench(args, out) -> int:
    if args.suite != "random":
        raise UsageError("unknown suite %r" % args.suite)
    sizes = _int_list(args.sizes)
    if any(n < 2 for n in sizes):
        raise UsageError("sizes must be at least 2")
    objectives_ = [args.objective] if args.objective else list(OBJECTIVES)
    report = bench_suite(sizes, args.seeds, args.eps_prime, objectives_, args.profile,
                         args.fixed_time)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report)
    else:
        out.write(report)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridtree", description="Orient tree-shaped distribution networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("flow", help="exact (and rounded) flow of an orientation")
    p.add_argument("--instance", required=True)
    p.add_argument("--orientation", required=True)
    p.add_argument("--rounded", action="store_true")
    p.add_argument("--eps-prime", type=parse_rational, default=Fraction(1, 10))
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("check", help="feasibility of an orientation")
    p.add_argument("--instance", required=True)
    p.add_argument("--orientation", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="exact min-max-load or approximate max-min-load / min-reserve")
    p.add_argument("--instance", required=True)
    p.add_argument("--objective", required=True, choices=OBJECTIVES)
    p.add_argument("--eps-prime", type=parse_rational, default=Fraction(1, 10))
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive optimum on small instances")
    p.add_argument("--instance", required=True)
    p.add_argument("--objective", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="random trees and reduction instances")
    p.add_argument("kind", choices=("random", "reduction", "inapprox", "gadget"))
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=sorted(hardgen.PROFILES), default="default")
    p.add_argument("--xs")
    p.add_argument("--B", type=int)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--x", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--strict", action="store_true", help="spell unbounded capacities as the total demand")
    p.add_argument("--out")
    p.add_argument("--meta")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="CSV benchmark over seeded random trees")
    p.add_argument("--suite", default="random")
    p.add_argument("--sizes", default="6,8,10")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--eps-prime", type=parse_rational, default=Fraction(1, 10))
    p.add_argument("--objective", choices=OBJECTIVES)
    p.add_argument("--profile", choices=sorted(hardgen.PROFILES), default="default")
    p.add_argument("--fixed-time", action="store_true", help="write 0 wall times for byte-identical reports")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)}, sys.stderr)
        return EXIT_USAGE
    except oracle.OracleLimitExceeded as exc:
        _emit({"error": "limit", "message": str(exc)}, sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        _emit({"error": "invalid", "message": str(exc)}, sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    sys.exit(run(argv))
