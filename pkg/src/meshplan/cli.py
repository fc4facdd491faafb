"""Command line front end: generate instances, solve, benchmark.

Exit codes: 0 success, 1 bad usage or flag values, 2 runtime failure
(unreadable files, malformed regions, infeasible grids).
"""

import argparse
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .metropolis import OptimizerConfig
from .reduction import CoverDepthMap, Placement, plan, render_coverage
from .region import generate_region, parse_region, serialize_region


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="meshplan", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random region file")
    g.add_argument("--width", type=int, required=True)
    g.add_argument("--height", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--required-frac", type=float, default=0.3)
    g.add_argument("--prohibited-frac", type=float, default=0.05)
    g.add_argument("--out", required=True)

    s = sub.add_parser("solve", help="plan placements for one region")
    _solver_flags(s)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="report.json")
    s.add_argument("--render", default=None,
                   help="also write a PPM of the nr_max_2 state")

    b = sub.add_parser("bench", help="run several seeded plans and aggregate")
    _solver_flags(b)
    b.add_argument("--runs", type=int, default=3)
    b.add_argument("--seed", type=int, default=0, help="base seed; run i uses seed+i")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", default=None, help="table file (default stdout)")
    return p


def _solver_flags(p):
    p.add_argument("--region", required=True)
    p.add_argument("--radius", type=int, default=12)
    p.add_argument("--temp", type=float, default=0.1)
    p.add_argument("--iters", type=int, default=4000)
    p.add_argument("--stop", type=int, default=500)
    p.add_argument("--init-factor", type=float, default=1.5)
    p.add_argument("--strategy", default="min-single",
                   choices=("min-single", "max-optional", "max-over"))


def _config(args, seed) -> OptimizerConfig:
    try:
        return OptimizerConfig(
            temperature=args.temp, num_iter=args.iters, stop=args.stop,
            radius=args.radius, init_factor=args.init_factor,
            seed=seed, removal_strategy=args.strategy,
        )
    except ValueError as e:
        raise _UsageError(str(e)) from None


def _load_region(path):
    return parse_region(Path(path).read_text())


def _cmd_gen(args) -> int:
    if args.width < 1 or args.height < 1:
        raise _UsageError("width and height must be >= 1")
    try:
        grid = generate_region(args.width, args.height, args.seed,
                               args.required_frac, args.prohibited_frac)
    except ValueError as e:
        raise _UsageError(str(e)) from None
    Path(args.out).write_text(serialize_region(grid))
    print(f"wrote {args.out}")
    return 0


def _cmd_solve(args) -> int:
    config = _config(args, args.seed)
    grid = _load_region(args.region)
    report = plan(grid, config, instance=Path(args.region).name)
    Path(args.out).write_text(report.to_json())
    if args.render is not None:
        row = report.milestone("nr_max_2")
        placement = Placement(config.radius, list(row.centers))
        m = CoverDepthMap.from_placement(grid, placement)
        Path(args.render).write_bytes(render_coverage(grid, m, placement))
    print(f"wrote {args.out}")
    return 0


def _bench_one(payload):
    text, kwargs, instance = payload
    grid = parse_region(text)
    return plan(grid, OptimizerConfig(**kwargs), instance=instance)


def _cmd_bench(args) -> int:
    if args.runs < 1:
        raise _UsageError("--runs must be >= 1")
    if args.jobs < 1:
        raise _UsageError("--jobs must be >= 1")
    base = _config(args, args.seed)
    text = Path(args.region).read_text()
    parse_region(text)  # fail fast before spawning workers
    name = Path(args.region).name
    jobs = []
    for i in range(args.runs):
        kwargs = {
            "temperature": base.temperature, "num_iter": base.num_iter,
            "stop": base.stop, "radius": base.radius,
            "init_factor": base.init_factor, "seed": args.seed + i,
            "removal_strategy": base.removal_strategy,
        }
        jobs.append((text, kwargs, name))
    if args.jobs == 1:
        reports = [_bench_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_bench_one, jobs))
    table = _format_bench(name, args, reports)
    if args.out is None:
        sys.stdout.write(table)
    else:
        Path(args.out).write_text(table)
        print(f"wrote {args.out}")
    return 0


_MILESTONE_ORDER = ("nr_init", "nr_same", "nr_max_1", "nr_max_2", "nr_con", "nr_min")
_BENCH_HEADER = ("Run", "Milestone", "Number of Router",
                 "All routers Connected?", "Required Coverage", "Optional Coverage")


def _format_bench(name, args, reports) -> str:
    # no timing data here: output must be byte-identical across reruns
    rows = []
    for i, rep in enumerate(reports, start=1):
        for label in _MILESTONE_ORDER:
            m = rep.milestone(label)
            if m is None:
                continue
            rows.append((str(i), label, str(m.router_count),
                         "yes" if m.all_connected else "no",
                         f"{m.required_pct:.2f}%", f"{m.optional_pct:.2f}%"))
    widths = [max(len(h), *(len(r[c]) for r in rows))
              for c, h in enumerate(_BENCH_HEADER)]
    lines = [f"bench {name} runs={args.runs} base-seed={args.seed}", ""]
    lines.append("  ".join(h.ljust(w) for h, w in zip(_BENCH_HEADER, widths)))
    prev = None
    for r in rows:
        if prev is not None and r[0] != prev:
            lines.append("")
        prev = r[0]
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    lines += ["", "aggregate"]
    lines.append("  ".join(("Milestone".ljust(9), "Stat".ljust(6),
                            "Required Coverage", "Optional Coverage")))
    for label in _MILESTONE_ORDER:
        req = [rep.milestone(label).required_pct for rep in reports
               if rep.milestone(label) is not None]
        opt = [rep.milestone(label).optional_pct for rep in reports
               if rep.milestone(label) is not None]
        if not req:
            continue
        for stat, f in (("min", min), ("median", statistics.median), ("max", max)):
            lines.append("  ".join((label.ljust(9), stat.ljust(6),
                                    f"{f(req):.2f}%".ljust(17),
                                    f"{f(opt):.2f}%")))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_bench(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
