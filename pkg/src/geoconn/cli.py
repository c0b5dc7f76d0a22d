"""Command line harness: gen, run, verify, bench, classes, separator."""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import runner, workload
from .errors import GeoConnError
from .oracle import oracle_class_count_experiment
from .separator import find_disk_separator
from .workload import DEFAULT_BOUND, sample_objects


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GEOCONN_SEED")
    if env is not None:
        return int(env)
    return 0


def _write(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path, rows, columns):
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        wr = csv.DictWriter(out, fieldnames=columns, extrasaction="ignore")
        wr.writeheader()
        for row in rows:
            wr.writerow(row)
    finally:
        if path:
            out.close()


def _ratios(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("ratios must be insert,delete,query,count")
    return tuple(parts)


def _int_list(text):
    return [int(p) for p in text.split(",")]


def cmd_gen(args) -> int:
    w = workload.generate(
        args.family,
        args.n,
        args.ops,
        args.density,
        _seed_from(args),
        bound=args.bound,
        ratios=args.ratios,
    )
    _write(args.out, workload.format_workload(w))
    return 0


def _load(path) -> workload.Workload:
    with open(path) as fh:
        return workload.parse_workload(fh.read())


def cmd_run(args) -> int:
    w = _load(args.workload)
    res = runner.run_workload(w, q_override=args.q, collect_stats=args.stats is not None)
    _write(args.out, "".join(line + "\n" for line in res.outputs))
    if args.stats:
        _write_csv(
            args.stats,
            res.stats,
            ["idx", "op", "micros", "phase", "classes", "displaced_weight", "sigma"],
        )
    return 0


def cmd_verify(args) -> int:
    w = _load(args.workload)
    report = runner.verify_workload(w, q_override=args.q)
    print(report.describe())
    return 0 if report.match else 1


def cmd_bench(args) -> int:
    rows = []
    for n in args.n_list:
        for seed in range(args.seeds):
            rows.append(runner.bench_one(args.family, n, seed, args.density))
    _write_csv(
        args.out,
        rows,
        [
            "family",
            "n",
            "seed",
            "updates",
            "queries",
            "amortized_update_us",
            "mean_query_us",
            "displaced_weight",
            "classes",
            "phases",
        ],
    )
    return 0


def cmd_classes(args) -> int:
    density = args.density
    family = args.family
    n = args.n
    bound = args.bound

    def factory(seed, q):
        objs = sample_objects(family, n, density, seed * 7919 + 13, bound=bound)
        qobjs = sample_objects(family, q, density, seed * 104729 + 37, bound=bound, start_id=n)
        return objs, qobjs

    rows = oracle_class_count_experiment(factory, args.q_list, range(args.seeds))
    _write_csv(args.out, rows, ["q", "n", "components", "classes", "seed"])
    return 0


def cmd_separator(args) -> int:
    rows = []
    for n in args.n_list:
        for seed in range(args.seeds):
            disks = sample_objects("disk", n, args.density, seed * 31 + n)
            res = find_disk_separator(disks)
            rows.append(
                {
                    "n": n,
                    "seed": seed,
                    "inside": len(res.inside_ids),
                    "outside": len(res.outside_ids),
                    "boundary": len(res.boundary_ids),
                    "stab_points": len(res.stabbing_points_scaled),
                }
            )
    _write_csv(args.out, rows, ["n", "seed", "inside", "outside", "boundary", "stab_points"])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geoconn", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a workload file")
    g.add_argument("--family", required=True, choices=["axis", "segment", "disk"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--ops", type=int, default=0)
    g.add_argument("--density", type=float, default=1.5)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    g.add_argument("--ratios", type=_ratios, default=workload.DEFAULT_RATIOS)
    g.add_argument("--out", default=None)
    g.set_defaults(fn=cmd_gen)

    r = sub.add_parser("run", help="execute a workload on the engine")
    r.add_argument("workload")
    r.add_argument("--q", type=int, default=None, help="override phase length policy")
    r.add_argument("--out", default=None)
    r.add_argument("--stats", default=None, help="write per-op stats CSV here")
    r.set_defaults(fn=cmd_run)

    v = sub.add_parser("verify", help="run engine and oracle side by side")
    v.add_argument("workload")
    v.add_argument("--q", type=int, default=None)
    v.set_defaults(fn=cmd_verify)

    b = sub.add_parser("bench", help="amortized timing sweep")
    b.add_argument("--family", required=True, choices=["axis", "segment", "disk"])
    b.add_argument("--n-list", type=_int_list, required=True)
    b.add_argument("--seeds", type=int, default=1)
    b.add_argument("--density", type=float, default=1.5)
    b.add_argument("--out", default=None)
    b.set_defaults(fn=cmd_bench)

    c = sub.add_parser("classes", help="equivalence class count experiment")
    c.add_argument("--family", default="axis", choices=["axis", "segment", "disk"])
    c.add_argument("--n", type=int, default=2000)
    c.add_argument("--q-list", type=_int_list, default=[2, 4, 8, 16, 32])
    c.add_argument("--seeds", type=int, default=3)
    c.add_argument("--density", type=float, default=1.5)
    c.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    c.add_argument("--out", default=None)
    c.set_defaults(fn=cmd_classes)

    s = sub.add_parser("separator", help="disk separator sweep")
    s.add_argument("--n-list", type=_int_list, default=[100, 400, 1600])
    s.add_argument("--seeds", type=int, default=3)
    s.add_argument("--density", type=float, default=1.5)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_separator)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except GeoConnError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
