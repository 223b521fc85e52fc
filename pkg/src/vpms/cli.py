"""Command line entry point: ``vpms solve | bench | compare``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from .bench import load_registry, lookup, run_batch, sign_test
from .graph import read_graph
from .population import vpms_solve
from .records import RunConfig, SizingParams, export_results, load_results

log = logging.getLogger("vpms")


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("vpms", "fpms"), default="vpms")
    p.add_argument("--ps-max", type=int, default=20)
    p.add_argument("--ps-inc", type=int, default=2)
    p.add_argument("--max-idle-gens", type=int, default=100)
    p.add_argument("--max-idle-iters", type=int, default=1000)
    p.add_argument("--history-length", type=int, default=50)
    p.add_argument("--beta", type=float, default=0.6)
    p.add_argument("--crossover-p", type=float, default=0.5)
    p.add_argument("--threshold", type=int, default=None,
                   help="fixed large-component threshold (default: adaptive)")


def _config(args, seed: int, time_limit, max_generations) -> RunConfig:
    return RunConfig(
        seed=seed,
        mode=args.mode,
        time_limit=time_limit,
        max_generations=max_generations,
        sizing=SizingParams(args.ps_max, args.ps_inc, args.max_idle_gens, args.max_idle_iters),
        history_length=args.history_length,
        beta=args.beta,
        crossover_p=args.crossover_p,
        threshold=args.threshold,
    )


def cmd_solve(args) -> int:
    path = Path(args.instance)
    g = read_graph(path, header=args.header)
    meta = None
    try:
        meta = lookup(path.stem)
    except KeyError:
        pass
    k = args.k if args.k is not None else (meta.k if meta else None)
    if k is None:
        raise SystemExit(f"--k is required: {path.stem} is not a registered instance")
    if args.time_limit is None and args.max_generations is None:
        raise SystemExit("give --time-limit and/or --max-generations")
    config = _config(args, args.seed, args.time_limit, args.max_generations)
    log.info("%s: n=%d m=%d k=%d", path.name, g.node_count, g.edge_count, k)

    trace_fh = open(args.trace, "w", encoding="utf-8") if args.trace else None

    def on_generation(rec, pop):
        trace_fh.write(json.dumps(asdict(rec)) + "\n")

    try:
        record = vpms_solve(
            g, k, config,
            instance=meta.name if meta else path.stem,
            f_bkv=meta.f_bkv if meta and k == meta.k else None,
            optimal=bool(meta and meta.optimal and k == meta.k),
            on_generation=on_generation if trace_fh else None,
        )
    finally:
        if trace_fh:
            trace_fh.close()
    if args.out:
        export_results([record], args.out)
    print(record.to_json())
    return 0


def cmd_bench(args) -> int:
    registry = load_registry(args.registry)
    if args.instances:
        wanted = [lookup(name, registry) for name in args.instances]
    else:
        wanted = registry
    config = _config(args, args.seed, args.budget, args.max_generations)
    records = run_batch(wanted, args.repeats, config, args.data_dir, args.seed, args.workers)
    bkv = {m.name: m.f_bkv for m in registry}
    export_results(records, args.out, bkv=bkv)
    failed = [r for r in records if r.error]
    for rec in failed:
        print(f"error: {rec.instance}: {rec.error}", file=sys.stderr)
    print(f"{len(records) - len(failed)} runs written to {args.out}")
    return 1 if failed else 0


def cmd_compare(args) -> int:
    a = load_results(args.a)
    b = load_results(args.b)
    rep = sign_test(a, b, args.indicator, args.alpha)
    print(f"indicator  {rep.indicator}   instances {rep.instances}")
    print(f"A={args.a}: wins {rep.wins_a}  score {rep.score_a:g}  significant {rep.significant_a}")
    print(f"B={args.b}: wins {rep.wins_b}  score {rep.score_b:g}  significant {rep.significant_b}")
    print(f"ties {rep.ties}   CV={rep.critical_value:.2f} (need >= {rep.threshold})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vpms", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--instance", required=True, help="instance file")
    p.add_argument("--k", type=int, default=None, help="number of nodes to remove")
    p.add_argument("--time-limit", type=float, default=None, help="seconds")
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--header", choices=("auto", "yes", "no"), default="auto",
                   help="treat a leading 'n m' line of an edge list as a header")
    p.add_argument("--trace", default=None, help="write per-generation JSON lines here")
    p.add_argument("--out", default=None, help="also write the record as .csv or .json")
    _add_solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run registered instances repeatedly")
    p.add_argument("--registry", default=None, help="CSV registry (default: built-in table)")
    p.add_argument("--instances", nargs="*", default=None, help="subset of instance names")
    p.add_argument("--data-dir", default="data")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--budget", type=float, default=None, help="seconds per run")
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="results.csv")
    _add_solver_args(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("compare", help="two-tailed sign test between result files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--indicator", choices=("f_best", "f_avg"), default="f_best")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - reported as a CLI error
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
