"""Command-line entry points: ingest, synth, gen, replay, bench, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from .caches import resolve_strategy_name
from .collection import (
    Collection,
    CollectionError,
    generate_synthetic_collection,
    load_collection,
)
from .simulator import TraceError, generate_session, read_trace, replay, write_trace


def _parse_seeds(text: str) -> list[int]:
    """Accept a single seed, an inclusive a..b range, or a comma list."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    if "," in text:
        return [int(t) for t in text.split(",") if t]
    return [int(text)]


def _cmd_ingest(args: argparse.Namespace) -> int:
    c = load_collection(args.document)
    for idx in c.untagged_resource_ids:
        print(f"warning: resource {c.resources[idx].external_id!r} has no tags",
              file=sys.stderr)
    print(f"{c.n_resources} resources, {c.n_tags} tags")
    if args.out:
        Path(args.out).write_text(c.export_json(), encoding="utf-8")
        print(f"wrote normalized document to {args.out}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    c = generate_synthetic_collection(args.resources, args.tags,
                                      args.mean_tags, args.skew, args.seed)
    Path(args.out).write_text(c.export_json(), encoding="utf-8")
    print(f"{c.n_resources} resources, {c.n_tags} tags -> {args.out}")
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    c = load_collection(args.collection)
    trace = generate_session(c, args.seed, args.actions)
    write_trace(c, trace, args.out)
    suffix = " (ended early)" if trace.ended_early else ""
    print(f"{len(trace.actions)} actions{suffix} -> {args.out}")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    c = load_collection(args.collection)
    trace = read_trace(c, args.trace)
    steps = replay(c, trace, resolve_strategy_name(args.strategy))
    hits = sum(1 for s in steps[1:] if s.hit)
    print(f"{len(steps) - 1} actions, {hits} cache hits")
    if args.digests:
        with open(args.digests, "w", encoding="utf-8") as fh:
            for i, step in enumerate(steps):
                fh.write(json.dumps({"step": i,
                                     "filtered": step.filtered_key.hex(),
                                     "selectable": step.selectable_key.hex(),
                                     "hit": step.hit}) + "\n")
        print(f"wrote digests to {args.digests}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    c = load_collection(args.collection)
    seeds = _parse_seeds(args.seeds)
    strategies = tuple(resolve_strategy_name(s)
                       for s in args.strategies.split(",") if s)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = bench_mod.compare_strategies(
        c, seeds, args.actions, strategies, warmup=args.warmup,
        n_bins=args.bins, keep_first_seed_series=args.cumulative)
    bench_mod.write_bench_csv(report, out_dir / "bench.csv")
    bench_mod.write_report_json(report, out_dir / "report.json")
    if args.cumulative:
        bench_mod.write_cumulative_csv(report, out_dir / "cumulative.csv")
    print(f"{len(seeds)} sessions x {args.actions} actions, "
          f"strategies: {', '.join(strategies)}")
    if report.improvement_mean is not None:
        print(f"mean improvement: {report.improvement_mean:.1f}%")
    if report.wilcoxon is not None:
        print(f"wilcoxon: Z = {report.wilcoxon.z:.3f}, p = {report.wilcoxon.p:.3g}")
    print(f"wrote {out_dir / 'bench.csv'} and {out_dir / 'report.json'}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    collections: dict[str, Collection] = {}
    for path in args.collection:
        c = load_collection(path)
        collections[c.name] = c
    app = create_app(collections)
    print(f"serving {len(collections)} collection(s) on http://{args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagbrowse",
        description="Tag-based browsing engine, cache-strategy benchmark, and service")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and index a collection document")
    p.add_argument("document")
    p.add_argument("--out", help="write the normalized document here")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic collection document")
    p.add_argument("--resources", type=int, required=True)
    p.add_argument("--tags", type=int, required=True)
    p.add_argument("--mean-tags", type=float, default=6.0)
    p.add_argument("--skew", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("gen", help="generate a seeded browsing-session trace")
    p.add_argument("--collection", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--actions", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("replay", help="replay a trace under one strategy")
    p.add_argument("--collection", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--digests", help="write per-step state digests here")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("bench", help="time strategies over identical traces")
    p.add_argument("--collection", required=True)
    p.add_argument("--seeds", required=True,
                   help="single seed, inclusive range a..b, or comma list")
    p.add_argument("--actions", type=int, required=True)
    p.add_argument("--strategies", default="query,resource",
                   help="comma list from: none,query,resource (or n,q,r)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--cumulative", action="store_true",
                   help="also write cumulative.csv for the first seed")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--collection", action="append", required=True,
                   help="collection document (repeatable)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CollectionError, TraceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
