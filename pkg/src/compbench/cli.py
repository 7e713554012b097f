"""``bench`` command line: run, detect, order, cost, synth.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
``BENCH_LOG`` sets the log level (default WARNING).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import blockcost
from .bench import report, runner, synth
from .bench.config import METHODS, ConfigError, load_config
from .community import DETECTORS, DetectParams, detect, read_partition, write_partition
from .graph import GraphFormatError, load_manifest, read_edge_list
from .ordering import (
    STRATEGIES,
    SlashBurnParams,
    identity_ordering,
    naive_community_ordering,
    random_ordering,
    read_ordering,
    slashburn_ordering,
    write_ordering,
)

log = logging.getLogger("compbench")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _csv_list(cast):
    def parse(text: str):
        try:
            return tuple(cast(x) for x in text.split(",") if x)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _number(text: str):
    value = float(text)
    return int(value) if value >= 1 and value.is_integer() else value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _datasets_arg(text: str):
    out = []
    for item in text.split(","):
        name, sep, path = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected name=path, got {item!r}")
        out.append((name, Path(path)))
    return tuple(out)


def _load_graph(path):
    try:
        return read_edge_list(path)
    except OSError as exc:
        raise UsageError(f"cannot read graph {path}: {exc}") from exc


def cmd_run(args) -> int:
    config = load_config(args.config)
    if args.manifest:
        try:
            manifest = tuple(load_manifest(args.manifest).items())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read manifest {args.manifest}: {exc}") from exc
        args.datasets = manifest + (args.datasets or ())
    config = config.with_overrides(
        jobs=args.jobs, seed=args.seed, methods=args.methods, block_widths=args.block_widths,
        slashburn_k=args.slashburn_k, output=args.output, datasets=args.datasets,
        timings=args.timings)
    result = runner.run_experiment(config)
    if not result.rows:
        log.error("no results: every dataset failed")
        return EXIT_RUNTIME
    try:
        report.emit_csv(result.rows, config.output)
        if args.json:
            report.emit_json(result.rows, args.json)
    except OSError as exc:
        log.error("cannot write results: %s", exc)
        return EXIT_RUNTIME
    return result.exit_code


def cmd_detect(args) -> int:
    graph = _load_graph(args.graph)
    found = detect(args.method, graph, DetectParams(seed=args.seed))
    write_partition(graph, found.partition, args.out, meta={
        "method": args.method, "seed": args.seed, "objective": found.objective,
        "objective_name": found.objective_name, "runtime_s": round(found.seconds, 6),
    })
    print(f"{args.method}: {found.num_communities} communities, "
          f"{found.objective_name}={found.objective:.6g}")
    return EXIT_OK


def cmd_order(args) -> int:
    graph = _load_graph(args.graph)
    meta = {"strategy": args.strategy}
    start = time.perf_counter()
    if args.strategy == "community-naive":
        if not args.partition:
            raise UsageError("--partition is required for community-naive")
        ordering = naive_community_ordering(graph, read_partition(graph, args.partition))
        meta["partition"] = str(args.partition)
    elif args.strategy == "slashburn":
        k = args.k if args.k is not None else SlashBurnParams.from_ratio(graph.num_nodes).k
        if k >= graph.num_nodes:
            raise UsageError(f"--k {k} must be smaller than the node count {graph.num_nodes}")
        ordering, iterations = slashburn_ordering(graph, SlashBurnParams(k))
        meta.update(k=k, iterations=iterations)
    elif args.strategy == "random":
        ordering = random_ordering(graph.num_nodes, args.seed)
        meta["seed"] = args.seed
    else:
        ordering = identity_ordering(graph.num_nodes)
    meta["runtime_s"] = round(time.perf_counter() - start, 6)
    write_ordering(graph, ordering, args.out, meta)
    return EXIT_OK


def cmd_cost(args) -> int:
    graph = _load_graph(args.graph)
    ordering = read_ordering(graph, args.order)
    sidecar = Path(str(args.order) + ".json")
    meta = json.loads(sidecar.read_text()) if sidecar.exists() else {}
    start = time.perf_counter()
    hist = blockcost.block_histogram(graph, ordering, blockcost.CostParams(args.block_width))
    rep = blockcost.report_from_histogram(graph, hist)
    row = report.ReportRow(
        dataset=args.graph.stem, method=meta.get("strategy", "file"), seed=meta.get("seed", 0),
        b=rep.b, n=rep.n, m=rep.m, num_communities=None, objective=None,
        cost1=rep.nonempty_blocks, nonempty_fraction=rep.nonempty_fraction,
        cost2_total_bits=rep.total_bits, bits_per_link=rep.bits_per_link,
        cost_ms=round((time.perf_counter() - start) * 1000.0, 3) if args.timings else None)
    report.write_rows([row], sys.stdout)
    if args.dump_blocks:
        sys.stdout.write("# row_block col_block z\n")
        shown = blockcost.dump_blocks(hist, sys.stdout, args.max_blocks)
        if shown < len(hist):
            sys.stdout.write(f"# ... {len(hist) - shown} more blocks\n")
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.kind == "planted-cliques":
        if args.cliques is None or args.size is None:
            raise UsageError("planted-cliques needs --cliques and --size")
        params = {"cliques": args.cliques, "size": args.size, "epsilon": args.epsilon}
    else:
        if args.n is None:
            raise UsageError("power-law needs --n")
        params = {"n": args.n, "attach": args.attach}
    try:
        graph = synth.write_synthetic(args.kind, params, args.seed, args.out)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"{args.kind}: n={graph.num_nodes} m={graph.num_edges} -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a configured benchmark sweep")
    r.add_argument("--config", required=True, type=Path)
    r.add_argument("--jobs", type=_positive_int)
    r.add_argument("--seed", type=int)
    r.add_argument("--methods", type=_csv_list(str), help="comma-separated subset of: "
                   + ",".join(METHODS))
    r.add_argument("--block-widths", "--block_widths", dest="block_widths", type=_csv_list(int))
    r.add_argument("--slashburn-k", "--slashburn_k", dest="slashburn_k", type=_number,
                   help="hub count (>= 1) or fraction of n (< 1)")
    r.add_argument("--output", type=Path)
    r.add_argument("--datasets", type=_datasets_arg, help="name=path[,name=path...]")
    r.add_argument("--manifest", type=Path, help="JSON file mapping dataset name to edge list")
    r.add_argument("--timings", action=argparse.BooleanOptionalAction, default=None,
                   help="fill the wall-clock columns (off by default)")
    r.add_argument("--json", type=Path, help="also write the rows as JSON")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("detect", help="detect communities and write a partition")
    d.add_argument("--method", required=True, choices=sorted(DETECTORS))
    d.add_argument("--graph", required=True, type=Path)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out", required=True, type=Path)
    d.set_defaults(func=cmd_detect)

    o = sub.add_parser("order", help="compute a node ordering")
    o.add_argument("--strategy", required=True, choices=STRATEGIES)
    o.add_argument("--partition", type=Path)
    o.add_argument("--k", type=_positive_int)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--graph", required=True, type=Path)
    o.add_argument("--out", required=True, type=Path)
    o.set_defaults(func=cmd_order)

    c = sub.add_parser("cost", help="evaluate both block costs of an ordering")
    c.add_argument("--graph", required=True, type=Path)
    c.add_argument("--order", required=True, type=Path)
    c.add_argument("--block-width", required=True, type=_positive_int)
    c.add_argument("--dump-blocks", action="store_true", help="list non-empty blocks")
    c.add_argument("--max-blocks", type=int, default=1000, help="cap for --dump-blocks")
    c.add_argument("--timings", action="store_true", help="fill cost_ms")
    c.set_defaults(func=cmd_cost)

    s = sub.add_parser("synth", help="write a synthetic edge list")
    s.add_argument("--kind", required=True, choices=synth.KINDS)
    s.add_argument("--cliques", type=int)
    s.add_argument("--size", type=int)
    s.add_argument("--epsilon", type=float, default=0.0)
    s.add_argument("--n", type=int)
    s.add_argument("--attach", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    level = os.environ.get("BENCH_LOG", "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        level = "WARNING"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, GraphFormatError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
