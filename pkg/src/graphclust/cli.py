"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error (bad files, bad values).
Relative input paths are also tried under $GRAPHCLUST_DATA when set.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import (
    BenchConfig,
    benchmark_algorithms,
    fit_parallel_fraction,
    load_timings_csv,
    run_benchmark,
    emit_plot_data,
    tables_from_rows,
)
from .bsp import SuperstepRuntime
from .clustering import cut_dendrogram, kmeans, kmeans_search, single_link_dendrogram
from .errors import GraphClustError
from .io import (
    IdMap,
    read_partition,
    read_points,
    read_snap_edge_list,
    write_edge_list,
    write_ordering,
    write_partition,
)
from .labelprop import LlpConfig, LpaConfig, llp, lpa_basic, lpa_scored
from .louvain import LouvainConfig, louvain
from .metrics import modularity

DATA_ENV = "GRAPHCLUST_DATA"

_GRAPH_ALGORITHMS = ("lpa", "lpa-score", "llp", "louvain")
_POINT_ALGORITHMS = ("kmeans", "slink")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _resolve_input(path: str) -> str:
    prefix = os.environ.get(DATA_ENV)
    if prefix and not os.path.isabs(path) and not os.path.exists(path):
        return os.path.join(prefix, path)
    return path


def _parse_workers(text: str) -> tuple[int, ...]:
    """Accept "A..B" ranges or comma-separated lists like "1,2,4,8"."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise _UsageError(f"cannot parse worker list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="graphclust",
        description="Community detection and clustering with a scaling benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cluster", help="run one clustering algorithm on a file")
    p.add_argument("--algorithm", required=True,
                   choices=_GRAPH_ALGORITHMS + _POINT_ALGORITHMS)
    p.add_argument("--input", required=True,
                   help="edge list for graph algorithms, point file for kmeans/slink")
    p.add_argument("--output", required=True,
                   help="partition file (ordering file for llp)")
    p.add_argument("--max-iterations", type=int, default=10,
                   help="superstep cap for label propagation (default 10)")
    p.add_argument("--workers", type=int, default=1,
                   help="worker count for superstep algorithms (default 1)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument("--k", type=int, default=None,
                   help="kmeans cluster count (omitted: doubling search); llp rounds (default 4)")
    p.add_argument("--cut-distance", type=float, default=None,
                   help="dendrogram cut distance, required for slink")
    p.add_argument("--allow-self-loops", action="store_true",
                   help="accept self-loop lines in edge-list input")
    p.set_defaults(handler=cmd_cluster)

    p = sub.add_parser("modularity", help="score a partition file against a graph")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--partition", required=True, help="partition file")
    p.add_argument("--allow-self-loops", action="store_true",
                   help="accept self-loop lines in edge-list input")
    p.set_defaults(handler=cmd_modularity)

    p = sub.add_parser("bench", help="timed worker sweep with speedup fit and figures")
    p.add_argument("--algorithm", required=True, choices=benchmark_algorithms())
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument("--workers", default="1..10",
                   help='sweep, "A..B" or comma list (default 1..10)')
    p.add_argument("--reps", type=int, default=10, help="repetitions per W (default 10)")
    p.add_argument("--max-iterations", type=int, default=10,
                   help="superstep cap per run (default 10)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument("--dataset", default=None,
                   help="dataset label in outputs (default: input file name)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--no-figures", action="store_true",
                   help="write only csv/dat, skip png rendering")
    p.add_argument("--allow-self-loops", action="store_true",
                   help="accept self-loop lines in edge-list input")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("fit-amdahl", help="fit the parallel fraction to a timings CSV")
    p.add_argument("--csv", required=True, help="timings.csv produced by bench")
    p.set_defaults(handler=cmd_fit_amdahl)

    p = sub.add_parser("convert", help="remap an edge list to dense 0-based vertex ids")
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument("--output", required=True, help="remapped edge-list file")
    p.add_argument("--id-map", default=None,
                   help="also write external-to-dense id map as TSV")
    p.add_argument("--allow-self-loops", action="store_true",
                   help="accept self-loop lines in edge-list input")
    p.set_defaults(handler=cmd_convert)
    return parser


def cmd_cluster(args) -> int:
    if args.algorithm in _GRAPH_ALGORITHMS:
        g, idmap = read_snap_edge_list(_resolve_input(args.input), args.allow_self_loops)
        runtime = SuperstepRuntime(workers=args.workers)
        if args.algorithm == "llp":
            cfg = LlpConfig(iterations_K=args.k if args.k else 4,
                            inner_max_iterations=args.max_iterations, seed=args.seed)
            ordering, partitions = llp(g, cfg, runtime)
            write_ordering(ordering, idmap, args.output)
            print(modularity(g, partitions[-1]))
            return 0
        if args.algorithm == "louvain":
            result = louvain(g, LouvainConfig(seed=args.seed))
            write_partition(result.final, idmap, args.output)
            print(result.levels[-1].q)
            return 0
        cfg = LpaConfig(max_iterations=args.max_iterations, seed=args.seed)
        run = lpa_basic if args.algorithm == "lpa" else lpa_scored
        partition = run(g, cfg, runtime).to_partition()
        write_partition(partition, idmap, args.output)
        print(modularity(g, partition))
        return 0

    ps, idmap = read_points(_resolve_input(args.input))
    if args.algorithm == "kmeans":
        if args.k is not None:
            chosen_k, result = args.k, kmeans(ps, args.k, seed=args.seed)
        else:
            chosen_k, result = kmeans_search(ps, seed=args.seed)
        write_partition(result.partition, idmap, args.output)
        print(f"k={chosen_k}", file=sys.stderr)
        print(result.wcss)
        return 0
    if args.cut_distance is None:
        raise _UsageError("slink requires --cut-distance")
    partition = cut_dendrogram(single_link_dendrogram(ps), args.cut_distance)
    write_partition(partition, idmap, args.output)
    print(partition.community_count)
    return 0


def cmd_modularity(args) -> int:
    g, idmap = read_snap_edge_list(_resolve_input(args.graph), args.allow_self_loops)
    p = read_partition(_resolve_input(args.partition), idmap)
    print(modularity(g, p))
    return 0


def cmd_bench(args) -> int:
    g, _ = read_snap_edge_list(_resolve_input(args.input), args.allow_self_loops)
    dataset = args.dataset if args.dataset else os.path.basename(args.input)
    cfg = BenchConfig(
        algorithm=args.algorithm,
        dataset=dataset,
        workers=_parse_workers(args.workers),
        reps=args.reps,
        seed=args.seed,
        max_iterations=args.max_iterations,
    )
    table = run_benchmark(cfg, g)
    fit = None
    if table.speedups and len(table.speedups) >= 2:
        fit = fit_parallel_fraction(table.speedup_points())
    emit_plot_data(table, fit, args.out)
    written = ["timings.csv", "times.dat"] + (["speedup.dat"] if fit else [])
    if not args.no_figures:
        from .plots import render_benchmark_figures

        written += [os.path.basename(f)
                    for f in render_benchmark_figures(table, fit, args.out)]
    print(f"{'W':>3} {'mean_s':>12} {'std_s':>12} {'speedup':>9}")
    for w, (mean, std) in sorted(table.stats.items()):
        phi = table.speedups.get(w)
        phi_text = f"{phi:9.3f}" if phi is not None else f"{'-':>9}"
        print(f"{w:>3} {mean:12.6f} {std:12.6f} {phi_text}")
    if fit is not None:
        print(f"parallel fraction P={fit.P:.5f} (serial fraction {1.0 - fit.P:.5f}),"
              f" residual={fit.residual:.6g}")
    print(f"wrote {', '.join(written)} to {args.out}")
    return 0


def cmd_fit_amdahl(args) -> int:
    rows = load_timings_csv(_resolve_input(args.csv))
    if not rows:
        raise GraphClustError(f"{args.csv}: no timing rows")
    for (algorithm, dataset), table in tables_from_rows(rows).items():
        fit = fit_parallel_fraction(table.speedup_points())
        print(f"{algorithm}\t{dataset}\tP={fit.P:.5f}\tresidual={fit.residual:.6g}")
    return 0


def cmd_convert(args) -> int:
    g, idmap = read_snap_edge_list(_resolve_input(args.input), args.allow_self_loops)
    write_edge_list(g, IdMap.identity(g.vertex_count), args.output)
    if args.id_map:
        with open(args.id_map, "w") as fh:
            for dense in range(len(idmap)):
                fh.write(f"{idmap.to_external(dense)}\t{dense}\n")
    print(f"vertices={g.vertex_count} edges={g.edge_count}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GraphClustError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
