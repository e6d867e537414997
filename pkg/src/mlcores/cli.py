"""Command-line front end.

Exit status: 0 on success, 1 for bad arguments, 2 for unreadable or malformed
input and output failures, 3 when an exhaustive routine refuses an input
above its size cap.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass
from typing import IO, Sequence

from .community import STRATEGIES, CommunityQuery, community_bruteforce, community_search
from .decomposition import ENGINES, CoreDecomposition, decompose, lookup
from .densest import DEFAULT_CAP, densest_bruteforce, densest_subgraph, layer_densities
from .errors import CapExceededError, EdgeListError, EmptyGraphError
from .graph import MultilayerGraph, induced_edge_count, read_edge_list
from .innermost import innermost_cores
from .quasiclique import DEFAULT_ENUM_CAP, MiningParams, mine_fcgqc, mine_fcgqc_pruned

DEFAULT_SEED = 0
COMMANDS = ("decompose", "innermost", "densest", "quasicliques", "csearch", "stats")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class LevelStats:
    level: int
    cores: int
    mean_size: float
    mean_density: float  # edges summed over layers / |C|


def level_stats(g: MultilayerGraph, d: CoreDecomposition) -> list[LevelStats]:
    """Per-level aggregates over every non-empty lattice vector, duplicates included.

    Vectors are walked inside the ``K_l`` box and resolved with :func:`lookup`.
    """
    acc: dict[int, list] = {}
    density: dict[tuple, float] = {}
    for k in itertools.product(*(range(b + 1) for b in d.bounds)):
        core = lookup(d, k)
        if core is None:
            continue
        if core.vector not in density:
            edges = sum(induced_edge_count(g, core.vertices, layer) for layer in g.layers())
            density[core.vector] = edges / len(core)
        row = acc.setdefault(sum(k), [0, 0, 0.0])
        row[0] += 1
        row[1] += len(core)
        row[2] += density[core.vector]
    return [
        LevelStats(level, n, size / n, dens / n)
        for level, (n, size, dens) in sorted(acc.items())
    ]


def _labels(g: MultilayerGraph, vertices) -> list[str]:
    return sorted(g.label(u) for u in vertices)


def _core_record(g, core, with_vertices: bool, **extra) -> dict:
    rec = {"vector": list(core.vector), "size": len(core)}
    if with_vertices:
        rec["vertices"] = _labels(g, core.vertices)
    rec.update(extra)
    return rec


def _gamma(text: str):
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--gamma: expected a number or comma-separated numbers, got {text!r}") from None
    return values[0] if len(values) == 1 else tuple(values)


def _query(g: MultilayerGraph, text: str) -> list[int]:
    labels = [x for x in text.split(",") if x]
    if not labels:
        raise UsageError("--query: no vertex labels given")
    try:
        return [g.index_of(x) for x in labels]
    except KeyError as e:
        raise UsageError(f"--query: {e.args[0]}") from None


# --- commands ---------------------------------------------------------------

def _cmd_decompose(g, args, out) -> None:
    d = decompose(g, args.engine, args.seed)
    for core in d:
        out.write(json.dumps(_core_record(g, core, not args.no_vertices)) + "\n")
    s = d.stats
    stats = {"cores_computed": s.cores_computed, "cores_visited": s.cores_visited, "output_cores": s.output_cores}
    out.write(json.dumps({"stats": stats}) + "\n")


def _cmd_innermost(g, args, out) -> None:
    for core in innermost_cores(g):
        out.write(json.dumps(_core_record(g, core, not args.no_vertices, innermost=True)) + "\n")


def _cmd_densest(g, args, out) -> None:
    if args.bruteforce:
        r = densest_bruteforce(g, args.beta, args.cap)
    else:
        r = densest_subgraph(g, args.beta, args.mode, args.engine, args.seed)
    rec = {
        "vertices": _labels(g, r.vertices),
        "size": len(r.vertices),
        "delta": r.delta_value,
        "beta": r.beta,
        "layers": list(r.best_layers),
        "densities": layer_densities(g, r.vertices),
        "vector": list(r.vector) if r.vector is not None else None,
    }
    out.write(json.dumps(rec) + "\n")


def _qc_records(g, result) -> list:
    return [{"vertices": _labels(g, s), "layers": list(layers)} for s, layers in result]


def _cmd_quasicliques(g, args, out) -> None:
    try:
        p = MiningParams(_gamma(args.gamma), args.min_sup, args.min_size)
        p.gammas(g.layer_count)
    except ValueError as e:
        raise UsageError(str(e)) from None
    bound = not args.no_bound
    rec: dict = {"vertex_count": g.vertex_count}
    if args.no_prune:
        r = mine_fcgqc(g, None, p, bound, args.enum_cap)
    else:
        t = time.perf_counter()
        r = mine_fcgqc_pruned(g, p, args.engine, bound, args.enum_cap)
        elapsed = time.perf_counter() - t
        rec["pruned_size"] = len(r.search_space)
        # timings only when both runs happen, so plain runs stay byte-reproducible
        if args.compare:
            t = time.perf_counter()
            base = mine_fcgqc(g, None, p, bound, args.enum_cap)
            rec["pruned_seconds"] = elapsed
            rec["unpruned_seconds"] = time.perf_counter() - t
            rec["same_result"] = base.sets() == r.sets()
    rec["quasi_cliques"] = _qc_records(g, r)
    out.write(json.dumps(rec) + "\n")


def _cmd_csearch(g, args, out) -> None:
    try:
        q = CommunityQuery(_query(g, args.query), args.beta, args.strategy)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.bruteforce:
        r = community_bruteforce(g, q, args.cap)
    else:
        r = community_search(g, q, args.seed)
    rec = {
        "query": _labels(g, q.query_vertices),
        "vertices": _labels(g, r.vertices),
        "size": len(r.vertices),
        "score": r.score,
        "beta": q.beta,
        "layers": list(r.best_layers),
        "vector": list(r.vector),
    }
    out.write(json.dumps(rec) + "\n")


def _cmd_stats(g, args, out, report) -> None:
    d = decompose(g, args.engine, args.seed)
    levels = level_stats(g, d)
    rec = {
        "vertex_count": g.vertex_count,
        "layer_count": g.layer_count,
        "edges": [g.edge_count(layer) for layer in g.layers()],
        "ingest": {
            "lines_read": report.lines_read,
            "edges_loaded": report.edges_loaded,
            "duplicates_ignored": report.duplicates_ignored,
            "self_loops_ignored": report.self_loops_ignored,
            "layers_seen": report.layers_seen,
        },
        "distinct_cores": len(d),
        "lattice_nodes": sum(x.cores for x in levels),
        "levels": [
            {"level": x.level, "cores": x.cores, "mean_size": x.mean_size, "mean_density": x.mean_density}
            for x in levels
        ],
    }
    out.write(json.dumps(rec) + "\n")


_HANDLERS = {
    "decompose": _cmd_decompose,
    "innermost": _cmd_innermost,
    "densest": _cmd_densest,
    "quasicliques": _cmd_quasicliques,
    "csearch": _cmd_csearch,
}


# --- wiring -------------------------------------------------------------------

def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="edge list: '<source> <target> <layer>' per line")
    common.add_argument("--output", help="write here instead of standard output")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for every random choice")
    common.add_argument("--engine", choices=ENGINES, default="hybrid", help="decomposition engine")
    common.add_argument("--no-vertices", action="store_true", help="omit vertex lists from core records")

    parser = _Parser(prog="mlcores", description="Core decomposition of multilayer networks and its applications.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("decompose", parents=[common], help="all distinct cores, one JSON line each")
    sub.add_parser("innermost", parents=[common], help="inner-most cores only")

    p = sub.add_parser("densest", parents=[common], help="densest core under the multilayer density")
    p.add_argument("--beta", type=_positive, default=1.0)
    p.add_argument("--mode", choices=("full", "innermost"), default="full")
    p.add_argument("--bruteforce", action="store_true", help="exact search over all vertex subsets")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="vertex cap for --bruteforce")

    p = sub.add_parser("quasicliques", parents=[common], help="frequent cross-graph quasi-cliques")
    p.add_argument("--gamma", default="1.0", help="one value, or one per layer separated by commas")
    p.add_argument("--min-sup", type=float, default=1.0)
    p.add_argument("--min-size", type=int, default=3)
    p.add_argument("--no-prune", action="store_true", help="mine the whole graph (baseline)")
    p.add_argument("--compare", action="store_true", help="also run the baseline and report both timings")
    p.add_argument("--no-bound", action="store_true", help="visit every subset instead of bounding")
    p.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP, help="vertex cap for --no-bound")

    p = sub.add_parser("csearch", parents=[common], help="community search around query vertices")
    p.add_argument("--query", required=True, help="comma-separated vertex labels")
    p.add_argument("--beta", type=_positive, default=1.0)
    p.add_argument("--strategy", choices=STRATEGIES, default="hybrid")
    p.add_argument("--bruteforce", action="store_true", help="exact search over all vertex subsets")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="vertex cap for --bruteforce")

    sub.add_parser("stats", parents=[common], help="per-level lattice statistics")
    return parser


def run(args: argparse.Namespace, stdout: IO[str] | None = None) -> int:
    try:
        g, report = read_edge_list(args.input)
    except OSError as e:
        print(f"mlcores: cannot read {args.input}: {e.strerror or e}", file=sys.stderr)
        return 2
    except (EdgeListError, UnicodeDecodeError) as e:
        print(f"mlcores: {args.input}: {e}", file=sys.stderr)
        return 2

    try:
        out = open(args.output, "w", encoding="utf-8", newline="\n") if args.output else (stdout or sys.stdout)
    except OSError as e:
        print(f"mlcores: cannot write {args.output}: {e.strerror or e}", file=sys.stderr)
        return 2
    try:
        if args.command == "stats":
            _cmd_stats(g, args, out, report)
        else:
            _HANDLERS[args.command](g, args, out)
    except UsageError as e:
        print(f"mlcores {args.command}: error: {e}", file=sys.stderr)
        return 1
    except CapExceededError as e:
        print(f"mlcores: {e}", file=sys.stderr)
        return 3
    except EmptyGraphError as e:
        print(f"mlcores: {args.input}: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"mlcores: write failed: {e.strerror or e}", file=sys.stderr)
        return 2
    finally:
        if args.output:
            out.close()
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
