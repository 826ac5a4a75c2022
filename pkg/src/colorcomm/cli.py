"""Command line interface.

    colorcomm gen    --n 64 --delta 8 --model near-regular --partition random --seed 1 --out g.txt
    colorcomm run    --problem vertex --n 256 --delta 8 --seeds 10
    colorcomm bench  --problem edge --n 256 512 1024 --delta 8 --seeds 50 --out sweep.csv
    colorcomm verify graph.txt coloring.txt
    colorcomm zec    strategies.json

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .graphs import (
    EdgeColoring,
    VertexColoring,
    gen_random_instance,
    read_graph_file,
    verify_edge_coloring,
    verify_vertex_coloring,
    write_graph_file,
)
from .harness import ExperimentConfig, aggregate, reports_to_jsonl, rows_to_csv, sweep
from .runtime import InvariantError

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3


def _add_common_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=("vertex", "edge"), required=True)
    p.add_argument("--n", type=int, nargs="+", default=[256])
    p.add_argument("--delta", type=int, nargs="+", default=[8])
    p.add_argument("--model", default="near-regular",
                   choices=("bounded-uniform", "near-regular", "gadget-union"))
    p.add_argument("--partition", default="random",
                   choices=("random", "interleaved", "all-alice", "degree-split"))
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--config", help="JSON config file; flags override nothing once set")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="output path (defaults to stdout)")


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            return ExperimentConfig.from_json_dict(json.load(fh))
    return ExperimentConfig(problem=args.problem, n_values=args.n,
                            delta_values=args.delta, model=args.model,
                            partition=args.partition, seeds=args.seeds)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    part = gen_random_instance(args.n, args.delta, args.model, args.partition, args.seed)
    if args.out:
        write_graph_file(part, args.out)
    else:
        g = part.graph
        lines = [f"{g.n} {len(g.edges)}"]
        lines += [f"{u} {v} {o}" for (u, v), o in zip(g.edges, part.owner)]
        print("\n".join(lines))
    return EXIT_OK


def cmd_run(args) -> int:
    config = _config_from_args(args)
    reports = sweep(config, jobs=args.jobs)
    _emit(reports_to_jsonl(reports), args.out)
    return EXIT_OK if all(r.verified for r in reports) else EXIT_VERIFY


def cmd_bench(args) -> int:
    config = _config_from_args(args)
    reports = sweep(config, jobs=args.jobs)
    rows = aggregate(reports)
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK if not any(r.failures for r in rows) else EXIT_VERIFY


def read_coloring_file(path: str):
    """First token names the kind: ``vertex`` (lines ``v c``) or ``edge``
    (lines ``u v c reporter``)."""
    with open(path, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise ValueError("empty coloring file")
    kind = tokens[0]
    if kind == "vertex":
        pairs = tokens[1:]
        if len(pairs) % 2:
            raise ValueError("vertex coloring file must hold (vertex, color) pairs")
        assignment = {int(pairs[i]): int(pairs[i + 1]) for i in range(0, len(pairs), 2)}
        return kind, assignment
    if kind == "edge":
        quads = tokens[1:]
        if len(quads) % 4:
            raise ValueError("edge coloring file must hold (u, v, color, reporter) rows")
        coloring = EdgeColoring()
        for i in range(0, len(quads), 4):
            u, v, c, rep = quads[i: i + 4]
            e = (min(int(u), int(v)), max(int(u), int(v)))
            coloring.colors[e] = int(c)
            coloring.reporter[e] = rep
        return kind, coloring
    raise ValueError(f"unknown coloring kind {kind!r}")


def cmd_verify(args) -> int:
    part = read_graph_file(args.graph)
    kind, payload = read_coloring_file(args.coloring)
    delta = part.graph.max_degree
    if kind == "vertex":
        colors = [-1] * part.graph.n
        for v, c in payload.items():
            colors[v] = c
        violations = verify_vertex_coloring(part.graph, VertexColoring(colors), delta + 1)
    else:
        violations = verify_edge_coloring(part, payload, max(1, 2 * delta - 1))
    for v in violations:
        print(v)
    return EXIT_OK if not violations else EXIT_VERIFY


def cmd_zec(args) -> int:
    from .zecgame import (
        ZecStrategy,
        build_label_table,
        find_failure_witness,
        zec_win_probability,
    )

    with open(args.strategies, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    alice = ZecStrategy.from_rows(data["alice"])
    bob = ZecStrategy.from_rows(data["bob"])
    win = zec_win_probability(alice, bob)
    table = build_label_table(alice, bob)
    witness = find_failure_witness(alice, bob)
    out = {
        "winProbability": win,
        "labelsAlice": [sorted(lab) for lab in table.alice],
        "labelsBob": [sorted(lab) for lab in table.bob],
        "witness": {
            "case": witness.case,
            "side": witness.side,
            "aliceInput": witness.alice_input,
            "bobInput": witness.bob_input,
            "color": witness.color,
            "failureBound": str(witness.bound),
            "eventProbability": str(witness.event_probability),
        },
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colorcomm",
                                     description="two-party graph coloring protocols")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance and write the graph file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--model", default="near-regular",
                   choices=("bounded-uniform", "near-regular", "gadget-union"))
    p.add_argument("--partition", default="random",
                   choices=("random", "interleaved", "all-alice", "degree-split"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run protocols, emit JSON-lines reports")
    _add_common_run_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="sweep and aggregate to CSV")
    _add_common_run_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check a coloring file against a graph file")
    p.add_argument("graph")
    p.add_argument("coloring")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zec", help="evaluate a ZEC strategy file")
    p.add_argument("strategies")
    p.set_defaults(func=cmd_zec)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
