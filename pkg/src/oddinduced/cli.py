"""Command line interface: ``oddinduced {solve,construct,gallai,gen,verify,enum}``.

Exit status: 0 success, 1 check failure (violations, budget, bad trace),
2 bad input or unmet precondition, 3 construction gap.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .campaign import CampaignConfig, ConfigError, exhaustive_graphs, run_campaign
from .errors import BudgetExceeded, Infeasible, OddInducedError, PreconditionViolated, ProofGapReport
from .gallai import even_even_partition
from .generators import GenSpec, instance_stream
from .graph import Graph, read_graph, to_graph6
from .parity import DEFAULT_BUDGET, max_odd_induced_exact
from .reduction import construct_odd_subgraph, replay_trace

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GAP = 0, 1, 2, 3


def _emit(obj, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _load_graph(args) -> Graph:
    src = args.input_pos or args.input
    text = sys.stdin.read() if src in (None, "-") else Path(src).read_text()
    return read_graph(text, args.format)


def _error(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def cmd_solve(args) -> int:
    g = _load_graph(args)
    try:
        res = max_odd_induced_exact(g, args.budget)
    except BudgetExceeded as exc:
        _emit({"n": g.n, "optimum_lower_bound": exc.best_size,
               "witness": exc.best_witness.to_list(), "optimal": False,
               "nodes_explored": exc.nodes})
        return EXIT_FAIL
    out = res.to_json()
    out["n"] = g.n
    if args.no_timing:
        out.pop("wall_time")
    _emit(out)
    return EXIT_OK


def cmd_construct(args) -> int:
    g = _load_graph(args)
    try:
        trace = construct_odd_subgraph(g)
    except PreconditionViolated as exc:
        return _error(str(exc), EXIT_USAGE)
    except ProofGapReport as gap:
        _emit({"error": "proof_gap", "graph6": gap.graph6, "vertices": gap.vertices, "reason": gap.reason})
        return EXIT_GAP
    _emit(trace.to_json())
    return EXIT_OK if replay_trace(g, trace) else EXIT_FAIL


def cmd_gallai(args) -> int:
    g = _load_graph(args)
    part = even_even_partition(g)
    out = part.to_json()
    out["valid"] = part.is_valid(g)
    _emit(out)
    return EXIT_OK if out["valid"] else EXIT_FAIL


def cmd_gen(args) -> int:
    raw = args.spec
    if Path(raw).is_file():
        raw = Path(raw).read_text()
    try:
        spec = GenSpec.from_json(json.loads(raw))
    except (ValueError, KeyError, TypeError) as exc:
        return _error(f"bad generator spec: {exc}", EXIT_USAGE)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        for _, g in instance_stream(spec, args.count, args.seed):
            out.write(to_graph6(g) + "\n")
    except (Infeasible, OddInducedError) as exc:
        return _error(str(exc), EXIT_USAGE)
    finally:
        if args.output:
            out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    path = Path(args.config)
    try:
        obj = json.loads(path.read_text())
        if args.seed is not None:
            obj["seed"] = args.seed
        if args.bound is not None:
            obj["bound"] = args.bound
        cfg = CampaignConfig.from_json(obj, base_dir=path.parent)
    except (OSError, ValueError, KeyError) as exc:
        return _error(f"bad config: {exc}", EXIT_USAGE)
    output = Path(args.output) if args.output else path.with_suffix(".report.json")
    ledger = Path(args.ledger) if args.ledger else output.with_suffix(".ledger.jsonl")
    report = run_campaign(cfg, ledger, args.jobs)
    output.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    summary = {k: report[k] for k in ("status", "instances_tested", "violation_count", "min_ratio_seen")}
    summary["proof_gap_reports"] = len(report["proof_gap_reports"])
    summary["report"] = str(output)
    _emit(summary)
    return EXIT_OK if report["status"] == "ok" else EXIT_FAIL


def cmd_enum(args) -> int:
    if args.n > 8:
        return _error("exhaustive enumeration is limited to n <= 8", EXIT_USAGE)
    count = 0
    for g in exhaustive_graphs(args.n, args.max_degree):
        sys.stdout.write(to_graph6(g) + "\n")
        count += 1
    print(f"# {count} graphs", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oddinduced", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_input(sp):
        sp.add_argument("input_pos", nargs="?", metavar="INPUT")
        sp.add_argument("--input", "-i", help="graph file, '-' for stdin")
        sp.add_argument("--format", choices=("auto", "graph6", "edgelist"), default="auto")

    sp = sub.add_parser("solve", help="exact maximum odd induced subgraph")
    graph_input(sp)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--no-timing", action="store_true", help="omit wall_time from the output")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("construct", help="odd induced subgraph of order >= 2n/7 with its trace")
    graph_input(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("gallai", help="partition into two even induced subgraphs")
    graph_input(sp)
    sp.set_defaults(func=cmd_gallai)

    sp = sub.add_parser("gen", help="write generated graphs as graph6 lines")
    sp.add_argument("spec", help="GenSpec JSON text or a file holding it")
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("verify", help="run a verification campaign")
    sp.add_argument("--config", "-c", required=True)
    sp.add_argument("--output", "-o")
    sp.add_argument("--ledger")
    sp.add_argument("--jobs", "-j", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--bound", default=None, help="N/D or 'tree'")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("enum", help="all labelled graphs with bounded degree and no isolated vertices")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-degree", type=int, default=4)
    sp.set_defaults(func=cmd_enum)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OddInducedError, ConfigError, OSError, ValueError) as exc:
        return _error(str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
