"""Command-line surface: graph generation, exact solving, simulation,
parameter sweeps, and bound tables with CSV emission.

Exit codes: 0 success (an infinite age is an answer, not an error),
1 usage or parameter error, 2 invalid graph file, 3 solver subset cap.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .network import (
    GossipNetwork,
    GraphFormatError,
    NodeSet,
    build_complete,
    build_ring,
    parse_graph,
    serialize_graph,
)
from .simulator import SimConfig, replicate
from .solver import DEFAULT_SUBSET_CAP, SubsetCapError, solve_age
from .symmetric import complete_age_profile, complete_bounds, ring_age_profile

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse usage errors to exit code 1 instead of its default 2
    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float):
    """JSON-ready number: 12 significant digits, infinity as the string "inf"."""
    if math.isinf(x):
        return "inf"
    return float(f"{x:.12g}")


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "inf" if math.isinf(x) else f"{x:.12g}"
    return str(x)


def _parse_set(text: str) -> list[int]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise _UsageError(f"invalid node set {text!r}")
    try:
        nodes = [int(p) for p in parts]
    except ValueError:
        raise _UsageError(f"invalid node set {text!r}: entries must be integers") from None
    if any(v < 1 for v in nodes):
        raise _UsageError(f"invalid node set {text!r}: node indices are 1-based")
    if len(set(nodes)) != len(nodes):
        raise _UsageError(f"invalid node set {text!r}: duplicate nodes")
    return sorted(nodes)


def _parse_n_values(text: str) -> list[int]:
    """Parse "start:stop:step" (stop inclusive) or an explicit comma list."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, step = (int(p) for p in parts)
            if step < 1:
                raise ValueError
            values = list(range(start, stop + 1, step))
        else:
            values = [int(p) for p in text.split(",")]
    except ValueError:
        raise _UsageError(
            f"invalid n range {text!r}: use start:stop:step or a comma list"
        ) from None
    if not values:
        raise _UsageError(f"invalid n range {text!r}: no values")
    if any(v < 1 for v in values):
        raise _UsageError(f"invalid n range {text!r}: n must be >= 1")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise _UsageError(f"invalid n range {text!r}: values must be strictly increasing")
    return values


def _load_network(path: str) -> GossipNetwork:
    # any failure to produce a valid network from the file maps to exit 2
    text = Path(path).read_text(encoding="utf-8")
    return parse_graph(text)


def _cmd_generate(args) -> int:
    try:
        if args.topology == "complete":
            net = build_complete(args.n, args.lambda_self, args.lam)
        else:
            net = build_ring(args.n, args.lambda_self, args.lam)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    try:
        Path(args.output).write_text(serialize_graph(net) + "\n", encoding="utf-8")
    except OSError as err:
        print(f"error: cannot write {args.output}: {err}", file=sys.stderr)
        return 1
    edge_count = int(np.count_nonzero(net.peer_rates))
    print(f"wrote {args.output} ({edge_count} edges)")
    return 0


def _cmd_solve(args) -> int:
    try:
        net = _load_network(args.graph)
    except (OSError, GraphFormatError) as err:
        print(f"error: invalid graph file: {err}", file=sys.stderr)
        return 2
    nodes = _parse_set(args.set)
    if nodes[-1] > net.n:
        raise _UsageError(f"node {nodes[-1]} out of range 1..{net.n}")
    try:
        solution = solve_age(net, NodeSet(nodes), subset_cap=args.subset_cap)
    except SubsetCapError as err:
        print(
            f"error: {err}; for symmetric topologies use 'sweep' instead of exact solving",
            file=sys.stderr,
        )
        return 3
    report = {
        "set": nodes,
        "age": _fmt(solution.age()),
        "subsets_visited": solution.visited_count,
    }
    print(json.dumps(report))
    return 0


def _cmd_simulate(args) -> int:
    try:
        net = _load_network(args.graph)
    except (OSError, GraphFormatError) as err:
        print(f"error: invalid graph file: {err}", file=sys.stderr)
        return 2
    targets = None
    if args.set is not None:
        nodes = _parse_set(args.set)
        if nodes[-1] > net.n:
            raise _UsageError(f"node {nodes[-1]} out of range 1..{net.n}")
        targets = (NodeSet(nodes),)
    try:
        cfg = SimConfig(horizon=args.horizon, warmup=args.warmup, seed=args.seed, targets=targets)
        result = replicate(net, cfg, args.reps)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    report = {
        "horizon": _fmt(args.horizon),
        "warmup": _fmt(args.warmup),
        "seed": args.seed,
        "reps": args.reps,
        "event_counts": [est.event_count for est in result.estimates],
        "targets": [
            {
                "set": list(t.members()),
                "mean": _fmt(result.pooled_means[k]),
                "stderr": _fmt(result.pooled_stderrs[k]),
                "rep_means": [_fmt(est.means[k]) for est in result.estimates],
            }
            for k, t in enumerate(result.targets)
        ],
    }
    print(json.dumps(report))
    return 0


def _cmd_sweep(args) -> int:
    n_values = _parse_n_values(args.n)
    if args.topology == "ring" and n_values[0] < 3:
        raise _UsageError(f"ring requires n >= 3, got {n_values[0]}")
    lines = ["topology,n,lambda_self,lambda,age,lower_bound,upper_bound,sqrt_ratio"]
    try:
        for n in n_values:
            if args.topology == "complete":
                age = complete_age_profile(n, args.lambda_self, args.lam).per_node_age
                bounds = complete_bounds(n, args.lambda_self, args.lam)
                cells = (age, bounds.lower, bounds.upper, None)
            else:
                age = ring_age_profile(n, args.lambda_self, args.lam).per_node_age
                cells = (age, None, None, age / math.sqrt(n))
            lines.append(
                ",".join(
                    _csv_cell(c)
                    for c in (args.topology, n, args.lambda_self, args.lam, *cells)
                )
            )
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    try:
        Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as err:
        print(f"error: cannot write {args.output}: {err}", file=sys.stderr)
        return 1
    print(f"wrote {args.output} ({len(n_values)} rows)")
    return 0


def _cmd_bounds(args) -> int:
    try:
        profile = complete_age_profile(args.n, args.lambda_self, args.lam)
        bounds = complete_bounds(args.n, args.lambda_self, args.lam)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    age = profile.per_node_age
    report = {
        "n": args.n,
        "age": _fmt(age),
        "lower": _fmt(bounds.lower),
        "upper": _fmt(bounds.upper),
        "sandwich_ok": bool(bounds.lower <= age <= bounds.upper),
    }
    print(json.dumps(report))
    return 0


def _add_rate_flags(parser) -> None:
    parser.add_argument(
        "--lambda", dest="lam", type=float, required=True,
        help="total gossip rate budget (split lambda/n to each node from the source)",
    )
    parser.add_argument(
        "--lambda-self", dest="lambda_self", type=float, required=True,
        help="source version-generation rate",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gossip-age",
        description=(
            "Limiting average version age of gossip networks: exact subset solver, "
            "symmetric closed forms, Monte Carlo simulation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    gen = sub.add_parser("generate", help="write a symmetric topology to a graph file")
    gen.add_argument("--topology", choices=("complete", "ring"), required=True)
    gen.add_argument("--n", type=int, required=True, help="number of gossip nodes")
    _add_rate_flags(gen)
    gen.add_argument("-o", "--output", required=True, help="graph file to write")
    gen.set_defaults(handler=_cmd_generate)

    solve = sub.add_parser("solve", help="exact age of a node set from a graph file")
    solve.add_argument("--graph", required=True, help="graph file to read")
    solve.add_argument("--set", required=True, help="comma-separated node list, e.g. 1,2,3")
    solve.add_argument(
        "--subset-cap", type=int, default=DEFAULT_SUBSET_CAP,
        help="refuse to expand more than this many subsets (default %(default)s)",
    )
    solve.set_defaults(handler=_cmd_solve)

    sim = sub.add_parser("simulate", help="Monte Carlo estimate of subset ages")
    sim.add_argument("--graph", required=True, help="graph file to read")
    sim.add_argument("--set", default=None, help="node set to track (default: every singleton)")
    sim.add_argument("--horizon", type=float, required=True, help="simulated time span")
    sim.add_argument("--warmup", type=float, default=0.0, help="time excluded from averages")
    sim.add_argument("--seed", type=int, default=0, help="base RNG seed")
    sim.add_argument("--reps", type=int, default=1, help="independent replications to pool")
    sim.set_defaults(handler=_cmd_simulate)

    sweep = sub.add_parser("sweep", help="CSV of symmetric ages over a range of sizes")
    sweep.add_argument("--topology", choices=("complete", "ring"), required=True)
    sweep.add_argument("--n", required=True, help='sizes: "start:stop:step" or "2,3,5"')
    _add_rate_flags(sweep)
    sweep.add_argument("-o", "--output", required=True, help="CSV file to write")
    sweep.set_defaults(handler=_cmd_sweep)

    bounds = sub.add_parser("bounds", help="per-node age and harmonic bounds, complete graph")
    bounds.add_argument("--n", type=int, required=True)
    _add_rate_flags(bounds)
    bounds.set_defaults(handler=_cmd_bounds)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.handler(args)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
