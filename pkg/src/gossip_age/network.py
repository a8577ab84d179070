"""Gossip-network data model: rate matrices, validation, symmetric topology
builders, and the JSON graph-file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "GossipNetwork",
    "GraphFormatError",
    "NodeSet",
    "build_complete",
    "build_ring",
    "parse_graph",
    "serialize_graph",
    "validate",
]


class GraphFormatError(ValueError):
    """A graph document is malformed or describes an invalid network."""


class NodeSet:
    """Immutable subset of the gossip nodes {1..n}, backed by a bitmask.

    Bit k of the mask corresponds to node k+1, so membership, union,
    subset tests and use as a dict key are single integer operations.
    """

    __slots__ = ("_mask",)

    def __init__(self, members: Iterable[int] = ()) -> None:
        mask = 0
        for m in members:
            if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
                raise ValueError(f"node index must be an integer, got {m!r}")
            if m < 1:
                raise ValueError(f"node indices are 1-based, got {m}")
            mask |= 1 << (int(m) - 1)
        self._mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> "NodeSet":
        if mask < 0:
            raise ValueError(f"mask must be nonnegative, got {mask}")
        out = cls.__new__(cls)
        out._mask = mask
        return out

    @property
    def mask(self) -> int:
        return self._mask

    def members(self) -> tuple[int, ...]:
        """Member node indices in ascending order."""
        return tuple(self)

    def with_node(self, i: int) -> "NodeSet":
        if i < 1:
            raise ValueError(f"node indices are 1-based, got {i}")
        return NodeSet.from_mask(self._mask | 1 << (i - 1))

    def issubset(self, other: "NodeSet") -> bool:
        return self._mask & ~other._mask == 0

    def __or__(self, other: "NodeSet") -> "NodeSet":
        return NodeSet.from_mask(self._mask | other._mask)

    def __iter__(self) -> Iterator[int]:
        mask = self._mask
        while mask:
            low = mask & -mask
            yield low.bit_length()  # bit k set -> node k+1
            mask ^= low

    def __contains__(self, i: int) -> bool:
        return i >= 1 and (self._mask >> (i - 1)) & 1 == 1

    def __len__(self) -> int:
        return self._mask.bit_count()

    def __bool__(self) -> bool:
        return self._mask != 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NodeSet) and self._mask == other._mask

    def __hash__(self) -> int:
        return hash(self._mask)

    def __repr__(self) -> str:
        if not self._mask:
            return "NodeSet()"
        return f"NodeSet({{{', '.join(map(str, self))}}})"


@dataclass(eq=False)
class GossipNetwork:
    """Complete rate description of a memoryless gossip network.

    Attributes:
        n: number of gossip nodes; nodes are 1..n, the source is node 0.
        lambda_self: Poisson rate at which the source generates new versions.
        source_rates: length-n vector; source_rates[j-1] is the source-to-j rate.
        peer_rates: n-by-n matrix; peer_rates[i-1][j-1] is the node i-to-j rate.

    Arrays are stored read-only, so a constructed network is immutable and
    safe for concurrent reads. ``in_neighbors[j-1]`` lists the 0-based
    indices of nodes with a positive rate into node j; it is built once so
    that the solver and simulator can traverse sparse graphs cheaply.
    """

    n: int
    lambda_self: float
    source_rates: np.ndarray
    peer_rates: np.ndarray
    in_neighbors: tuple = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ValueError(f"n must be an integer, got {self.n!r}")
        self.n = int(self.n)
        self.lambda_self = float(self.lambda_self)
        sr = np.array(self.source_rates, dtype=float)
        pr = np.array(self.peer_rates, dtype=float)
        if sr.shape != (self.n,):
            raise ValueError(f"source_rates must have shape ({self.n},), got {sr.shape}")
        if pr.shape != (self.n, self.n):
            raise ValueError(f"peer_rates must have shape ({self.n}, {self.n}), got {pr.shape}")
        sr.setflags(write=False)
        pr.setflags(write=False)
        self.source_rates = sr
        self.peer_rates = pr
        self.in_neighbors = tuple(np.flatnonzero(pr[:, j]) for j in range(self.n))

    @property
    def total_rate(self) -> float:
        """Aggregate Poisson rate of every transition, source self-updates included."""
        return float(self.lambda_self + self.source_rates.sum() + self.peer_rates.sum())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GossipNetwork)
            and self.n == other.n
            and self.lambda_self == other.lambda_self
            and np.array_equal(self.source_rates, other.source_rates)
            and np.array_equal(self.peer_rates, other.peer_rates)
        )


def validate(net: GossipNetwork) -> list[str]:
    """Check the network invariants.

    Returns an empty list when the network is well formed, otherwise one
    message per violated invariant with the offending index. Violations are
    data, not exceptions.
    """
    violations = []
    if net.n < 1:
        violations.append(f"n must be >= 1, got {net.n}")
    if not net.lambda_self > 0:
        violations.append(
            f"lambda_self must be > 0 (a zero-rate source is degenerate), got {net.lambda_self}"
        )
    for j in np.flatnonzero(~(net.source_rates >= 0)):
        violations.append(f"negative rate: source_rates[{j + 1}] = {net.source_rates[j]}")
    for i, j in zip(*np.nonzero(~(net.peer_rates >= 0))):
        violations.append(f"negative rate: peer_rates[{i + 1}][{j + 1}] = {net.peer_rates[i, j]}")
    for i in np.flatnonzero(np.diagonal(net.peer_rates) != 0):
        violations.append(f"nonzero diagonal at node {i + 1}")
    return violations


def _check_build_params(n: int, lambda_self: float, lam: float) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ValueError(f"n must be an integer, got {n!r}")
    if not lambda_self > 0:
        raise ValueError(f"lambda_self must be > 0, got {lambda_self}")
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam}")


def build_complete(n: int, lambda_self: float, lam: float) -> GossipNetwork:
    """Symmetric complete-graph network.

    The source sends to each of the n nodes at rate lam/n and every node
    forwards to each of the other n-1 nodes at rate lam/(n-1). For n=1
    there are no peer edges.
    """
    _check_build_params(n, lambda_self, lam)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    source = np.full(n, lam / n)
    peers = np.zeros((n, n))
    if n > 1:
        peers[:] = lam / (n - 1)
        np.fill_diagonal(peers, 0.0)
    return GossipNetwork(n=n, lambda_self=lambda_self, source_rates=source, peer_rates=peers)


def build_ring(n: int, lambda_self: float, lam: float) -> GossipNetwork:
    """Symmetric bidirectional ring.

    The source sends to each node at rate lam/n; every node forwards to its
    two ring neighbors at rate lam/2, with indices wrapping modulo n.
    Rings below n=3 would double an edge and are rejected.
    """
    _check_build_params(n, lambda_self, lam)
    if n < 3:
        raise ValueError(f"ring requires n >= 3, got {n}")
    source = np.full(n, lam / n)
    peers = np.zeros((n, n))
    for i in range(n):
        peers[i, (i + 1) % n] = lam / 2
        peers[i, (i - 1) % n] = lam / 2
    return GossipNetwork(n=n, lambda_self=lambda_self, source_rates=source, peer_rates=peers)


_GRAPH_FIELDS = ("n", "lambda_self", "source_rates", "edges")
_EDGE_FIELDS = ("from", "to", "rate")


def serialize_graph(net: GossipNetwork) -> str:
    """Render a network as a graph-file JSON document.

    Only positive-rate edges are listed (an omitted edge means rate 0),
    sorted by (from, to). Floats keep full round-trip precision and fields
    appear in the fixed order n, lambda_self, source_rates, edges.
    """
    edges = [
        {"from": int(i) + 1, "to": int(j) + 1, "rate": float(net.peer_rates[i, j])}
        for i, j in zip(*np.nonzero(net.peer_rates))
    ]
    doc = {
        "n": net.n,
        "lambda_self": net.lambda_self,
        "source_rates": [float(r) for r in net.source_rates],
        "edges": edges,
    }
    return json.dumps(doc)


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphFormatError(f"{where} must be a number, got {value!r}")
    return float(value)


def _node_index(value, n: int, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphFormatError(f"{where} must be an integer node index, got {value!r}")
    if not 1 <= value <= n:
        raise GraphFormatError(f"{where} must be in 1..{n}, got {value}")
    return value


def parse_graph(text: str) -> GossipNetwork:
    """Parse a graph-file JSON document into a validated network.

    Raises GraphFormatError for JSON syntax errors (reported with line and
    column), schema violations (missing, unknown or mistyped fields, wrong
    arity, duplicate edges, self-loops), and network invariant violations.
    Duplicate edges are an error rather than summed: summing masks typos.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise GraphFormatError(
            f"syntax error at line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    if not isinstance(doc, dict):
        raise GraphFormatError("graph document must be a JSON object")
    missing = [k for k in _GRAPH_FIELDS if k not in doc]
    if missing:
        raise GraphFormatError(f"missing field(s): {', '.join(missing)}")
    unknown = [k for k in doc if k not in _GRAPH_FIELDS]
    if unknown:
        raise GraphFormatError(f"unknown field(s): {', '.join(unknown)}")

    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise GraphFormatError(f"n must be an integer, got {n!r}")
    if n < 0:
        raise GraphFormatError(f"n must be nonnegative, got {n}")
    lambda_self = _number(doc["lambda_self"], "lambda_self")

    raw_rates = doc["source_rates"]
    if not isinstance(raw_rates, list):
        raise GraphFormatError("source_rates must be an array")
    if len(raw_rates) != n:
        raise GraphFormatError(f"source_rates must have length n={n}, got {len(raw_rates)}")
    source = np.array(
        [_number(r, f"source_rates[{j + 1}]") for j, r in enumerate(raw_rates)], dtype=float
    )

    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise GraphFormatError("edges must be an array")
    peers = np.zeros((n, n))
    seen: set[tuple[int, int]] = set()
    for k, edge in enumerate(raw_edges):
        where = f"edges[{k}]"
        if not isinstance(edge, dict):
            raise GraphFormatError(f"{where} must be an object")
        missing = [f for f in _EDGE_FIELDS if f not in edge]
        if missing:
            raise GraphFormatError(f"{where} missing field(s): {', '.join(missing)}")
        unknown = [f for f in edge if f not in _EDGE_FIELDS]
        if unknown:
            raise GraphFormatError(f"{where} unknown field(s): {', '.join(unknown)}")
        i = _node_index(edge["from"], n, f"{where}.from")
        j = _node_index(edge["to"], n, f"{where}.to")
        if i == j:
            raise GraphFormatError(f"{where}: self-loop at node {i} is forbidden")
        if (i, j) in seen:
            raise GraphFormatError(f"{where}: duplicate edge {i}->{j}")
        seen.add((i, j))
        peers[i - 1, j - 1] = _number(edge["rate"], f"{where}.rate")

    net = GossipNetwork(n=n, lambda_self=lambda_self, source_rates=source, peer_rates=peers)
    violations = validate(net)
    if violations:
        raise GraphFormatError("invalid network: " + "; ".join(violations))
    return net
