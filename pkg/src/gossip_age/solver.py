"""Exact limiting version-age computation by subset expansion.

The long-run average version age of an observer of a node set S satisfies a
linear fixed point: the age of S is a rate-weighted combination of the ages
of its one-node-larger supersets plus the source refresh rate. The system is
evaluated by walking from the query set upward through its updating
neighbors, supersets first, visiting only subsets the query actually
depends on (far fewer than 2^n on sparse graphs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .network import GossipNetwork, NodeSet

__all__ = [
    "DEFAULT_SUBSET_CAP",
    "AgeSolution",
    "SubsetCapError",
    "neighbor_rate",
    "neighbor_set",
    "ode_residual",
    "solve_age",
    "source_rate_into",
]

DEFAULT_SUBSET_CAP = 1 << 24


class SubsetCapError(RuntimeError):
    """Subset expansion exceeded the configured cap.

    One equation is generated per reachable superset of the query, which is
    exponential in n on dense graphs, so the solver fails loudly instead of
    thrashing once ``cap`` subsets have been expanded.
    """

    def __init__(self, cap: int, expanded: int) -> None:
        super().__init__(f"subset cap of {cap} exceeded after expanding {expanded} subsets")
        self.cap = cap
        self.expanded = expanded


@dataclass
class AgeSolution:
    """Ages of every subset visited while solving a query.

    ``ages`` maps each visited NodeSet to its limiting average version age,
    with math.inf for observers that are never updated. The map always
    contains the query and is closed under the expansion (if S is present,
    so is S plus any of its updating neighbors), so stationarity residuals
    can be evaluated for any entry. ``visited_count`` is the number of
    subsets expanded.
    """

    query: NodeSet
    ages: dict[NodeSet, float]
    visited_count: int

    def age(self, nodes=None) -> float:
        """Age of ``nodes`` (default: the original query set)."""
        key = self.query if nodes is None else _as_nodeset(nodes)
        return self.ages[key]


def _as_nodeset(nodes) -> NodeSet:
    return nodes if isinstance(nodes, NodeSet) else NodeSet(nodes)


def _require_in_range(net: GossipNetwork, s: NodeSet) -> None:
    if not s:
        raise ValueError("node set must be nonempty")
    if s.mask >> net.n:
        raise ValueError(f"node set {s!r} not within 1..{net.n}")


def _bits0(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _neighbors0(net: GossipNetwork, mask: int) -> list[int]:
    """0-based updating neighbors of the mask, ascending."""
    cand: set[int] = set()
    for j0 in _bits0(mask):
        cand.update(net.in_neighbors[j0].tolist())
    return sorted(i0 for i0 in cand if not (mask >> i0) & 1)


def source_rate_into(net: GossipNetwork, nodes) -> float:
    """Total rate at which the source delivers updates into the set."""
    s = _as_nodeset(nodes)
    _require_in_range(net, s)
    return float(net.source_rates[[m - 1 for m in s]].sum())


def neighbor_rate(net: GossipNetwork, i: int, nodes) -> float:
    """Total rate at which node i delivers updates into the set.

    Zero when i is a member: an update sent from inside the set cannot
    reduce the set's age.
    """
    s = _as_nodeset(nodes)
    _require_in_range(net, s)
    if not 1 <= i <= net.n:
        raise ValueError(f"node index {i} out of range 1..{net.n}")
    if i in s:
        return 0.0
    return float(net.peer_rates[i - 1, [m - 1 for m in s]].sum())


def neighbor_set(net: GossipNetwork, nodes) -> set[int]:
    """Nodes outside the set with a positive update rate into it."""
    s = _as_nodeset(nodes)
    _require_in_range(net, s)
    return {i0 + 1 for i0 in _neighbors0(net, s.mask)}


def solve_age(net: GossipNetwork, nodes, *, subset_cap: int = DEFAULT_SUBSET_CAP) -> AgeSolution:
    """Solve the limiting average version age of an observer of ``nodes``.

    Every visited subset S satisfies, to floating precision,

        age(S) = (lambda_self + sum_i w_i * age(S + {i}))
                 / (lambda_0(S) + sum_i w_i)

    where i ranges over the updating neighbors of S, w_i is node i's total
    rate into S, and lambda_0(S) is the source rate into S. A set with no
    update source at all (empty neighbor set and zero source rate) has age
    +inf, and +inf propagates down to every set that depends on it. Each
    expansion strictly enlarges the set, so the walk terminates after at
    most 2^n - 1 subsets; ``subset_cap`` bounds that count.
    """
    query = _as_nodeset(nodes)
    _require_in_range(net, query)

    # Discovery pass: collect every subset the query depends on. Successor
    # masks are strictly larger, so evaluation in descending popcount order
    # always sees supersets first.
    seen = {query.mask}
    stack = [query.mask]
    while stack:
        mask = stack.pop()
        for i0 in _neighbors0(net, mask):
            sup = mask | (1 << i0)
            if sup not in seen:
                if len(seen) >= subset_cap:
                    raise SubsetCapError(subset_cap, len(seen))
                seen.add(sup)
                stack.append(sup)

    by_mask: dict[int, float] = {}
    for mask in sorted(seen, key=lambda m: (-m.bit_count(), m)):
        members0 = _bits0(mask)
        lam0 = float(net.source_rates[members0].sum())
        numerator = net.lambda_self
        denominator = lam0
        starved = False  # some upstream observer is never updated
        for i0 in _neighbors0(net, mask):
            w = float(net.peer_rates[i0, members0].sum())
            denominator += w
            sup_age = by_mask[mask | (1 << i0)]
            if math.isinf(sup_age):
                starved = True
            else:
                numerator += w * sup_age
        if starved or denominator <= 0.0:
            by_mask[mask] = math.inf
        else:
            by_mask[mask] = numerator / denominator

    ages = {NodeSet.from_mask(m): v for m, v in by_mask.items()}
    return AgeSolution(query=query, ages=ages, visited_count=len(seen))


def ode_residual(net: GossipNetwork, solution: AgeSolution, nodes) -> float:
    """Stationarity residual of the age fixed point at one subset.

    Evaluates

        lambda_self - age(S) * (lambda_0(S) + sum_i w_i) + sum_i w_i * age(S + {i})

    using the ages stored in ``solution``; a correct solution yields 0 up
    to rounding. Raises ValueError if S or a required superset is missing
    from the solution or has infinite age.
    """
    s = _as_nodeset(nodes)
    _require_in_range(net, s)
    age_s = solution.ages.get(s)
    if age_s is None:
        raise ValueError(f"subset {s!r} not present in solution")
    if math.isinf(age_s):
        raise ValueError(f"residual not applicable: {s!r} has infinite age")
    lam0 = source_rate_into(net, s)
    weight_total = 0.0
    inflow = 0.0
    for i in sorted(neighbor_set(net, s)):
        w = neighbor_rate(net, i, s)
        sup = s.with_node(i)
        sup_age = solution.ages.get(sup)
        if sup_age is None:
            raise ValueError(f"subset {sup!r} not present in solution")
        if math.isinf(sup_age):
            raise ValueError(f"residual not applicable: {sup!r} has infinite age")
        weight_total += w
        inflow += w * sup_age
    return net.lambda_self - age_s * (lam0 + weight_total) + inflow
