"""Version age of information in memoryless gossip networks.

A source refreshes its status as a Poisson process and pushes updates into
a network of nodes that forward them to each other as independent Poisson
processes. This package computes the limiting average version age at any
node or node subset three ways: exactly (subset-expansion solver), in
closed iterative form for symmetric topologies (complete graph and ring,
with harmonic-sum bounds), and empirically (discrete-event Monte Carlo).
"""

from .network import (
    GossipNetwork,
    GraphFormatError,
    NodeSet,
    build_complete,
    build_ring,
    parse_graph,
    serialize_graph,
    validate,
)
from .simulator import (
    N_BATCHES,
    ReplicatedEstimate,
    SimConfig,
    SimEstimate,
    SimulationState,
    apply_transition,
    replicate,
    run_simulation,
)
from .solver import (
    DEFAULT_SUBSET_CAP,
    AgeSolution,
    SubsetCapError,
    neighbor_rate,
    neighbor_set,
    ode_residual,
    solve_age,
    source_rate_into,
)
from .symmetric import (
    AgeBounds,
    SymmetricAgeProfile,
    complete_age_profile,
    complete_bounds,
    ring_age_profile,
)

__version__ = "0.1.0"

__all__ = [
    "AgeBounds",
    "AgeSolution",
    "DEFAULT_SUBSET_CAP",
    "GossipNetwork",
    "GraphFormatError",
    "N_BATCHES",
    "NodeSet",
    "ReplicatedEstimate",
    "SimConfig",
    "SimEstimate",
    "SimulationState",
    "SubsetCapError",
    "SymmetricAgeProfile",
    "apply_transition",
    "build_complete",
    "build_ring",
    "complete_age_profile",
    "complete_bounds",
    "neighbor_rate",
    "neighbor_set",
    "ode_residual",
    "parse_graph",
    "replicate",
    "ring_age_profile",
    "run_simulation",
    "serialize_graph",
    "solve_age",
    "source_rate_into",
    "validate",
]
