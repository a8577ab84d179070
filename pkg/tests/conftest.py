"""Shared factories and independent oracles for the test suite."""

import numpy as np
import pytest

from gossip_age import GossipNetwork, NodeSet


def make_toy_network(l00=1.0, l01=1.0, l03=1.0, l12=1.0, l13=1.0, l32=1.0):
    """Three-node network: the source feeds nodes 1 and 3, node 1 feeds
    nodes 2 and 3, node 3 feeds node 2. Node 2 has no direct source link."""
    peers = np.zeros((3, 3))
    peers[0, 1] = l12
    peers[0, 2] = l13
    peers[2, 1] = l32
    return GossipNetwork(
        n=3,
        lambda_self=l00,
        source_rates=np.array([l01, 0.0, l03]),
        peer_rates=peers,
    )


def make_random_network(rng, n, low=0.05, high=2.0, density=1.0):
    """Random-rate network; with density < 1 some links are dropped to 0."""
    source = rng.uniform(low, high, size=n)
    peers = rng.uniform(low, high, size=(n, n))
    if density < 1.0:
        source = source * (rng.random(n) < density)
        peers = peers * (rng.random((n, n)) < density)
    np.fill_diagonal(peers, 0.0)
    return GossipNetwork(
        n=n,
        lambda_self=float(rng.uniform(low, high)),
        source_rates=source,
        peer_rates=peers,
    )


def brute_force_ages(net):
    """Ages of all 2^n - 1 nonempty subsets by one dense linear solve.

    Independent of the recursive solver: the stationarity equation of each
    subset becomes one matrix row, unknowns ordered by bitmask value, and
    numpy solves the assembled system directly. Assumes every subset has a
    positive total update rate (all ages finite).
    """
    n = net.n
    size = (1 << n) - 1
    a = np.zeros((size, size))
    b = np.full(size, net.lambda_self)
    for mask in range(1, size + 1):
        row = mask - 1
        members = [j for j in range(n) if (mask >> j) & 1]
        diag = net.source_rates[members].sum()
        for i in range(n):
            if (mask >> i) & 1:
                continue
            w = net.peer_rates[i, members].sum()
            if w > 0:
                diag += w
                a[row, (mask | (1 << i)) - 1] -= w
        a[row, row] += diag
    x = np.linalg.solve(a, b)
    return {NodeSet.from_mask(mask): x[mask - 1] for mask in range(1, size + 1)}


@pytest.fixture
def toy_net():
    return make_toy_network()


@pytest.fixture
def toy_net_factory():
    return make_toy_network


@pytest.fixture
def random_net_factory():
    return make_random_network


@pytest.fixture
def brute_force():
    return brute_force_ages
