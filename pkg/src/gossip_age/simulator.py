"""Discrete-event Monte Carlo simulation of gossip version ages.

All network transitions are merged into a single exponential clock at the
total rate; each event then picks one directed edge by alias sampling (the
edge distribution is static, so the table is built once per run). Subset
ages are integrated exactly as step functions between events, so there is
no discretization error. Random numbers come from one seeded numpy
generator per run, consumed in a fixed order (inter-arrival draw first,
then edge draw), which makes runs bit-reproducible. The event loop itself
is JIT compiled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .network import GossipNetwork, NodeSet

__all__ = [
    "N_BATCHES",
    "ReplicatedEstimate",
    "SimConfig",
    "SimEstimate",
    "SimulationState",
    "apply_transition",
    "replicate",
    "run_simulation",
]

N_BATCHES = 20  # fixed batch count for batch-means standard errors
_CHUNK = 1 << 16  # uniform pairs drawn per kernel call


@dataclass(frozen=True)
class SimulationState:
    """Version counters of the network at one instant.

    The age of node i is ``source_version - node_versions[i-1]``. Node
    versions never exceed the source's and never decrease.
    """

    source_version: int
    node_versions: tuple[int, ...]
    now: float = 0.0

    def age_of(self, nodes) -> int:
        """Version age seen by an observer of ``nodes`` (min over members)."""
        s = nodes if isinstance(nodes, NodeSet) else NodeSet(nodes)
        if not s:
            raise ValueError("node set must be nonempty")
        return self.source_version - max(self.node_versions[m - 1] for m in s)


def apply_transition(state: SimulationState, edge: tuple[int, int]) -> SimulationState:
    """Apply one delivery event and return the new state.

    (0, 0): the source generates a new version, so every age grows by one.
    (0, j): the source delivers its current version to node j (age 0).
    (i, j): node i forwards its update to node j; updates are
            version-stamped, so j keeps the fresher of the two versions and
            stale deliveries are ignored.
    """
    if not (isinstance(edge, tuple) and len(edge) == 2):
        raise ValueError(f"edge must be an (i, j) pair, got {edge!r}")
    i, j = edge
    for v in (i, j):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ValueError(f"edge endpoints must be integers, got {edge!r}")
    n = len(state.node_versions)
    if i == 0 and j == 0:
        return replace(state, source_version=state.source_version + 1)
    if not 1 <= j <= n or not 0 <= i <= n or i == j:
        raise ValueError(f"malformed edge ({i}, {j}) for a {n}-node network")
    sender = state.source_version if i == 0 else state.node_versions[i - 1]
    if sender <= state.node_versions[j - 1]:
        return state
    versions = list(state.node_versions)
    versions[j - 1] = sender
    new_state = replace(state, node_versions=tuple(versions))
    assert all(v <= new_state.source_version for v in new_state.node_versions)
    return new_state


@dataclass(frozen=True)
class SimConfig:
    """Run parameters: horizon, warmup cut, RNG seed, tracked node sets.

    ``targets=None`` tracks every singleton {1}..{n}. The warmup prefix is
    excluded from all averages.
    """

    horizon: float
    warmup: float = 0.0
    seed: int = 0
    targets: tuple[NodeSet, ...] | None = None

    def __post_init__(self) -> None:
        if not self.horizon > 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        if self.warmup < 0:
            raise ValueError(f"warmup must be >= 0, got {self.warmup}")
        if not self.warmup < self.horizon:
            raise ValueError(
                f"warmup must be < horizon (got warmup={self.warmup}, horizon={self.horizon})"
            )
        if self.targets is not None:
            targets = tuple(self.targets)
            if not targets:
                raise ValueError("targets must be nonempty (or None for all singletons)")
            for t in targets:
                if not isinstance(t, NodeSet) or not t:
                    raise ValueError(f"targets must be nonempty NodeSets, got {t!r}")
            object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class SimEstimate:
    """Time-average subset ages from a single run.

    ``means`` and ``stderrs`` align with ``targets``. Standard errors are
    batch means over N_BATCHES equal slices of the post-warmup window;
    autocorrelation across batch boundaries is ignored, so they are
    approximate.
    """

    targets: tuple[NodeSet, ...]
    means: tuple[float, ...]
    stderrs: tuple[float, ...]
    event_count: int
    seed: int
    horizon: float
    warmup: float

    def _index(self, nodes) -> int:
        s = nodes if isinstance(nodes, NodeSet) else NodeSet(nodes)
        try:
            return self.targets.index(s)
        except ValueError:
            raise ValueError(f"{s!r} is not a tracked target") from None

    def mean(self, nodes) -> float:
        return self.means[self._index(nodes)]

    def stderr(self, nodes) -> float:
        return self.stderrs[self._index(nodes)]


@dataclass(frozen=True)
class ReplicatedEstimate:
    """Independent replications pooled per target.

    Replication k runs with seed ``base_seed + k``. For reps >= 2 the
    pooled standard error comes from the rep-to-rep sample variance; for a
    single rep it falls back to that run's batch-means stderr, so the
    pooled result equals the lone estimate.
    """

    estimates: tuple[SimEstimate, ...]
    targets: tuple[NodeSet, ...]
    pooled_means: tuple[float, ...]
    pooled_stderrs: tuple[float, ...]

    @property
    def reps(self) -> int:
        return len(self.estimates)

    def _index(self, nodes) -> int:
        s = nodes if isinstance(nodes, NodeSet) else NodeSet(nodes)
        try:
            return self.targets.index(s)
        except ValueError:
            raise ValueError(f"{s!r} is not a tracked target") from None

    def pooled_mean(self, nodes) -> float:
        return self.pooled_means[self._index(nodes)]

    def pooled_stderr(self, nodes) -> float:
        return self.pooled_stderrs[self._index(nodes)]


def _transitions(net: GossipNetwork) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flatten every positive-rate transition into parallel arrays.

    Order is part of the reproducibility contract (the alias table indexes
    into it): the source self-update first, then source edges by target,
    then peer edges row-major. The self-update is encoded as edge (0, 0).
    """
    rates: list[float] = []
    src: list[int] = []
    dst: list[int] = []
    if net.lambda_self > 0:
        rates.append(net.lambda_self)
        src.append(0)
        dst.append(0)
    for j in range(net.n):
        if net.source_rates[j] > 0:
            rates.append(float(net.source_rates[j]))
            src.append(0)
            dst.append(j + 1)
    for i in range(net.n):
        for j in range(net.n):
            if net.peer_rates[i, j] > 0:
                rates.append(float(net.peer_rates[i, j]))
                src.append(i + 1)
                dst.append(j + 1)
    return (
        np.array(rates, dtype=float),
        np.array(src, dtype=np.int64),
        np.array(dst, dtype=np.int64),
    )


def _build_alias(weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias table for categorical sampling with a single uniform.

    Sampling scales the uniform by the table size; the integer part picks a
    slot, the fractional part accepts the slot or redirects to its alias.
    """
    k = weights.size
    scaled = weights * (k / weights.sum())
    prob = np.ones(k)
    alias = np.arange(k, dtype=np.int64)
    small = [i for i in range(k) if scaled[i] < 1.0]
    large = [i for i in range(k) if scaled[i] >= 1.0]
    while small and large:
        s = small.pop()
        l = large.pop()
        prob[s] = scaled[s]
        alias[s] = l
        scaled[l] -= 1.0 - scaled[s]
        (small if scaled[l] < 1.0 else large).append(l)
    # leftovers are float dust; prob stays 1 so they always accept
    return prob, alias


@njit(cache=True)
def _advance(u, nv, cur_age, acc, clock, counter, prob, alias, src, dst,
             toff, tidx, total_rate, horizon, warmup, batch_len, n_batches):
    # One uniform pair per event: u[r, 0] drives the inter-arrival time,
    # u[r, 1] the alias pick. nv[0] is the source's version counter.
    # Returns True once the horizon is reached.
    now = clock[0]
    k = alias.shape[0]
    n_targets = cur_age.shape[0]
    for r in range(u.shape[0]):
        dt = -np.log1p(-u[r, 0]) / total_rate
        t_next = now + dt
        end = t_next if t_next < horizon else horizon
        lo = now if now > warmup else warmup
        if end > lo:
            p0 = lo - warmup
            p1 = end - warmup
            b0 = int(p0 / batch_len)
            b1 = int(p1 / batch_len)
            if b0 >= n_batches:
                b0 = n_batches - 1
            if b1 >= n_batches:
                b1 = n_batches - 1
            if b0 == b1:
                w = p1 - p0
                for t in range(n_targets):
                    acc[t, b0] += w * cur_age[t]
            else:
                # holding interval straddles one or more batch boundaries
                for b in range(b0, b1 + 1):
                    seg0 = p0 if p0 > b * batch_len else b * batch_len
                    seg1 = p1 if p1 < (b + 1) * batch_len else (b + 1) * batch_len
                    if seg1 > seg0:
                        for t in range(n_targets):
                            acc[t, b] += (seg1 - seg0) * cur_age[t]
        if t_next >= horizon:
            clock[0] = horizon
            return True
        pick = u[r, 1] * k
        e = int(pick)
        if pick - e >= prob[e]:
            e = alias[e]
        i = src[e]
        j = dst[e]
        if j == 0:
            nv[0] += 1  # new source version: every tracked age grows by one
            for t in range(n_targets):
                cur_age[t] += 1
        else:
            vi = nv[i]  # nv[0] is current when i is the source
            if vi > nv[j]:
                nv[j] = vi
                fresh = nv[0] - vi
                for p in range(toff[j], toff[j + 1]):
                    t = tidx[p]
                    if fresh < cur_age[t]:
                        cur_age[t] = fresh
        now = t_next
        counter[0] += 1
    clock[0] = now
    return False


def run_simulation(net: GossipNetwork, cfg: SimConfig) -> SimEstimate:
    """Simulate the network and return time-average ages per target set.

    All nodes start current (age 0) at t=0; the warmup window absorbs the
    resulting initialization bias. Output is deterministic given (net, cfg)
    including the seed.
    """
    if net.lambda_self < 0 or np.any(net.source_rates < 0) or np.any(net.peer_rates < 0):
        raise ValueError("network has negative rates")
    rates, src, dst = _transitions(net)
    total_rate = float(rates.sum()) if rates.size else 0.0
    if total_rate <= 0.0:
        raise ValueError("degenerate network: total transition rate is 0")

    if cfg.targets is not None:
        targets = cfg.targets
    else:
        targets = tuple(NodeSet([j]) for j in range(1, net.n + 1))
    if not targets:
        raise ValueError("network has no nodes to track")
    for t in targets:
        if t.mask >> net.n:
            raise ValueError(f"target {t!r} not within 1..{net.n}")

    per_node: list[list[int]] = [[] for _ in range(net.n + 1)]
    for t_idx, t in enumerate(targets):
        for m in t:
            per_node[m].append(t_idx)
    toff = np.zeros(net.n + 2, dtype=np.int64)
    flat: list[int] = []
    for node in range(net.n + 1):
        toff[node] = len(flat)
        flat.extend(per_node[node])
    toff[net.n + 1] = len(flat)
    tidx = np.array(flat, dtype=np.int64)

    prob, alias = _build_alias(rates)
    nv = np.zeros(net.n + 1, dtype=np.int64)
    cur_age = np.zeros(len(targets), dtype=np.int64)
    acc = np.zeros((len(targets), N_BATCHES))
    clock = np.zeros(1)
    counter = np.zeros(1, dtype=np.int64)
    batch_len = (cfg.horizon - cfg.warmup) / N_BATCHES

    rng = np.random.default_rng(cfg.seed)
    finished = False
    while not finished:
        u = rng.random((_CHUNK, 2))
        finished = _advance(
            u, nv, cur_age, acc, clock, counter, prob, alias, src, dst,
            toff, tidx, total_rate, cfg.horizon, cfg.warmup, batch_len, N_BATCHES,
        )

    window = cfg.horizon - cfg.warmup
    means = tuple(float(x) for x in acc.sum(axis=1) / window)
    batch_means = acc / batch_len
    stderrs = tuple(
        float(x) for x in batch_means.std(axis=1, ddof=1) / math.sqrt(N_BATCHES)
    )
    return SimEstimate(
        targets=targets,
        means=means,
        stderrs=stderrs,
        event_count=int(counter[0]),
        seed=cfg.seed,
        horizon=cfg.horizon,
        warmup=cfg.warmup,
    )


def replicate(net: GossipNetwork, cfg: SimConfig, reps: int) -> ReplicatedEstimate:
    """Run ``reps`` independent simulations (seeds seed..seed+reps-1) and pool them.

    The pooled mean is the average of per-rep means; replications are
    independent, so the result does not depend on execution order.
    """
    if isinstance(reps, bool) or not isinstance(reps, (int, np.integer)) or reps < 1:
        raise ValueError(f"reps must be a positive integer, got {reps!r}")
    estimates = tuple(
        run_simulation(net, replace(cfg, seed=cfg.seed + k)) for k in range(reps)
    )
    targets = estimates[0].targets
    rep_means = np.array([est.means for est in estimates])
    pooled_means = tuple(float(x) for x in rep_means.mean(axis=0))
    if reps == 1:
        pooled_stderrs = estimates[0].stderrs
    else:
        pooled_stderrs = tuple(
            float(x) for x in rep_means.std(axis=0, ddof=1) / math.sqrt(reps)
        )
    return ReplicatedEstimate(
        estimates=estimates,
        targets=targets,
        pooled_means=pooled_means,
        pooled_stderrs=pooled_stderrs,
    )
