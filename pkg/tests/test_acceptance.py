"""Acceptance gate.

One test per criterion, each run at its stated tolerance. Every test prints
a single `ACCEPTANCE <k> PASS|FAIL <name>` line (visible with `pytest -s`);
the assertion carries the same verdict.
"""

import math
import time

import numpy as np
import pytest

from gossip_age import (
    GossipNetwork,
    NodeSet,
    SimConfig,
    build_complete,
    build_ring,
    complete_age_profile,
    complete_bounds,
    ode_residual,
    replicate,
    ring_age_profile,
    solve_age,
)
from conftest import brute_force_ages, make_random_network, make_toy_network


def _verdict(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {num} {status} {name}"
    if detail:
        line += f" [{detail}]"
    print(line)
    assert ok, line


def _random_net_for_oracle(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(1, 5))
    return make_random_network(rng, n, low=0.05, high=2.0)


def _solve_all_subsets(net):
    """Union of solve_age over every singleton; on all-positive-rate
    networks that reaches every nonempty subset."""
    merged = {}
    solutions = []
    for j in range(1, net.n + 1):
        sol = solve_age(net, NodeSet([j]))
        solutions.append(sol)
        merged.update(sol.ages)
    return merged, solutions


def test_criterion_1_toy_closed_form():
    net = make_toy_network()
    best = math.inf
    sol = None
    for _ in range(20):
        start = time.perf_counter()
        sol = solve_age(net, NodeSet([2]))
        best = min(best, time.perf_counter() - start)
    expected = {
        (2,): 29 / 24,
        (1, 2): 3 / 4,
        (2, 3): 2 / 3,
        (1, 2, 3): 1 / 2,
    }
    worst = max(abs(sol.age(list(k)) - v) for k, v in expected.items())
    ok = worst <= 1e-9 and best < 1e-3
    _verdict(1, "toy-network closed form", ok, f"max err {worst:.1e}, best solve {best * 1e6:.0f} us")


def test_criterion_2_brute_force_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for seed in range(50):
        net = _random_net_for_oracle(seed)
        oracle = brute_force_ages(net)
        merged, _ = _solve_all_subsets(net)
        assert set(merged) == set(oracle)
        for s, expected in oracle.items():
            worst = max(worst, abs(merged[s] - expected))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 1.0
    _verdict(2, "brute-force oracle equivalence", ok, f"max err {worst:.1e}, {elapsed:.2f}s")


def test_criterion_3_symmetry_consistency():
    start = time.perf_counter()
    worst = 0.0
    for n in range(2, 11):
        profile = complete_age_profile(n, 1.0, 1.0)
        net = build_complete(n, 1.0, 1.0)
        for j in range(1, n + 1):
            got = solve_age(net, NodeSet([j])).age()
            worst = max(worst, abs(got - profile.age(1)))
    for n in range(3, 11):
        profile = ring_age_profile(n, 1.0, 1.0)
        net = build_ring(n, 1.0, 1.0)
        for j in range(1, n + 1):
            got = solve_age(net, NodeSet([j])).age()
            worst = max(worst, abs(got - profile.age(1)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30.0
    _verdict(3, "symmetric profile vs exact solver", ok, f"max err {worst:.1e}, {elapsed:.1f}s")


def test_criterion_4_harmonic_sandwich():
    start = time.perf_counter()
    ok = True
    for n in list(range(1, 1001)) + [10_000, 100_000]:
        age = complete_age_profile(n, 1.0, 1.0).per_node_age
        bounds = complete_bounds(n, 1.0, 1.0)
        if not (bounds.lower <= age * (1 + 1e-12) and age <= bounds.upper * (1 + 1e-12)):
            ok = False
            break
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 5.0
    _verdict(4, "harmonic-bound sandwich to n=1e5", ok, f"{elapsed:.2f}s")


def test_criterion_5_logarithmic_growth():
    n = 10_000
    age = complete_age_profile(n, 1.0, 1.0).per_node_age
    bounds = complete_bounds(n, 1.0, 1.0)
    rel_gap = (bounds.upper - bounds.lower) / age
    ok = bounds.lower <= age <= bounds.upper and rel_gap < 0.2
    _verdict(5, "logarithmic growth at n=1e4", ok, f"age {age:.4f}, rel gap {rel_gap:.2e}")


def test_criterion_6_ring_sqrt_scaling():
    start = time.perf_counter()
    corridor_ok = True
    for n in range(100, 10_001, 100):
        ratio = ring_age_profile(n, 1.0, 1.0).per_node_age / math.sqrt(n)
        if not 1.0 <= ratio <= 1.3:
            corridor_ok = False
            break
    at_cross = ring_age_profile(40_401, 1.0, 1.0).per_node_age / math.sqrt(40_401)
    after_cross = ring_age_profile(40_402, 1.0, 1.0).per_node_age / math.sqrt(40_402)
    crossover_ok = at_cross <= 1.25 * (1 + 1e-6) and after_cross > 1.25 * (1 - 1e-6)
    elapsed = time.perf_counter() - start
    ok = corridor_ok and crossover_ok and elapsed < 10.0
    _verdict(
        6, "ring sqrt(n) corridor and crossover", ok,
        f"ratio(40401)={at_cross:.9f}, ratio(40402)={after_cross:.9f}, {elapsed:.1f}s",
    )


def test_criterion_7_limiting_cases():
    fast = solve_age(make_toy_network(l12=1e6), NodeSet([2]))
    merge_err = abs(fast.age([2]) - fast.age([1, 2]))
    severed = solve_age(make_toy_network(l12=0.0), NodeSet([2]))
    decomp_err = abs(severed.age([2]) - (1.0 / 1.0 + severed.age([2, 3])))
    ok = merge_err <= 1e-4 and decomp_err <= 1e-9
    _verdict(7, "limiting cases of the toy network", ok,
             f"merge err {merge_err:.1e}, decomposition err {decomp_err:.1e}")


def test_criterion_8_simulator_agreement():
    start = time.perf_counter()
    single = GossipNetwork(
        n=1, lambda_self=1.0, source_rates=np.array([1.0]), peer_rates=np.zeros((1, 1))
    )
    cases = [
        ("single-node", single, NodeSet([1]), 1.0, 100_000),
        ("toy", make_toy_network(), NodeSet([2]), 29 / 24, 200_000),
        (
            "complete n=6",
            build_complete(6, 1.0, 1.0),
            NodeSet([1]),
            complete_age_profile(6, 1.0, 1.0).per_node_age,
            300_000,
        ),
    ]
    ok = True
    details = []
    for name, net, target, exact, seed_base in cases:
        hits = 0
        for k in range(40):
            cfg = SimConfig(horizon=1e5, warmup=1e3, seed=seed_base + 10 * k, targets=(target,))
            pooled = replicate(net, cfg, 10)
            if abs(pooled.pooled_mean(target) - exact) <= 3 * pooled.pooled_stderr(target):
                hits += 1
        details.append(f"{name} {hits}/40")
        ok = ok and hits >= 38
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 120.0
    _verdict(8, "simulator vs exact (3-sigma batteries)", ok,
             f"{', '.join(details)}, {elapsed:.0f}s")


def test_criterion_9_fixed_point_residuals():
    worst = 0.0

    def check(net, solution):
        nonlocal worst
        for s, age in solution.ages.items():
            if math.isinf(age):
                continue
            worst = max(worst, abs(ode_residual(net, solution, s)))

    toy = make_toy_network()
    check(toy, solve_age(toy, NodeSet([2])))
    for seed in range(50):
        net = _random_net_for_oracle(seed)
        _, solutions = _solve_all_subsets(net)
        for sol in solutions:
            check(net, sol)
    for n in range(2, 11):
        net = build_complete(n, 1.0, 1.0)
        for j in range(1, n + 1):
            check(net, solve_age(net, NodeSet([j])))
    for n in range(3, 11):
        net = build_ring(n, 1.0, 1.0)
        for j in range(1, n + 1):
            check(net, solve_age(net, NodeSet([j])))
    ok = worst <= 1e-9
    _verdict(9, "stationarity residual of every visited subset", ok, f"max |residual| {worst:.1e}")


def test_criterion_10_property_suite():
    def close(a, b, tol=1e-9):
        if math.isinf(a) or math.isinf(b):
            return a == b
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))

    ok = True
    for seed in range(100):
        rng = np.random.default_rng(7000 + seed)
        n = int(rng.integers(1, 7))
        density = 1.0 if seed % 2 == 0 else 0.6
        net = make_random_network(rng, n, density=density)
        query = NodeSet([int(rng.integers(1, n + 1))])
        sol = solve_age(net, query)

        # monotonicity: S inside T implies age(T) <= age(S)
        items = list(sol.ages.items())
        for s, age_s in items:
            for t, age_t in items:
                if s.issubset(t) and not age_t <= age_s + 1e-9:
                    ok = False

        # joint rate scaling leaves every age unchanged
        c = float(rng.uniform(0.1, 10.0))
        scaled = GossipNetwork(
            n=n,
            lambda_self=c * net.lambda_self,
            source_rates=c * net.source_rates,
            peer_rates=c * net.peer_rates,
        )
        scaled_sol = solve_age(scaled, query)
        for s, age_s in sol.ages.items():
            if not close(scaled_sol.ages[s], age_s):
                ok = False

        # doubling the source self-rate doubles every finite age
        doubled = GossipNetwork(
            n=n,
            lambda_self=2 * net.lambda_self,
            source_rates=net.source_rates,
            peer_rates=net.peer_rates,
        )
        doubled_sol = solve_age(doubled, query)
        for s, age_s in sol.ages.items():
            expected = age_s if math.isinf(age_s) else 2 * age_s
            if not close(doubled_sol.ages[s], expected):
                ok = False
    _verdict(10, "monotonicity, scale invariance, source-rate linearity", ok)
