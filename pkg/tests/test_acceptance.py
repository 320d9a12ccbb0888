"""Exit criteria.  Each test reports one PASS/FAIL line in the terminal summary."""

import math
import time
from collections import Counter

import mpmath
import pytest

from realitypaths.engine import TraversalConfig, traverse
from realitypaths.oracle import diff_results, enumerate_paths_bruteforce
from realitypaths.statespace import (
    StateSpaceParams,
    approx_path_count,
    exact_path_count,
    paths_with_k_intermediates,
    possible_states,
)
from realitypaths.topology import TopologySpec, build_figure_example, run_experiment

from .netgen import random_tiny_network

criterion = pytest.mark.criterion

ORACLE_SEEDS = range(100)
DETERMINISM_SEEDS = range(1000, 1050)
# fixed matched specs for the topology trend checks
TREND_SPECS = {kind: TopologySpec(kind, 6, 1, 4, 0.0, seed=0) for kind in ("ring", "tree", "star")}
TREND_CAPS = (1, 2, 3)


@criterion("1 worked example: routes 1-2-5-6 and 1-4-5-6 with their fact flips, < 1 s")
def test_worked_example():
    start = time.perf_counter()
    result = traverse(build_figure_example(), TraversalConfig(link_cap=1))
    elapsed = time.perf_counter() - start
    flips = {}
    for path in result.attack_paths:
        flips.setdefault(tuple(path.containers()), []).append(path.changed_facts())
    assert {"fact1", "fact3", "fact4"} in flips[("1", "2", "5", "6")]
    assert {"fact2", "fact3", "fact4"} in flips[("1", "4", "5", "6")]
    assert elapsed < 1.0


@criterion("2 state count: possible_states(3, 9) == 1536")
def test_state_count():
    assert possible_states(3, 9).exact == 1536


@criterion("3 per-length counts: k=1 -> 1534, k=2 -> 2,351,622")
def test_per_length_counts():
    assert paths_with_k_intermediates(3, 9, 1).exact == 1534
    assert paths_with_k_intermediates(3, 9, 2).exact == 2_351_622


@criterion("4 approximation (103/60)*1534! within 10% of 1.19e4223, < 1 s")
def test_appendix_approximation():
    start = time.perf_counter()
    value = approx_path_count(3, 9)
    elapsed = time.perf_counter() - start
    assert value.exact * 60 == 103 * math.factorial(1534)
    exact_log10 = math.log10(value.exact)
    print(f"(103/60)*1534! = {10 ** (exact_log10 - 4223):.6f}e4223")
    assert abs(exact_log10 - (math.log10(1.19) + 4223)) <= 0.05
    assert abs(value.exact / 10**4223 - 1.19) / 1.19 <= 0.10
    assert elapsed < 1.0


def _oracle_runs():
    for seed in ORACLE_SEEDS:
        net = random_tiny_network(seed, max_containers=4, max_facts=2, max_rules=4, guards=1)
        for cap in (1, 2):
            yield seed, cap, net


@criterion("5 oracle equivalence: 100 seeded networks x caps 1,2, empty diffs, < 5 min")
def test_oracle_equivalence():
    start = time.perf_counter()
    failures = []
    for seed, cap, net in _oracle_runs():
        assert len(net.containers) <= 4 and len(net.rules) <= 4
        assert all(len(c.facts) <= 2 for c in net.containers)
        assert sum(1 for c in net.containers if c.guard) <= 1
        cfg = TraversalConfig(cap)
        diff = diff_results(traverse(net, cfg), enumerate_paths_bruteforce(net, cfg))
        if not diff.equivalent:
            failures.append((seed, cap, str(diff)))
    assert failures == []
    assert time.perf_counter() - start < 300


@criterion("6 immutability and isolation over the criterion-5 runs: zero violations")
def test_immutability_and_isolation():
    violations = []
    for seed, cap, net in _oracle_runs():
        initial = {f.id: f.initial_value for f in net.facts}
        result = traverse(net, TraversalConfig(cap), keep_paths=True)
        enumerate_paths_bruteforce(net, TraversalConfig(cap))
        if {f.id: f.initial_value for f in net.facts} != initial:
            violations.append((seed, cap, "base facts changed"))
        owners = {}
        for path in result.paths:
            held = list(path.all_variants()) + [v for t in path.transitions for v in t.resulting_variants]
            for v in held:
                if owners.setdefault(id(v), path.path_id) != path.path_id:
                    violations.append((seed, cap, f"variant shared by paths {owners[id(v)]} and {path.path_id}"))
    assert violations == []


@criterion("7 determinism and link-cap monotonicity over 50 seeded networks: zero violations")
def test_determinism_and_monotonicity():
    violations = []
    for seed in DETERMINISM_SEEDS:
        net = random_tiny_network(seed, max_containers=5, max_facts=2, max_rules=5, guards=2)
        found = {}
        for cap in (1, 2, 3):
            a = traverse(net, TraversalConfig(cap))
            b = traverse(net, TraversalConfig(cap))
            if a.attack_steps() != b.attack_steps() or a.total_paths_generated != b.total_paths_generated:
                violations.append((seed, cap, "non-deterministic"))
            found[cap] = Counter(a.attack_steps())
        for cap in (1, 2):
            if not set(found[cap]) <= set(found[cap + 1]):
                violations.append((seed, cap, "cap monotonicity"))
    assert violations == []


@pytest.fixture(scope="module")
def trend_rows():
    start = time.perf_counter()
    rows = {kind: run_experiment(spec, TREND_CAPS, trials=20, time_limit=60.0) for kind, spec in TREND_SPECS.items()}
    assert time.perf_counter() - start < 600
    return rows


@criterion("8a trend: ring reality paths strictly increase over caps 1 -> 2 -> 3")
def test_ring_trend(trend_rows):
    ring = trend_rows["ring"]
    assert not any(r.stopped_early for r in ring)
    paths = [r.avg_reality_paths for r in ring]
    print("ring reality paths by cap:", paths)
    assert paths[0] < paths[1] < paths[2]


@criterion("8b trend: tree and star variants/paths ratio exceeds ring at equal caps")
def test_variant_ratio_trend(trend_rows):
    ratios = {kind: [round(r.variant_ratio, 4) for r in rows if not r.stopped_early]
              for kind, rows in trend_rows.items()}
    print("variants/paths by cap:", ratios)
    for kind in ("tree", "star"):
        for cap_index, ring_ratio in enumerate(ratios["ring"]):
            assert ratios[kind][cap_index] > ring_ratio, (kind, TREND_CAPS[cap_index])


@criterion("9 math cross-checks: sum, recurrence, floor(e*N!) identities")
def test_math_cross_checks():
    for big_n in range(0, 13):
        p = StateSpaceParams(big_n + 2, 0)
        assert exact_path_count(p).exact == sum(paths_with_k_intermediates(p, k).exact for k in range(big_n + 1))
    for big_n in range(1, 21):
        p = StateSpaceParams(big_n + 2, 0)
        for k in range(1, big_n + 1):
            assert paths_with_k_intermediates(p, k).exact == paths_with_k_intermediates(p, k - 1).exact * (big_n - k + 1)
    mpmath.mp.dps = 60
    for big_n in range(1, 21):
        expected = int(mpmath.floor(mpmath.e * mpmath.factorial(big_n)))
        assert exact_path_count(StateSpaceParams(big_n + 2, 0)).exact == expected
