"""Network generators, the two-path worked example, and the trial harness.

Generated networks use containers ``"1" .. "n"`` and links ``"l1" ..``.
Every fact starts false.  Rules are drawn with a seeded RNG and always span
the two endpoints of an existing link.
"""

from __future__ import annotations

import csv
import random
import statistics
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .engine import Termination, TraversalConfig, traverse
from .model import Container, Fact, Link, Network, Rule

__all__ = [
    "KINDS",
    "TopologySpec",
    "ExperimentRow",
    "generate_topology",
    "build_figure_example",
    "run_experiment",
    "write_report",
    "REPORT_HEADER",
]

KINDS = ("ring", "tree", "star", "bus", "mesh")
REPORT_HEADER = ["topology", "link_cap", "trials", "avg_reality_paths", "avg_variants",
                 "avg_runtime_seconds", "stopped_early"]


@dataclass(frozen=True)
class TopologySpec:
    kind: str
    container_count: int
    facts_per_container: int = 1
    rule_count: int = 0
    guard_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown topology kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        least = 3 if self.kind in ("ring", "star") else 2
        if self.container_count < least:
            raise ValueError(f"{self.kind} needs at least {least} containers")
        if self.facts_per_container < 0 or self.rule_count < 0:
            raise ValueError("fact and rule counts must be non-negative")
        if not 0.0 <= self.guard_fraction <= 1.0:
            raise ValueError("guard_fraction must lie in [0, 1]")
        if self.guard_fraction > 0 and self.facts_per_container == 0:
            raise ValueError("guards need at least one fact per container")


@dataclass(frozen=True)
class ExperimentRow:
    topology: str
    link_cap: int
    trials: int
    avg_reality_paths: float
    avg_variants: float
    avg_runtime_seconds: float
    stopped_early: bool
    avg_attack_paths: float = 0.0

    @property
    def variant_ratio(self) -> float:
        return self.avg_variants / self.avg_reality_paths if self.avg_reality_paths else 0.0


def _edges(kind: str, n: int, rng: random.Random) -> list[tuple[int, int]]:
    if kind == "ring":
        return [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    if kind == "bus":
        return [(i, i + 1) for i in range(1, n)]
    if kind == "star":
        return [(1, i) for i in range(2, n + 1)]
    if kind == "mesh":
        return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    # random recursive tree: each node hangs off an earlier one
    return [(rng.randint(1, i - 1), i) for i in range(2, n + 1)]


def _farthest_leaves(n: int, edges: list[tuple[int, int]]) -> tuple[int, int]:
    adj = {i: [] for i in range(1, n + 1)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    leaves = [i for i in adj if len(adj[i]) == 1]
    best = None
    for src in leaves:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        for dst in leaves:
            if dst > src and (best is None or dist[dst] > best[0]):
                best = (dist[dst], src, dst)
    return best[1], best[2]


def _endpoints(kind: str, n: int, edges) -> tuple[int, int]:
    if kind == "ring":
        return 1, 1 + n // 2
    if kind == "star":
        return 2, 3
    if kind == "tree":
        return _farthest_leaves(n, edges)
    return 1, n


def generate_topology(spec: TopologySpec) -> Network:
    rng = random.Random(spec.seed)
    n = spec.container_count
    edges = _edges(spec.kind, n, rng)
    ingress, egress = _endpoints(spec.kind, n, edges)

    facts_of = {c: [f"f{c}.{j}" for j in range(1, spec.facts_per_container + 1)] for c in range(1, n + 1)}
    facts = [Fact(fid, fid, False, str(c)) for c in range(1, n + 1) for fid in facts_of[c]]
    links = [Link(f"l{i}", str(a), str(b)) for i, (a, b) in enumerate(edges, 1)]

    rules = []
    settable: set[str] = set()  # facts some earlier rule can make true
    if spec.facts_per_container:
        for i in range(1, spec.rule_count + 1):
            a, b = rng.choice(edges)
            pool = facts_of[a] + facts_of[b]
            # preconditions only chain off facts an earlier rule sets, so
            # every rule can fire on some path
            chainable = [f for f in pool if f in settable]
            pre_facts = [rng.choice(chainable)] if chainable and rng.random() < 0.5 else []
            post_pool = [f for f in pool if f not in pre_facts]
            post_facts = rng.sample(post_pool, min(len(post_pool), rng.randint(1, 2)))
            pre = tuple((f, True) for f in pre_facts)
            post = tuple((f, rng.random() < 0.8) for f in post_facts)
            settable.update(f for f, v in post if v)
            rules.append(Rule(f"r{i}", pre, post))

    guards: dict[int, tuple] = {}
    candidates = [c for c in range(1, n + 1) if c != ingress]
    for c in sorted(rng.sample(candidates, round(spec.guard_fraction * len(candidates)))):
        # unlock with a fact owned by a neighbour so the guard is a real barrier
        neighbours = sorted({b for a, b in edges if a == c} | {a for a, b in edges if b == c})
        keyholder = rng.choice(neighbours)
        fact = rng.choice(facts_of[keyholder])
        guards[c] = ((fact, True),)
        if not any((fact, True) in r.post for r in rules):
            rules.append(Rule(f"u{c}", (), ((fact, True),)))

    containers = tuple(
        Container(str(c), f"container {c}", tuple(facts_of[c]), guards.get(c, ()))
        for c in range(1, n + 1)
    )
    return Network(containers, tuple(facts), tuple(links), tuple(rules), (), str(ingress), str(egress))


def build_figure_example() -> Network:
    """Six containers, two routes (1-2-5-6 and 1-4-5-6) that each flip a
    different chain of facts on the way to container 6."""
    owners = {"fact1": "2", "fact2": "4", "fact3": "5", "fact4": "6"}
    facts = tuple(Fact(f, f, False, c) for f, c in owners.items())
    containers = tuple(
        Container(str(i), f"container {i}", tuple(f for f, c in owners.items() if c == str(i)))
        for i in range(1, 7)
    )
    links = (
        Link("l12", "1", "2"),
        Link("l14", "1", "4"),
        Link("l25", "2", "5"),
        Link("l45", "4", "5"),
        Link("l56", "5", "6"),
    )
    rules = (
        Rule("set_fact1", (), (("fact1", True),)),
        Rule("set_fact2", (), (("fact2", True),)),
        Rule("fact1_to_fact3", (("fact1", True),), (("fact3", True),)),
        Rule("fact2_to_fact3", (("fact2", True),), (("fact3", True),)),
        Rule("fact3_to_fact4", (("fact3", True),), (("fact4", True),)),
    )
    return Network(containers, facts, links, rules, (), "1", "6")


def run_experiment(spec: TopologySpec, link_caps: Iterable[int], trials: int = 20,
                   time_limit: Optional[float] = 3600.0, network: Optional[Network] = None) -> list[ExperimentRow]:
    """Average path, variant and runtime figures over repeated traversals."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    net = network if network is not None else generate_topology(spec)
    rows = []
    for cap in link_caps:
        cfg = TraversalConfig(link_cap=cap, time_limit=time_limit)
        results = [traverse(net, cfg) for _ in range(trials)]
        stopped = any(r.termination is Termination.TIME_LIMIT for r in results)
        rows.append(
            ExperimentRow(
                topology=spec.kind,
                link_cap=cap,
                trials=trials,
                avg_reality_paths=statistics.fmean(r.total_paths_generated for r in results),
                avg_variants=statistics.fmean(r.total_variants_created for r in results),
                avg_runtime_seconds=float(time_limit) if stopped else statistics.fmean(r.runtime for r in results),
                stopped_early=stopped,
                avg_attack_paths=statistics.fmean(len(r.attack_paths) for r in results),
            )
        )
    return rows


def write_report(rows: list[ExperimentRow], destination) -> None:
    if not rows:
        raise ValueError("no rows to write")
    with open(Path(destination), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for r in rows:
            writer.writerow([
                r.topology,
                r.link_cap,
                r.trials,
                f"{r.avg_reality_paths:.6f}",
                f"{r.avg_variants:.6f}",
                f"{r.avg_runtime_seconds:.6f}",
                "true" if r.stopped_early else "false",
            ])
