"""Naive exhaustive path enumeration used as ground truth for the engine.

The oracle works on the full global fact assignment (a plain dict cloned at
every branch) and explores depth-first.  It shares no state handling with
:mod:`realitypaths.engine`, so agreement between the two is meaningful.
Keep it naive: no pruning beyond the movement semantics themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .engine import TraversalConfig, TraversalResult
from .model import Network, concrete_rules

__all__ = [
    "GlobalState",
    "OraclePath",
    "OracleSizeError",
    "PathDiff",
    "MAX_CONTAINERS",
    "MAX_FACTS",
    "enumerate_paths_bruteforce",
    "diff_results",
]

MAX_CONTAINERS = 6
MAX_FACTS = 8


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class GlobalState:
    location: str
    assignment: tuple[tuple[str, bool], ...]  # every fact, sorted by id


@dataclass(frozen=True)
class OraclePath:
    # (state, link taken to get there, rule applied on the way)
    steps: tuple[tuple[GlobalState, Optional[str], Optional[str]], ...]

    def canonical(self) -> tuple[tuple[str, Optional[str]], ...]:
        return tuple((state.location, rule) for state, _, rule in self.steps)


def _freeze(location: str, assignment: dict) -> GlobalState:
    return GlobalState(location, tuple(sorted(assignment.items())))


def enumerate_paths_bruteforce(net: Network, cfg: TraversalConfig) -> list[OraclePath]:
    if len(net.containers) > MAX_CONTAINERS or len(net.facts) > MAX_FACTS:
        raise OracleSizeError(
            f"oracle limited to {MAX_CONTAINERS} containers and {MAX_FACTS} facts; "
            f"network has {len(net.containers)} and {len(net.facts)}"
        )
    owner = {f.id: f.owner for f in net.facts}
    guards = {c.id: c.guard for c in net.containers}
    rules = concrete_rules(net)
    spans = [frozenset(owner[f] for f, _ in r.pre + r.post) for r in rules]

    neighbours: dict[str, list] = {c.id: [] for c in net.containers}
    for link in net.links:
        neighbours[link.a].append((link.id, link.b))
        if link.bidirectional:
            neighbours[link.b].append((link.id, link.a))

    found: list[OraclePath] = []

    def step(here, assignment, usage, visited, trail):
        for link_id, there in neighbours[here]:
            if usage.get(link_id, 0) >= cfg.link_cap:
                continue
            options = [(None, assignment)]
            for rule, span in zip(rules, spans):
                if not span <= {here, there}:
                    continue
                if any(assignment[f] != v for f, v in rule.pre):
                    continue
                after = dict(assignment)
                for f, v in rule.post:
                    after[f] = v
                if after != assignment:
                    options.append((rule.id, after))
            for rule_id, after in options:
                if any(after[f] != v for f, v in guards[there]):
                    continue
                state = _freeze(there, after)
                if state in visited:
                    continue
                new_usage = dict(usage)
                new_usage[link_id] = new_usage.get(link_id, 0) + 1
                new_trail = trail + [(state, link_id, rule_id)]
                if there == net.egress:
                    found.append(OraclePath(tuple(new_trail)))
                    continue
                step(there, dict(after), new_usage, visited | {state}, new_trail)

    initial = {f.id: f.initial_value for f in net.facts}
    start = _freeze(net.ingress, initial)
    step(net.ingress, initial, {}, frozenset([start]), [(start, None, None)])
    return found


@dataclass
class PathDiff:
    missing: list = field(default_factory=list)  # oracle paths the engine did not report
    extra: list = field(default_factory=list)  # engine paths the oracle does not know

    @property
    def equivalent(self) -> bool:
        return not self.missing and not self.extra

    def __str__(self):
        if self.equivalent:
            return "equivalent"
        lines = [f"missing {len(self.missing)}, extra {len(self.extra)}"]
        for label, items in (("missing", self.missing), ("extra", self.extra)):
            for steps in items:
                route = " ".join(c if r is None else f"{c}[{r}]" for c, r in steps)
                lines.append(f"  {label}: {route}")
        return "\n".join(lines)


def diff_results(engine: TraversalResult, oracle: list[OraclePath]) -> PathDiff:
    """Compare both sides as sets of ``(container, rule)`` sequences."""
    mine = {p.steps() for p in engine.attack_paths}
    truth = {p.canonical() for p in oracle}
    return PathDiff(missing=sorted(truth - mine, key=repr), extra=sorted(mine - truth, key=repr))
