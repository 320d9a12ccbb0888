"""Reality-path traversal with path-private container variants.

Every :class:`RealityPath` owns its own :class:`Variant` objects: a child path
receives clones of its parent's variants rather than references, so fact
changes along one path can never leak into another or into the base
:class:`~realitypaths.model.Network`.

The frontier is processed first-in first-out.  For the path at the head of
the queue, children are generated per outgoing link (document order): first a
plain move, then one move per applicable rule (document order).  A path that
arrives at the egress is recorded as an attack path and not expanded.
"""

from __future__ import annotations

import enum
import json
import time
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .model import Network, Rule, concrete_rules

__all__ = [
    "Variant",
    "Transition",
    "RealityPath",
    "PathStatus",
    "Termination",
    "TraversalConfig",
    "TraversalResult",
    "resolve_fact",
    "rule_applicable",
    "apply_rule",
    "generate_children",
    "traverse",
    "result_document",
]


class PathStatus(str, enum.Enum):
    ACTIVE = "active"
    TERMINATED = "terminated"
    REACHED_EGRESS = "reached_egress"


class Termination(str, enum.Enum):
    EXHAUSTED = "exhausted"
    NODE_CAP = "node_cap"
    TIME_LIMIT = "time_limit"


@dataclass(frozen=True, eq=False)
class Variant:
    """A path-private fact assignment for one container.

    Compared by identity; use :attr:`fact_values` to compare contents.
    """

    base_container: str
    fact_values: tuple[tuple[str, bool], ...]
    created_at_step: int

    @cached_property
    def values(self) -> dict[str, bool]:
        return dict(self.fact_values)


@dataclass(frozen=True)
class Transition:
    to_container: str
    via_link: Optional[str]
    applied_rule: Optional[str]
    resulting_variants: tuple[Variant, ...] = ()
    # facts whose value differs before and after this step
    changed_facts: tuple[tuple[str, bool], ...] = ()


@dataclass(frozen=True)
class TraversalConfig:
    link_cap: int = 1
    node_cap: Optional[int] = None
    time_limit: Optional[float] = None  # seconds

    def __post_init__(self):
        if not isinstance(self.link_cap, int) or self.link_cap < 1:
            raise ValueError(f"link_cap must be a positive integer, got {self.link_cap!r}")
        if self.node_cap is not None and self.node_cap < 1:
            raise ValueError(f"node_cap must be positive, got {self.node_cap!r}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit!r}")


class RealityPath:
    """One candidate route from the ingress with its own fact state."""

    __slots__ = ("path_id", "transitions", "variants", "current_view", "link_usage", "status", "_seen")

    def __init__(self, path_id: int, ingress: str):
        self.path_id = path_id
        self.transitions: list[Transition] = [Transition(ingress, None, None)]
        self.variants: dict[str, list[Variant]] = {}
        self.current_view: dict[str, Variant] = {}
        self.link_usage: dict[str, int] = {}
        self.status = PathStatus.ACTIVE
        # (container, state key) pairs already occupied on this path
        self._seen: set = {(ingress, frozenset())}

    @property
    def head(self) -> str:
        return self.transitions[-1].to_container

    def containers(self) -> list[str]:
        return [t.to_container for t in self.transitions]

    def steps(self) -> tuple[tuple[str, Optional[str]], ...]:
        """Canonical ``(container, rule)`` sequence."""
        return tuple((t.to_container, t.applied_rule) for t in self.transitions)

    def all_variants(self) -> Iterable[Variant]:
        for vs in self.variants.values():
            yield from vs

    def changed_facts(self) -> set[str]:
        return {f for t in self.transitions for f, _ in t.changed_facts}

    def __repr__(self):
        route = "->".join(self.containers())
        return f"RealityPath(#{self.path_id} {route} {self.status.value})"


@dataclass
class TraversalResult:
    attack_paths: list[RealityPath]
    total_paths_generated: int
    total_variants_created: int
    expansions: int
    runtime: float
    termination: Termination
    # every generated path, kept only when traverse(keep_paths=True)
    paths: Optional[list[RealityPath]] = field(default=None, repr=False)

    def attack_steps(self) -> list[tuple[tuple[str, Optional[str]], ...]]:
        return [p.steps() for p in self.attack_paths]


# -- fact view -------------------------------------------------------------------


def _lookup(net: Network, view: Mapping[str, Variant], fact: str) -> bool:
    owner = net.fact_map[fact].owner
    variant = view.get(owner)
    if variant is None:
        return net.fact_map[fact].initial_value
    return variant.values[fact]


def resolve_fact(path: RealityPath, net: Network, fact: str) -> bool:
    """Value of ``fact`` as seen by ``path``: latest variant, else the base value."""
    if fact not in net.fact_map:
        raise KeyError(f"unknown fact {fact!r}")
    return _lookup(net, path.current_view, fact)


def _holds(net: Network, view: Mapping[str, Variant], conditions) -> bool:
    return all(_lookup(net, view, f) == v for f, v in conditions)


def rule_applicable(path: RealityPath, net: Network, rule: Rule, current: str, adjacent: str) -> bool:
    if not net.footprint(rule) <= {current, adjacent}:
        return False
    return _holds(net, path.current_view, rule.pre)


def apply_rule(path: RealityPath, net: Network, rule: Rule) -> dict[str, Variant]:
    """Variants that become current for each container the rule writes to.

    Returned variants are either ones the path already owns (reuse) or fresh
    objects not yet attached to any path.  Containers whose assignment does
    not change are omitted.  Neither ``path`` nor ``net`` is modified.
    """
    writes: dict[str, dict[str, bool]] = {}
    for fact, value in rule.post:
        writes.setdefault(net.owner_of(fact), {})[fact] = value

    step = len(path.transitions)
    updates = {}
    for cid, assigned in writes.items():
        container = net.container_map[cid]
        before = tuple((f, _lookup(net, path.current_view, f)) for f in container.facts)
        after = tuple((f, assigned.get(f, v)) for f, v in before)
        if after == before:
            continue
        for existing in path.variants.get(cid, ()):
            if existing.fact_values == after:
                updates[cid] = existing
                break
        else:
            updates[cid] = Variant(cid, after, step)
    return updates


# -- child generation -----------------------------------------------------------------


def _state_key(net: Network, view: Mapping[str, Variant]) -> frozenset:
    # containers whose current values equal the base are omitted, so the key
    # identifies the full global assignment
    base = net.base_values
    return frozenset(
        (cid, v.fact_values)
        for cid, v in view.items()
        if tuple(x for _, x in v.fact_values) != base[cid]
    )


def _changed(net: Network, path: RealityPath, updates: Mapping[str, Variant]) -> tuple:
    changed = []
    for cid, variant in updates.items():
        for fact, value in variant.fact_values:
            if _lookup(net, path.current_view, fact) != value:
                changed.append((fact, value))
    return tuple(changed)


def _extend(parent: RealityPath, path_id: int, link: str, target: str, rule: Optional[str],
            updates: Mapping[str, Variant], changed: tuple, seen_key) -> RealityPath:
    """Build a child path holding clones of every parent variant."""
    child = RealityPath.__new__(RealityPath)
    child.path_id = path_id
    clones: dict[int, Variant] = {}
    child.variants = {}
    for cid, vs in parent.variants.items():
        copies = []
        for v in vs:
            c = replace(v)
            clones[id(v)] = c
            copies.append(c)
        child.variants[cid] = copies
    child.current_view = {cid: clones[id(v)] for cid, v in parent.current_view.items()}

    resulting = []
    for cid, v in updates.items():
        if id(v) in clones:
            v = clones[id(v)]
        else:
            child.variants.setdefault(cid, []).append(v)
        child.current_view[cid] = v
        resulting.append(v)

    child.transitions = [
        replace(t, resulting_variants=tuple(clones[id(v)] for v in t.resulting_variants))
        if t.resulting_variants else t
        for t in parent.transitions
    ]
    child.transitions.append(Transition(target, link, rule, tuple(resulting), changed))
    child.link_usage = dict(parent.link_usage)
    child.link_usage[link] = child.link_usage.get(link, 0) + 1
    child.status = PathStatus.ACTIVE
    child._seen = set(parent._seen)
    child._seen.add(seen_key)
    return child


class _Counter:
    def __init__(self, start: int = 0):
        self.value = start

    def __call__(self) -> int:
        self.value += 1
        return self.value


def generate_children(path: RealityPath, net: Network, rules: list[Rule], cfg: TraversalConfig,
                      next_id=None) -> list[RealityPath]:
    """Children of ``path``: the union of plain moves and single-rule moves.

    ``next_id`` supplies path ids; by default children are numbered from the
    parent id.
    """
    if next_id is None:
        next_id = _Counter(path.path_id)
    head = path.head
    children = []
    for link, other in net.moves_from(head):
        if path.link_usage.get(link.id, 0) >= cfg.link_cap:
            continue
        guard = net.container_map[other].guard

        candidates = [(None, {})]
        for rule in rules:
            if rule_applicable(path, net, rule, head, other):
                updates = apply_rule(path, net, rule)
                # a rule that changes nothing would duplicate the plain move
                if updates:
                    candidates.append((rule.id, updates))

        for rule_id, updates in candidates:
            view = {**path.current_view, **updates} if updates else path.current_view
            if not _holds(net, view, guard):
                continue
            key = (other, _state_key(net, view))
            if key in path._seen:
                continue
            changed = _changed(net, path, updates)
            children.append(_extend(path, next_id(), link.id, other, rule_id, updates, changed, key))
    return children


def traverse(net: Network, cfg: TraversalConfig, rules: Optional[list[Rule]] = None,
             keep_paths: bool = False) -> TraversalResult:
    """Enumerate reality paths from ingress to egress breadth-first.

    ``rules`` defaults to the network's declared rules plus instantiated
    generic rules.
    """
    if not isinstance(cfg, TraversalConfig):
        raise TypeError("cfg must be a TraversalConfig")
    if rules is None:
        rules = concrete_rules(net)
    start = time.perf_counter()
    next_id = _Counter(0)

    seed = RealityPath(next_id(), net.ingress)
    frontier = deque([seed])
    everything = [seed] if keep_paths else None
    attack_paths: list[RealityPath] = []
    generated = 1
    variants = 0
    expansions = 0
    termination = Termination.EXHAUSTED

    while frontier:
        if cfg.node_cap is not None and expansions >= cfg.node_cap:
            termination = Termination.NODE_CAP
            break
        if cfg.time_limit is not None and time.perf_counter() - start > cfg.time_limit:
            termination = Termination.TIME_LIMIT
            break
        path = frontier.popleft()
        expansions += 1
        children = generate_children(path, net, rules, cfg, next_id)
        if not children:
            path.status = PathStatus.TERMINATED
        for child in children:
            generated += 1
            # reused variants carry an earlier step index
            step = len(child.transitions) - 1
            variants += sum(1 for v in child.transitions[-1].resulting_variants if v.created_at_step == step)
            if keep_paths:
                everything.append(child)
            if child.head == net.egress:
                child.status = PathStatus.REACHED_EGRESS
                attack_paths.append(child)
            else:
                frontier.append(child)

    return TraversalResult(
        attack_paths=attack_paths,
        total_paths_generated=generated,
        total_variants_created=variants,
        expansions=expansions,
        runtime=time.perf_counter() - start,
        termination=termination,
        paths=everything,
    )


def result_document(result: TraversalResult, include_runtime: bool = True) -> dict:
    """JSON-ready export of the attack paths and summary counts."""
    paths = []
    for p in result.attack_paths:
        paths.append([
            {
                "container": t.to_container,
                "link": t.via_link,
                "rule": t.applied_rule,
                "changed_facts": [{"fact": f, "value": v} for f, v in t.changed_facts],
            }
            for t in p.transitions
        ])
    return {
        "attack_paths": paths,
        "summary": {
            "total_paths": result.total_paths_generated,
            "attack_paths": len(result.attack_paths),
            "total_variants": result.total_variants_created,
            "expansions": result.expansions,
            "runtime_seconds": round(result.runtime, 6) if include_runtime else None,
            "termination": result.termination.value,
        },
    }


def dump_result(result: TraversalResult, include_runtime: bool = True) -> str:
    return json.dumps(result_document(result, include_runtime), indent=2) + "\n"
