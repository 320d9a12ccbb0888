"""Static Blackboard Architecture network: containers, facts, links, rules.

A :class:`Network` is the immutable base model that every traversal reads
from.  Facts are binary, owned by exactly one container, and optionally
tagged with a common-property label so that generic rules can bind to them.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional

__all__ = [
    "Fact",
    "Container",
    "Link",
    "Rule",
    "GenericRule",
    "Network",
    "NetworkError",
    "NetworkParseError",
    "NetworkValidationError",
    "load_network",
    "serialize_network",
    "validate_network",
    "instantiate_generic_rules",
    "concrete_rules",
]

ROLES = ("source", "target")

# (fact id, value) pairs for concrete rules and guards
Condition = tuple[str, bool]
# (role, common-property label, value) triples for generic rules
RoleCondition = tuple[str, str, bool]


class NetworkError(ValueError):
    """Base class for network loading problems."""


class NetworkParseError(NetworkError):
    """The document is not well-formed JSON or violates the file layout."""


class NetworkValidationError(NetworkError):
    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Fact:
    id: str
    name: str
    initial_value: bool
    owner: str
    common_property: Optional[str] = None


@dataclass(frozen=True)
class Container:
    id: str
    name: str
    facts: tuple[str, ...] = ()
    # conjunction of (fact, required value) that must hold to occupy this container
    guard: tuple[Condition, ...] = ()


@dataclass(frozen=True)
class Link:
    id: str
    a: str
    b: str
    bidirectional: bool = True

    def endpoints(self) -> tuple[str, str]:
        return (self.a, self.b)


@dataclass(frozen=True)
class Rule:
    """A concrete rule ``R = (pre, post)`` over fact ids."""

    id: str
    pre: tuple[Condition, ...] = ()
    post: tuple[Condition, ...] = ()

    def facts(self) -> Iterator[str]:
        for fact, _ in self.pre:
            yield fact
        for fact, _ in self.post:
            yield fact


@dataclass(frozen=True)
class GenericRule:
    id: str
    pre: tuple[RoleCondition, ...] = ()
    post: tuple[RoleCondition, ...] = ()

    def labels(self) -> Iterator[tuple[str, str]]:
        for role, label, _ in self.pre + self.post:
            yield role, label


@dataclass(frozen=True)
class Network:
    """Immutable network model.

    Collections are tuples in document order; order drives traversal
    determinism.  Lookup tables are built lazily and tolerate invalid
    networks so that :func:`validate_network` can inspect anything.
    """

    containers: tuple[Container, ...]
    facts: tuple[Fact, ...]
    links: tuple[Link, ...]
    rules: tuple[Rule, ...]
    generic_rules: tuple[GenericRule, ...]
    ingress: str
    egress: str
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @cached_property
    def container_map(self) -> dict[str, Container]:
        return {c.id: c for c in self.containers}

    @cached_property
    def fact_map(self) -> dict[str, Fact]:
        return {f.id: f for f in self.facts}

    @cached_property
    def link_map(self) -> dict[str, Link]:
        return {link.id: link for link in self.links}

    @cached_property
    def rule_map(self) -> dict[str, Rule]:
        return {r.id: r for r in self.rules}

    @cached_property
    def common_properties(self) -> frozenset[str]:
        """Labels carried by at least one fact."""
        return frozenset(f.common_property for f in self.facts if f.common_property)

    @cached_property
    def base_values(self) -> dict[str, tuple[bool, ...]]:
        """Initial fact values per container, aligned with ``Container.facts``."""
        fm = self.fact_map
        return {
            c.id: tuple(fm[f].initial_value for f in c.facts if f in fm)
            for c in self.containers
        }

    def moves_from(self, container: str) -> list[tuple[Link, str]]:
        """Links leaving ``container`` in document order, with the far endpoint."""
        key = ("moves", container)
        if key not in self._cache:
            moves = []
            for link in self.links:
                if link.a == container:
                    moves.append((link, link.b))
                elif link.b == container and link.bidirectional:
                    moves.append((link, link.a))
            self._cache[key] = moves
        return self._cache[key]

    def owner_of(self, fact: str) -> str:
        return self.fact_map[fact].owner

    def footprint(self, rule: Rule) -> frozenset[str]:
        """Containers owning any fact the rule reads or writes."""
        fm = self.fact_map
        return frozenset(fm[f].owner for f in rule.facts() if f in fm)


def _duplicates(ids: Iterable[str]) -> list[str]:
    return [i for i, n in Counter(ids).items() if n > 1]


def validate_network(net: Network) -> list[str]:
    """Return a list of human-readable invariant violations (empty if valid)."""
    problems: list[str] = []
    containers = net.container_map
    facts = net.fact_map

    for kind, items in (
        ("container", net.containers),
        ("fact", net.facts),
        ("link", net.links),
        ("rule", net.rules),
        ("generic rule", net.generic_rules),
    ):
        for dup in _duplicates(item.id for item in items):
            problems.append(f"duplicate {kind} id {dup!r}")

    for fact in net.facts:
        if fact.owner not in containers:
            problems.append(f"fact {fact.id!r} owned by unknown container {fact.owner!r}")
    listed = Counter()
    for c in net.containers:
        for fid in c.facts:
            listed[fid] += 1
            if fid not in facts:
                problems.append(f"container {c.id!r} lists unknown fact {fid!r}")
            elif facts[fid].owner != c.id:
                problems.append(f"container {c.id!r} lists fact {fid!r} owned by {facts[fid].owner!r}")
        for fid, _ in c.guard:
            if fid not in facts:
                problems.append(f"guard of container {c.id!r} references unknown fact {fid!r}")
        labels = [facts[f].common_property for f in c.facts if f in facts and facts[f].common_property]
        for dup in _duplicates(labels):
            problems.append(f"container {c.id!r} carries common property {dup!r} more than once")
    for fact in net.facts:
        if fact.owner in containers and listed[fact.id] == 0:
            problems.append(f"fact {fact.id!r} not listed by its owner {fact.owner!r}")

    for link in net.links:
        for end in (link.a, link.b):
            if end not in containers:
                problems.append(f"link {link.id!r} references unknown container {end!r}")
        if link.a == link.b:
            problems.append(f"link {link.id!r} connects container {link.a!r} to itself")

    for rule in net.rules:
        for part, conds in (("precondition", rule.pre), ("postcondition", rule.post)):
            for fid, _ in conds:
                if fid not in facts:
                    problems.append(f"rule {rule.id!r} {part} references unknown fact {fid!r}")
            for dup in _duplicates(fid for fid, _ in conds):
                problems.append(f"rule {rule.id!r} repeats fact {dup!r} in its {part}s")
        span = net.footprint(rule)
        if len(span) > 2:
            problems.append(
                f"rule {rule.id!r} spans {len(span)} containers ({', '.join(sorted(span))}); at most 2 allowed"
            )

    for grule in net.generic_rules:
        for role, label in grule.labels():
            if role not in ROLES:
                problems.append(f"generic rule {grule.id!r} uses unknown role {role!r}")
            if label not in net.common_properties:
                problems.append(f"generic rule {grule.id!r} references unknown common property {label!r}")

    for end, name in ((net.ingress, "ingress"), (net.egress, "egress")):
        if end not in containers:
            problems.append(f"{name} references unknown container {end!r}")
    if net.ingress == net.egress:
        problems.append(f"ingress and egress are both {net.ingress!r}")
    return problems


def instantiate_generic_rules(net: Network) -> list[Rule]:
    """Bind every generic rule to each link orientation whose endpoints carry
    the labels it needs.

    Orientation ``a>b`` puts the link's ``a`` endpoint in the *source* role;
    bidirectional links are also tried as ``b>a``.  Rule ids are
    ``"<generic>@<link>:<source>><target>"``.
    """
    fm = net.fact_map
    by_label: dict[str, dict[str, str]] = {}
    for c in net.containers:
        props = {}
        for fid in c.facts:
            fact = fm.get(fid)
            if fact is not None and fact.common_property:
                props.setdefault(fact.common_property, fid)
        by_label[c.id] = props

    out: list[Rule] = []
    for grule in net.generic_rules:
        for link in net.links:
            orientations = [(link.a, link.b)]
            if link.bidirectional:
                orientations.append((link.b, link.a))
            for source, target in orientations:
                bound = {"source": by_label.get(source, {}), "target": by_label.get(target, {})}
                if not all(label in bound.get(role, {}) for role, label in grule.labels()):
                    continue
                pre = tuple((bound[role][label], value) for role, label, value in grule.pre)
                post = tuple((bound[role][label], value) for role, label, value in grule.post)
                out.append(Rule(f"{grule.id}@{link.id}:{source}>{target}", pre, post))
    return out


def concrete_rules(net: Network) -> list[Rule]:
    """Declared rules followed by instantiated generic rules."""
    return list(net.rules) + instantiate_generic_rules(net)


# -- file format ---------------------------------------------------------------

_TOP_KEYS = {"containers", "links", "rules", "generic_rules", "ingress", "egress"}


def _check_keys(obj, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise NetworkParseError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - required - optional
    if unknown:
        raise NetworkParseError(f"{where}: unknown key(s) {', '.join(sorted(unknown))}")
    missing = required - set(obj)
    if missing:
        raise NetworkParseError(f"{where}: missing key(s) {', '.join(sorted(missing))}")


def _typed(value, kind, where: str):
    # bool is an int subclass; keep the two apart
    if kind is str and not isinstance(value, str):
        raise NetworkParseError(f"{where}: expected a string")
    if kind is bool and not isinstance(value, bool):
        raise NetworkParseError(f"{where}: expected true/false")
    if kind is list and not isinstance(value, list):
        raise NetworkParseError(f"{where}: expected an array")
    return value


def _conditions(items, where: str) -> tuple[Condition, ...]:
    out = []
    for i, item in enumerate(_typed(items, list, where)):
        w = f"{where}[{i}]"
        _check_keys(item, {"fact", "value"}, set(), w)
        out.append((_typed(item["fact"], str, w + ".fact"), _typed(item["value"], bool, w + ".value")))
    return tuple(out)


def _role_conditions(items, where: str) -> tuple[RoleCondition, ...]:
    out = []
    for i, item in enumerate(_typed(items, list, where)):
        w = f"{where}[{i}]"
        _check_keys(item, {"role", "property", "value"}, set(), w)
        out.append(
            (
                _typed(item["role"], str, w + ".role"),
                _typed(item["property"], str, w + ".property"),
                _typed(item["value"], bool, w + ".value"),
            )
        )
    return tuple(out)


def load_network(document: str) -> Network:
    """Parse and validate a network JSON document.

    Raises :class:`NetworkParseError` for malformed input and
    :class:`NetworkValidationError` when cross-references do not resolve.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise NetworkParseError(f"invalid JSON: {exc}") from exc
    _check_keys(doc, _TOP_KEYS, set(), "document")

    containers, facts = [], []
    for i, c in enumerate(_typed(doc["containers"], list, "containers")):
        w = f"containers[{i}]"
        _check_keys(c, {"id", "name", "facts"}, {"guard"}, w)
        cid = _typed(c["id"], str, w + ".id")
        fact_ids = []
        for j, f in enumerate(_typed(c["facts"], list, w + ".facts")):
            fw = f"{w}.facts[{j}]"
            _check_keys(f, {"id", "name", "value"}, {"common_property"}, fw)
            prop = f.get("common_property")
            if prop is not None:
                _typed(prop, str, fw + ".common_property")
            facts.append(
                Fact(
                    id=_typed(f["id"], str, fw + ".id"),
                    name=_typed(f["name"], str, fw + ".name"),
                    initial_value=_typed(f["value"], bool, fw + ".value"),
                    owner=cid,
                    common_property=prop,
                )
            )
            fact_ids.append(f["id"])
        containers.append(
            Container(
                id=cid,
                name=_typed(c["name"], str, w + ".name"),
                facts=tuple(fact_ids),
                guard=_conditions(c.get("guard", []), w + ".guard"),
            )
        )

    links = []
    for i, link in enumerate(_typed(doc["links"], list, "links")):
        w = f"links[{i}]"
        _check_keys(link, {"id", "a", "b"}, {"bidirectional"}, w)
        links.append(
            Link(
                id=_typed(link["id"], str, w + ".id"),
                a=_typed(link["a"], str, w + ".a"),
                b=_typed(link["b"], str, w + ".b"),
                bidirectional=_typed(link.get("bidirectional", True), bool, w + ".bidirectional"),
            )
        )

    rules = []
    for i, r in enumerate(_typed(doc["rules"], list, "rules")):
        w = f"rules[{i}]"
        _check_keys(r, {"id", "pre", "post"}, set(), w)
        rules.append(Rule(_typed(r["id"], str, w + ".id"), _conditions(r["pre"], w + ".pre"), _conditions(r["post"], w + ".post")))

    generic = []
    for i, g in enumerate(_typed(doc["generic_rules"], list, "generic_rules")):
        w = f"generic_rules[{i}]"
        _check_keys(g, {"id", "pre", "post"}, set(), w)
        generic.append(
            GenericRule(_typed(g["id"], str, w + ".id"), _role_conditions(g["pre"], w + ".pre"), _role_conditions(g["post"], w + ".post"))
        )

    net = Network(
        containers=tuple(containers),
        facts=tuple(facts),
        links=tuple(links),
        rules=tuple(rules),
        generic_rules=tuple(generic),
        ingress=_typed(doc["ingress"], str, "ingress"),
        egress=_typed(doc["egress"], str, "egress"),
    )
    problems = validate_network(net)
    if problems:
        raise NetworkValidationError(problems)
    return net


def to_document(net: Network) -> dict:
    fm = net.fact_map
    containers = []
    for c in net.containers:
        facts = []
        for fid in c.facts:
            f = fm[fid]
            entry = {"id": f.id, "name": f.name, "value": f.initial_value}
            if f.common_property is not None:
                entry["common_property"] = f.common_property
            facts.append(entry)
        entry = {"id": c.id, "name": c.name, "facts": facts}
        if c.guard:
            entry["guard"] = [{"fact": f, "value": v} for f, v in c.guard]
        containers.append(entry)
    return {
        "containers": containers,
        "links": [{"id": l.id, "a": l.a, "b": l.b, "bidirectional": l.bidirectional} for l in net.links],
        "rules": [
            {
                "id": r.id,
                "pre": [{"fact": f, "value": v} for f, v in r.pre],
                "post": [{"fact": f, "value": v} for f, v in r.post],
            }
            for r in net.rules
        ],
        "generic_rules": [
            {
                "id": g.id,
                "pre": [{"role": r, "property": p, "value": v} for r, p, v in g.pre],
                "post": [{"role": r, "property": p, "value": v} for r, p, v in g.post],
            }
            for g in net.generic_rules
        ],
        "ingress": net.ingress,
        "egress": net.egress,
    }


def serialize_network(net: Network) -> str:
    return json.dumps(to_document(net), indent=2) + "\n"
