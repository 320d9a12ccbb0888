import json

import pytest
from hypothesis import given, settings, strategies as st

from realitypaths.model import (
    Container,
    Fact,
    GenericRule,
    Link,
    Network,
    NetworkParseError,
    NetworkValidationError,
    Rule,
    instantiate_generic_rules,
    load_network,
    serialize_network,
    validate_network,
)
from realitypaths.topology import TopologySpec, generate_topology

from .netgen import random_tiny_network

MINIMAL = {
    "containers": [
        {"id": "A", "name": "alpha", "facts": []},
        {"id": "B", "name": "beta", "facts": []},
    ],
    "links": [{"id": "ab", "a": "A", "b": "B"}],
    "rules": [],
    "generic_rules": [],
    "ingress": "A",
    "egress": "B",
}


def doc(**changes):
    d = json.loads(json.dumps(MINIMAL))
    d.update(changes)
    return json.dumps(d)


def two_containers(**kw):
    base = dict(
        containers=(Container("A", "A", ("a1",)), Container("B", "B", ("b1",))),
        facts=(Fact("a1", "a1", False, "A"), Fact("b1", "b1", False, "B")),
        links=(Link("ab", "A", "B"),),
        rules=(),
        generic_rules=(),
        ingress="A",
        egress="B",
    )
    base.update(kw)
    return Network(**base)


def test_load_minimal():
    net = load_network(doc())
    assert len(net.containers) == 2
    assert len(net.facts) == 0
    assert len(net.rules) == 0
    assert net.links[0].bidirectional


def test_dangling_link_names_container():
    bad = doc(links=[{"id": "az", "a": "A", "b": "Z"}])
    with pytest.raises(NetworkValidationError, match="'Z'"):
        load_network(bad)


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        doc(extra=1),
        json.dumps({k: v for k, v in MINIMAL.items() if k != "egress"}),
        doc(links=[{"id": "ab", "a": "A", "b": "B", "weight": 3}]),
        doc(containers=[{"id": "A", "name": "a", "facts": [{"id": "x", "name": "x", "value": 1}]},
                        {"id": "B", "name": "b", "facts": []}]),
    ],
    ids=["syntax", "unknown-top-key", "missing-key", "unknown-link-key", "int-as-bool"],
)
def test_parse_errors(text):
    with pytest.raises(NetworkParseError):
        load_network(text)


def test_ingress_equals_egress_rejected():
    with pytest.raises(NetworkValidationError, match="ingress and egress"):
        load_network(doc(egress="A"))


def test_figure_document_loads(figure_net):
    net = load_network(serialize_network(figure_net))
    assert [c.id for c in net.containers] == ["1", "2", "3", "4", "5", "6"]
    assert sorted(f.id for f in net.facts) == ["fact1", "fact2", "fact3", "fact4"]
    assert len(net.links) == 5


class TestValidate:
    def test_valid(self):
        assert validate_network(two_containers()) == []

    def test_three_container_rule(self):
        net = two_containers(
            containers=(
                Container("A", "A", ("a1",)),
                Container("B", "B", ("b1",)),
                Container("C", "C", ("c1",)),
            ),
            facts=(Fact("a1", "a1", False, "A"), Fact("b1", "b1", False, "B"), Fact("c1", "c1", False, "C")),
            rules=(Rule("wide", (("a1", True), ("b1", True)), (("c1", True),)),),
        )
        problems = validate_network(net)
        assert len(problems) == 1
        assert "'wide'" in problems[0]

    def test_duplicate_fact_ids(self):
        net = two_containers(
            containers=(Container("A", "A", ("x",)), Container("B", "B", ("y",))),
            facts=(Fact("x", "x", False, "A"), Fact("x", "x", True, "A"), Fact("y", "y", False, "B"),
                   Fact("y", "y", False, "B")),
        )
        problems = validate_network(net)
        assert problems == ["duplicate fact id 'x'", "duplicate fact id 'y'"]

    def test_self_link_and_bad_guard(self):
        net = two_containers(
            containers=(Container("A", "A", ("a1",)), Container("B", "B", ("b1",), (("nope", True),))),
            links=(Link("aa", "A", "A"), Link("ab", "A", "B")),
        )
        problems = validate_network(net)
        assert any("'aa'" in p for p in problems)
        assert any("'nope'" in p for p in problems)

    def test_repeated_fact_in_rule(self):
        net = two_containers(rules=(Rule("r", (("a1", True), ("a1", False)), (("b1", True),)),))
        assert validate_network(net) == ["rule 'r' repeats fact 'a1' in its preconditions"]

    def test_unknown_generic_label(self):
        net = two_containers(generic_rules=(GenericRule("g", (("source", "hasAdmin", True),), ()),))
        assert validate_network(net) == ["generic rule 'g' references unknown common property 'hasAdmin'"]

    def test_never_raises_on_garbage(self):
        net = Network((), (Fact("f", "f", False, "ghost"),), (Link("l", "x", "y"),),
                      (Rule("r", (("missing", True),), ()),), (), "x", "x")
        problems = validate_network(net)
        assert len(problems) >= 4


def admin_network():
    # A and B carry hasAdmin, C does not; links A-B and B-C
    facts = (
        Fact("A.adm", "adm", False, "A", "hasAdmin"),
        Fact("B.adm", "adm", False, "B", "hasAdmin"),
        Fact("C.web", "web", False, "C"),
    )
    containers = (
        Container("A", "A", ("A.adm",)),
        Container("B", "B", ("B.adm",)),
        Container("C", "C", ("C.web",)),
    )
    links = (Link("lab", "A", "B"), Link("lbc", "B", "C"))
    g = GenericRule("spread", (("source", "hasAdmin", True),), (("target", "hasAdmin", True),))
    return Network(containers, facts, links, (), (g,), "A", "C")


class TestGenericRules:
    def test_one_link_two_orientations(self):
        rules = instantiate_generic_rules(admin_network())
        assert [r.id for r in rules] == ["spread@lab:A>B", "spread@lab:B>A"]
        assert rules[0].pre == (("A.adm", True),)
        assert rules[0].post == (("B.adm", True),)
        assert rules[1].pre == (("B.adm", True),)

    def test_directed_link_one_orientation(self):
        net = admin_network()
        net = Network(net.containers, net.facts, (Link("lab", "A", "B", False), net.links[1]), (),
                      net.generic_rules, "A", "C")
        assert [r.id for r in instantiate_generic_rules(net)] == ["spread@lab:A>B"]

    def test_no_carrier(self):
        net = admin_network()
        g = GenericRule("g", (("source", "isRouter", True),), (("target", "isRouter", True),))
        net = Network(net.containers, net.facts, net.links, (), (g,), "A", "C")
        assert instantiate_generic_rules(net) == []

    def test_no_generic_rules(self):
        assert instantiate_generic_rules(two_containers()) == []

    def test_deterministic_and_local(self):
        for seed in range(40):
            net = random_tiny_network(seed, generic=True)
            first, second = instantiate_generic_rules(net), instantiate_generic_rules(net)
            assert first == second
            for rule in first:
                link = net.link_map[rule.id.split("@")[1].split(":")[0]]
                assert net.footprint(rule) <= set(link.endpoints())


class TestRoundTrip:
    def test_minimal(self):
        net = load_network(doc())
        assert load_network(serialize_network(net)) == net

    def test_figure(self, figure_net):
        assert load_network(serialize_network(figure_net)) == figure_net

    def test_ring(self):
        net = generate_topology(TopologySpec("ring", 8, 2, 6, 0.25, seed=3))
        assert load_network(serialize_network(net)) == net

    def test_generic_and_guards(self):
        net = admin_network()
        assert load_network(serialize_network(net)) == net

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6), st.booleans())
    def test_random(self, seed, generic):
        net = random_tiny_network(seed, max_containers=5, generic=generic)
        assert validate_network(net) == []
        assert load_network(serialize_network(net)) == net
