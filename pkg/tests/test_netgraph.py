import pytest
from hypothesis import given, settings, strategies as st

from pspan.errors import InvalidTagging, NoEvents, NotPure
from pspan.generator import GeneratorConfig, generate_reservoir
from pspan.net import Arc, ConditionNode, EventNode, Net, labeled_isomorphic
from pspan.netgraph import (NGEdge, NGNode, NetGraph, SignedCondition, Triple, c_complexes, net_to_netgraph,
                            netgraph_from_dict, netgraph_to_dict, netgraph_to_net, parse_edge_rendering,
                            parse_node_rendering, render_edge, render_node, validate_netgraph)

from worked_examples import three_event_net


def test_three_event_taggings():
    ng = net_to_netgraph(three_event_net())
    assert [n.render() for n in ng.nodes] == [
        "v1(-c1,-c2,-c9,+c3,+c4,+c5,+c6)",
        "v2(-c8,-c9,+c6,+c10,+c11,+c12)",
        "v3(-c6,-c7,+c8,+c9,+c10)",
    ]
    assert render_edge(ng.edge("v2", "v3").tagging_from("v2")) == "((-,c8,+),(-,c9,+),(+,c6,-),(+,c10,+))"
    # reading an edge from the other end flips every triple
    assert render_edge(ng.edge("v2", "v3").tagging_from("v3")) == "((-,c6,+),(+,c8,-),(+,c9,-),(+,c10,+))"
    assert len(ng.edges) == 3 and ng.is_connected()


def test_round_trip_of_worked_example():
    net = three_event_net()
    back = netgraph_to_net(net_to_netgraph(net))
    assert labeled_isomorphic(back, net)
    assert len(back.conditions) == 12 and len(back.arcs) == 18


def test_shared_condition_forms_one_complex():
    ng = net_to_netgraph(three_event_net())
    # c9 is shared by all three events: one complex spanning the triangle
    assert c_complexes(ng, "c9") == [frozenset({("v1", "v2"), ("v1", "v3"), ("v2", "v3")})]
    assert c_complexes(ng, "c1") == []


def test_equal_labels_on_different_conditions_stay_apart():
    # two conditions labelled "a" on disjoint event pairs, joined through "b"
    net = Net("n", [ConditionNode("p", "a"), ConditionNode("q", "a"), ConditionNode("r", "b")],
              [EventNode("w", "W"), EventNode("x", "X"), EventNode("y", "Y"), EventNode("z", "Z")],
              [Arc("w", "p"), Arc("p", "x"), Arc("x", "r"), Arc("r", "y"), Arc("y", "q"), Arc("q", "z")])
    ng = net_to_netgraph(net)
    assert len(c_complexes(ng, "a")) == 2
    assert labeled_isomorphic(netgraph_to_net(ng), net)


def test_transform_errors():
    with pytest.raises(NotPure):
        net_to_netgraph(Net("n", [ConditionNode("c", "c")], [EventNode("e", "E")],
                            [Arc("c", "e"), Arc("e", "c")]))
    with pytest.raises(NoEvents):
        net_to_netgraph(Net("n", [ConditionNode("c", "c")], [], []))


def test_validation_reports_sign_conflict_and_missing_entry():
    a = NGNode("0", "A", (SignedCondition("-", "c"),))
    b = NGNode("1", "B", (SignedCondition("+", "c"),))
    c = NGNode("2", "C", ())
    good = NetGraph("g", [a, b], [NGEdge("0", "1", [Triple("-", "c", "+")])])
    assert validate_netgraph(good) == []
    conflict = NetGraph("g", [a, b, NGNode("2", "C", (SignedCondition("+", "c"),))],
                        [NGEdge("0", "1", [Triple("-", "c", "+")]), NGEdge("0", "2", [Triple("+", "c", "+")])])
    rules = {v.rule for v in validate_netgraph(conflict)}
    assert "SignConflict" in rules
    missing = NetGraph("g", [a, c], [NGEdge("0", "2", [Triple("-", "c", "+")])])
    assert "EdgeNotInNodeTagging" in {v.rule for v in validate_netgraph(missing)}
    with pytest.raises(InvalidTagging):
        netgraph_to_net(missing)


def test_rendering_parses_back():
    node = NGNode("0", "e2", (SignedCondition("-", "s8", 3, 2), SignedCondition("+", "q")))
    text = node.render()
    assert text == "e2(-s8(K3,W2),+q)"
    assert parse_node_rendering(text) == ("e2", node.tagging)
    triples = (Triple("-", "s9", "-", 3, 2, 1), Triple("+", "t", "--"))
    text = render_edge(triples)
    assert text == "((-W2,s9(K3),-W1),(+,t,--))"
    assert parse_edge_rendering(text) == triples
    assert render_node("A", ()) == "A()"
    with pytest.raises(InvalidTagging):
        parse_node_rendering("A(-b")


def test_netgraph_dict_round_trip():
    ng = net_to_netgraph(three_event_net())
    back = netgraph_from_dict(netgraph_to_dict(ng))
    assert [n.render() for n in back.nodes] == [n.render() for n in ng.nodes]
    assert [repr(e) for e in back.edges] == [repr(e) for e in ng.edges]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 1_000_000), st.integers(1, 8), st.integers(1, 6))
def test_round_trip_property(seed, events, conds):
    net = generate_reservoir(GeneratorConfig(amount=1, max_events=events, max_conds=conds, event_label_pool=3,
                                             cond_label_pool=6, seed=seed))[0]
    ng = net_to_netgraph(net)
    assert validate_netgraph(ng) == []
    assert labeled_isomorphic(netgraph_to_net(ng, net.id), net)

