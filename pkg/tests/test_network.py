from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from logic.capacity import Partition, cut_out_capacity, receiver_side_partition, transmitter_partition
from logic.errors import FileError, InvalidK
from logic.network import (
    CLASSICAL_ONLY,
    QUANTUM_ONLY,
    Link,
    LinkKind,
    Network,
    Node,
    RECEIVER,
    RELAY,
    TRANSMITTER,
    build_butterfly,
    build_prop1,
    load_network,
    network_from_json,
    network_to_json,
    normalize_unit_edges,
    save_network,
    total_rates,
)
from logic.validate import validate


def test_two_node_loop(loop):
    assert loop.count(LinkKind.QUANTUM) == 2
    assert loop.count(LinkKind.CLASSICAL) == 0
    assert loop.transmitter(1) == "A" and loop.receiver(1) == "B"
    assert cut_out_capacity(loop, Partition.of({"A"}), QUANTUM_ONLY) == 1
    assert cut_out_capacity(loop, Partition.of({"B"}), QUANTUM_ONLY) == 1
    assert validate(loop) == []


def test_butterfly_shape():
    net = build_butterfly()
    assert len(net.nodes) == 6
    assert net.count(LinkKind.CLASSICAL) == 7
    assert net.count(LinkKind.QUANTUM) == 0
    assert validate(net) == []
    # cutting {s1, s2, m1} from the rest crosses the bottleneck plus the two side links
    assert cut_out_capacity(net, Partition.of({"s1", "s2", "m1"})) == 3
    assert cut_out_capacity(net, Partition.of({"s1", "s2", "m1", "r1", "r2"})) == 1


@pytest.mark.parametrize("k", [2, 3, 5])
def test_prop1_component_sizes(k):
    net = build_prop1(k)
    sizes = {c: len(net.component_links(c)) for c in "abcdefg"}
    assert sizes == {"a": k, "b": k * (k - 1), "c": k, "d": 1, "e": k, "f": k, "g": k * (k - 1)}
    assert all(l.rate == 1 for l in net.links)


def test_prop1_k3_counts():
    net = build_prop1(3)
    assert net.count(LinkKind.QUANTUM) == 16
    assert net.count(LinkKind.CLASSICAL) == 9
    assert len(net.nodes) == 8


def test_prop1_rejects_small_k():
    with pytest.raises(InvalidK):
        build_prop1(1)


@pytest.mark.parametrize("k", range(2, 17))
def test_prop1_validates_and_cut_bound(k):
    net = build_prop1(k)
    assert validate(net) == []
    tx = transmitter_partition(net)
    assert cut_out_capacity(net, tx, QUANTUM_ONLY) == k
    assert cut_out_capacity(net, tx, CLASSICAL_ONLY) == 0


@pytest.mark.parametrize("k", [2, 3, 6])
def test_prop1_receiver_side_cut(k):
    net = build_prop1(k)
    rx = receiver_side_partition(net)
    assert rx == Partition.of([*net.receivers(), "m1", "m2"])
    # (b) plus (e) leave the receiver side
    assert cut_out_capacity(net, rx, QUANTUM_ONLY) == k * (k - 1) + k
    tx = Partition.of(net.transmitters())
    assert min(cut_out_capacity(net, tx, QUANTUM_ONLY), cut_out_capacity(net, rx, QUANTUM_ONLY)) == k


def test_invalid_partitions(loop):
    from logic.errors import InvalidPartition

    with pytest.raises(InvalidPartition):
        cut_out_capacity(loop, Partition.of({"A", "B"}))
    with pytest.raises(InvalidPartition):
        cut_out_capacity(loop, Partition.of(set()))
    with pytest.raises(InvalidPartition):
        cut_out_capacity(loop, Partition.of({"Z"}))


def test_normalize_unit_edges():
    net = Network(
        nodes=(Node("A", TRANSMITTER, 1), Node("B", RECEIVER, 1)),
        links=(
            Link("A", "B", LinkKind.QUANTUM, Fraction(2)),
            Link("B", "A", LinkKind.QUANTUM, Fraction(1)),
            Link("A", "B", LinkKind.CLASSICAL, Fraction(3, 2)),
        ),
        k=1,
    )
    out = normalize_unit_edges(net)
    rates = sorted((l.kind.value, l.rate) for l in out.links)
    assert rates == [
        ("classical", Fraction(1, 2)), ("classical", Fraction(1)),
        ("quantum", Fraction(1)), ("quantum", Fraction(1)), ("quantum", Fraction(1)),
    ]
    assert total_rates(out) == total_rates(net)


def test_validate_reports_single_problems():
    net = build_prop1(4)
    extra = replace(net, nodes=net.nodes + (Node("t1b", TRANSMITTER, 1),))
    assert len(validate(extra)) == 1
    dangling = replace(net, links=net.links + (Link("t1", "zz", LinkKind.QUANTUM),))
    assert len(validate(dangling)) == 1
    bad_rate = replace(net, links=net.links + (Link("t1", "r1", LinkKind.QUANTUM, Fraction(0)),))
    assert len(validate(bad_rate)) == 1


def test_json_round_trip(tmp_path, prop1_k3):
    path = tmp_path / "net.json"
    save_network(prop1_k3, path)
    again = load_network(path)
    assert again == prop1_k3
    assert network_to_json(again) == path.read_text(encoding="utf-8")


def test_json_errors(tmp_path):
    with pytest.raises(FileError):
        network_from_json("{not json")
    with pytest.raises(FileError):
        network_from_json('{"nodes": [{"role": "relay"}], "links": []}')
    with pytest.raises(FileError):
        load_network(tmp_path / "missing.json")


# ----------------- properties -----------------

@st.composite
def small_networks(draw):
    n = draw(st.integers(2, 6))
    names = [f"n{i}" for i in range(n)]
    nodes = [Node("n0", TRANSMITTER, 1), Node("n1", RECEIVER, 1)] + [Node(x, RELAY) for x in names[2:]]
    edges = draw(st.lists(
        st.tuples(
            st.sampled_from(names), st.sampled_from(names), st.sampled_from(list(LinkKind)),
            st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=4),
        ).filter(lambda e: e[0] != e[1]),
        min_size=1, max_size=12,
    ))
    links = tuple(Link(s, d, kind, Fraction(r)) for s, d, kind, r in edges)
    return Network(nodes=tuple(nodes), links=links, k=1)


@settings(max_examples=80)
@given(small_networks(), st.data())
def test_normalize_preserves_every_cut(net, data):
    names = net.node_names()
    inside = data.draw(st.sets(st.sampled_from(names), min_size=1, max_size=len(names) - 1))
    p = Partition.of(inside)
    out = normalize_unit_edges(net)
    assert all(l.rate <= 1 for l in out.links)
    for kinds in (QUANTUM_ONLY, CLASSICAL_ONLY, frozenset(LinkKind)):
        assert cut_out_capacity(out, p, kinds) == cut_out_capacity(net, p, kinds)
