# logic/network.py
"""
Mixed classical/quantum directed multigraphs, the named topologies, unit-edge
normalisation and the JSON network description format.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import FileError, InvalidK
from .utils import _fmt_rate, _node_sort_key, _norm_node, _parse_rate

TRANSMITTER = "transmitter"
RECEIVER = "receiver"
RELAY = "relay"
ROLES = (TRANSMITTER, RECEIVER, RELAY)


class LinkKind(str, Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"


QUANTUM_ONLY = frozenset({LinkKind.QUANTUM})
CLASSICAL_ONLY = frozenset({LinkKind.CLASSICAL})
ALL_KINDS = frozenset(LinkKind)


@dataclass(frozen=True)
class Node:
    name: str
    role: str = RELAY
    index: Optional[int] = None  # pair index for transmitters / receivers

    def label(self) -> str:
        if self.role == RELAY:
            return f"relay({self.name})"
        return f"{self.role}({self.index})"


@dataclass(frozen=True)
class Link:
    src: str
    dst: str
    kind: LinkKind
    rate: Fraction = Fraction(1)
    component: str = ""  # construction tag, e.g. "a".."g" on the prop1 network

    def describe(self) -> str:
        tag = f" [{self.component}]" if self.component else ""
        return f"{self.src}->{self.dst} {self.kind.value} @{_fmt_rate(self.rate)}{tag}"


@dataclass(frozen=True)
class Network:
    nodes: Tuple[Node, ...]
    links: Tuple[Link, ...]
    k: int
    name: str = ""

    # ----------------- lookups -----------------

    def node_names(self) -> List[str]:
        return [n.name for n in self.nodes]

    def node(self, name: str) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(f"Unknown node {name!r}.")

    def transmitter(self, i: int) -> str:
        return self._by_role(TRANSMITTER, i)

    def receiver(self, i: int) -> str:
        return self._by_role(RECEIVER, i)

    def _by_role(self, role: str, i: int) -> str:
        for n in self.nodes:
            if n.role == role and n.index == i:
                return n.name
        raise KeyError(f"No {role} with index {i}.")

    def transmitters(self) -> List[str]:
        return [self.transmitter(i) for i in range(1, self.k + 1)]

    def receivers(self) -> List[str]:
        return [self.receiver(i) for i in range(1, self.k + 1)]

    def pairs(self) -> List[Tuple[str, str]]:
        return list(zip(self.transmitters(), self.receivers()))

    def links_from(self, src: str, kinds: Iterable[LinkKind] = ALL_KINDS) -> List[Tuple[int, Link]]:
        ks = set(kinds)
        return [(i, l) for i, l in enumerate(self.links) if l.src == src and l.kind in ks]

    def find_links(self, src: str, dst: str, kinds: Iterable[LinkKind] = ALL_KINDS) -> List[int]:
        ks = set(kinds)
        return [i for i, l in enumerate(self.links) if l.src == src and l.dst == dst and l.kind in ks]

    def component_links(self, component: str) -> List[int]:
        return [i for i, l in enumerate(self.links) if l.component == component]

    def count(self, kind: LinkKind) -> int:
        return sum(1 for l in self.links if l.kind == kind)


# ----------------- builders -----------------

def _pair_nodes(k: int, t_prefix: str = "t", r_prefix: str = "r") -> List[Node]:
    nodes = [Node(f"{t_prefix}{i}", TRANSMITTER, i) for i in range(1, k + 1)]
    nodes += [Node(f"{r_prefix}{i}", RECEIVER, i) for i in range(1, k + 1)]
    return nodes


def build_two_node_loop() -> Network:
    nodes = (Node("A", TRANSMITTER, 1), Node("B", RECEIVER, 1))
    links = (
        Link("A", "B", LinkKind.QUANTUM, component="forward"),
        Link("B", "A", LinkKind.QUANTUM, component="backward"),
    )
    return Network(nodes=nodes, links=links, k=1, name="two-node-loop")


def build_butterfly() -> Network:
    """
    Two sources s1, s2 (top corners), XOR node m1, fanout node m2, sinks r1, r2.
    Stream B_i's sink is diagonally opposite its source, so s1 reaches r2's corner
    directly and s2 reaches r1's corner directly; each sink recovers its own
    stream from the side link plus the coded bottleneck m1->m2.
    """
    nodes = (
        Node("s1", TRANSMITTER, 1), Node("s2", TRANSMITTER, 2),
        Node("m1"), Node("m2"),
        Node("r1", RECEIVER, 1), Node("r2", RECEIVER, 2),
    )
    c = LinkKind.CLASSICAL
    links = (
        Link("s1", "m1", c, component="in"),
        Link("s2", "m1", c, component="in"),
        Link("m1", "m2", c, component="bottleneck"),
        Link("m2", "r1", c, component="out"),
        Link("m2", "r2", c, component="out"),
        Link("s1", "r2", c, component="side"),
        Link("s2", "r1", c, component="side"),
    )
    return Network(nodes=nodes, links=links, k=2, name="butterfly")


def build_prop1(k: int) -> Network:
    """The 2k+2 node network with components (a)-(g), all links of unit rate."""
    if k < 2:
        raise InvalidK(f"The prop1 network needs k >= 2, got {k}.")
    nodes = _pair_nodes(k) + [Node("m1"), Node("m2")]
    q, c = LinkKind.QUANTUM, LinkKind.CLASSICAL
    rng = range(1, k + 1)
    links: List[Link] = []
    links += [Link(f"t{i}", f"r{i}", q, component="a") for i in rng]
    links += [Link(f"r{i}", f"t{j}", q, component="b") for i in rng for j in rng if j != i]
    links += [Link(f"r{i}", "m2", q, component="c") for i in rng]
    links += [Link("m2", "m1", q, component="d")]
    links += [Link("m1", f"t{i}", q, component="e") for i in rng]
    links += [Link("m2", f"r{i}", c, component="f") for i in rng]
    links += [Link(f"t{i}", f"t{j}", c, component="g") for i in rng for j in rng if j != i]
    return Network(nodes=tuple(nodes), links=tuple(links), k=k, name=f"prop1-k{k}")


# ----------------- normalisation -----------------

def normalize_unit_edges(net: Network) -> Network:
    """Split every link into parallel links of rate <= 1 with the same total rate."""
    out: List[Link] = []
    for l in net.links:
        whole = int(l.rate // 1)
        rest = l.rate - whole
        out += [replace(l, rate=Fraction(1)) for _ in range(whole)]
        if rest > 0:
            out.append(replace(l, rate=rest))
    return replace(net, links=tuple(out))


def total_rates(net: Network) -> Dict[Tuple[str, str, LinkKind], Fraction]:
    acc: Dict[Tuple[str, str, LinkKind], Fraction] = {}
    for l in net.links:
        key = (l.src, l.dst, l.kind)
        acc[key] = acc.get(key, Fraction(0)) + l.rate
    return acc


# ----------------- JSON description -----------------

def network_to_dict(net: Network) -> dict:
    return {
        "name": net.name,
        "k": net.k,
        "nodes": [
            {"id": n.name, "role": n.role, **({"index": n.index} if n.index is not None else {})}
            for n in net.nodes
        ],
        "links": [
            {
                "src": l.src,
                "dst": l.dst,
                "kind": l.kind.value,
                "rate": _fmt_rate(l.rate),
                **({"component": l.component} if l.component else {}),
            }
            for l in net.links
        ],
    }


def network_from_dict(data: dict) -> Network:
    try:
        nodes = tuple(
            Node(
                name=_norm_node(n["id"]),
                role=str(n.get("role", RELAY)).strip().lower(),
                index=(int(n["index"]) if n.get("index") is not None else None),
            )
            for n in data["nodes"]
        )
        links = tuple(
            Link(
                src=_norm_node(l["src"]),
                dst=_norm_node(l["dst"]),
                kind=LinkKind(str(l["kind"]).strip().lower()),
                rate=_parse_rate(l.get("rate", "1/1")),
                component=str(l.get("component", "")),
            )
            for l in data["links"]
        )
        k = int(data.get("k", sum(1 for n in nodes if n.role == TRANSMITTER)))
    except (KeyError, TypeError, ValueError) as exc:
        raise FileError(f"Malformed network description: {exc}") from exc
    return Network(nodes=nodes, links=links, k=k, name=str(data.get("name", "")))


def network_to_json(net: Network) -> str:
    return json.dumps(network_to_dict(net), indent=2, ensure_ascii=False) + "\n"


def network_from_json(text: str) -> Network:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileError(f"Network description is not valid JSON: {exc}") from exc
    return network_from_dict(data)


def save_network(net: Network, path) -> None:
    try:
        Path(path).write_text(network_to_json(net), encoding="utf-8")
    except OSError as exc:
        raise FileError(f"Could not write network file {path}: {exc}") from exc


def load_network(path) -> Network:
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise FileError(f"Could not read network file {path}: {exc}") from exc
    return network_from_json(text)


def sorted_node_names(net: Network) -> List[str]:
    return sorted(net.node_names(), key=_node_sort_key)
