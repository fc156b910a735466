from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import FrozenSet, Iterable

from ortools.graph.python import max_flow

from .errors import InvalidPartition
from .network import ALL_KINDS, LinkKind, Network, RECEIVER, RELAY


@dataclass(frozen=True)
class Partition:
    inside: FrozenSet[str]

    @classmethod
    def of(cls, names: Iterable[str]) -> "Partition":
        return cls(frozenset(names))


def check_partition(net: Network, p: Partition) -> None:
    names = set(net.node_names())
    unknown = sorted(p.inside - names)
    if unknown:
        raise InvalidPartition(f"Partition names unknown nodes: {', '.join(unknown)}.")
    if not p.inside or p.inside == names:
        raise InvalidPartition("Partition must be a nonempty proper subset of the nodes.")


def cut_out_capacity(net: Network, p: Partition, kinds: Iterable[LinkKind] = ALL_KINDS) -> Fraction:
    """Total rate of the selected links leaving the partition; incoming links ignored."""
    check_partition(net, p)
    ks = set(kinds)
    return sum(
        (l.rate for l in net.links if l.kind in ks and l.src in p.inside and l.dst not in p.inside),
        Fraction(0),
    )


def transmitter_partition(net: Network) -> Partition:
    return Partition.of(net.transmitters())


def receiver_side_partition(net: Network) -> Partition:
    """Receivers plus every relay node."""
    return Partition.of(n.name for n in net.nodes if n.role in (RECEIVER, RELAY))


def min_cut_capacity(
    net: Network,
    sources: Iterable[str],
    sinks: Iterable[str],
    kinds: Iterable[LinkKind] = ALL_KINDS,
) -> Fraction:
    """
    Max-flow (= min-cut) from the source set to the sink set over the selected
    links. Rational rates are scaled by the lcm of their denominators so the
    solver works on integers.
    """
    src, dst = list(sources), list(sinks)
    if set(src) & set(dst):
        raise InvalidPartition("Source and sink sets overlap.")
    ks = set(kinds)
    chosen = [l for l in net.links if l.kind in ks]
    if not chosen or not src or not dst:
        return Fraction(0)
    scale = lcm(*(l.rate.denominator for l in chosen))
    index = {name: i for i, name in enumerate(net.node_names())}
    super_src, super_dst = len(index), len(index) + 1
    big = sum(int(l.rate * scale) for l in chosen) + 1

    smf = max_flow.SimpleMaxFlow()
    for l in chosen:
        smf.add_arc_with_capacity(index[l.src], index[l.dst], int(l.rate * scale))
    for s in src:
        smf.add_arc_with_capacity(super_src, index[s], big)
    for t in dst:
        smf.add_arc_with_capacity(index[t], super_dst, big)
    status = smf.solve(super_src, super_dst)
    if status != smf.OPTIMAL:
        raise RuntimeError(f"Max-flow solver returned status {status}.")
    return Fraction(smf.optimal_flow(), scale)
