from __future__ import annotations
from collections import Counter
from typing import List

from .network import LinkKind, Network, RECEIVER, ROLES, TRANSMITTER


def validate(net: Network) -> List[str]:
    """
    Returns the list of violated network invariants (empty when the network is
    well formed): declared endpoints, unique node ids, role indices 1..k exactly
    once per role, positive rates.
    """
    violations: List[str] = []

    names = [n.name for n in net.nodes]
    for name, cnt in Counter(names).items():
        if cnt > 1:
            violations.append(f"Node {name!r} declared {cnt} times.")
    declared = set(names)

    if net.k < 1:
        violations.append(f"Pair count k={net.k} must be at least 1.")

    for n in net.nodes:
        if n.role not in ROLES:
            violations.append(f"Node {n.name!r} has unknown role {n.role!r}.")
        elif n.role in (TRANSMITTER, RECEIVER) and (n.index is None or not 1 <= n.index <= net.k):
            violations.append(f"Node {n.name!r}: {n.role} index {n.index} outside 1..{net.k}.")

    for role in (TRANSMITTER, RECEIVER):
        idx = Counter(n.index for n in net.nodes if n.role == role)
        for i, cnt in sorted(idx.items(), key=lambda kv: (kv[0] is None, kv[0] or 0)):
            if i is not None and cnt > 1:
                violations.append(f"Duplicate {role} index {i} ({cnt} nodes).")
        missing = [i for i in range(1, net.k + 1) if i not in idx]
        if missing:
            violations.append(f"Missing {role} indices: {', '.join(map(str, missing))}.")

    for i, l in enumerate(net.links):
        for end in (l.src, l.dst):
            if end not in declared:
                violations.append(f"Link #{i} {l.src}->{l.dst}: endpoint {end!r} not declared.")
        if l.rate <= 0:
            violations.append(f"Link #{i} {l.src}->{l.dst}: rate {l.rate} must be positive.")
        if l.src == l.dst:
            violations.append(f"Link #{i}: self-loop on {l.src!r}.")

    return violations


def check_traffic(records, net: Network) -> List[str]:
    """
    Global re-check of a traffic log: per (step, link) payload count <= rate,
    qubits only on quantum links. `records` are TrafficRecord-like objects.
    """
    violations: List[str] = []
    load: Counter = Counter()
    for rec in records:
        if not 0 <= rec.link < len(net.links):
            violations.append(f"Step {rec.step}: unknown link #{rec.link}.")
            continue
        link = net.links[rec.link]
        load[(rec.step, rec.link)] += 1
        if rec.payload == "qubit" and link.kind != LinkKind.QUANTUM:
            violations.append(f"Step {rec.step}: qubit sent over classical link {link.describe()}.")
    for (step, li), cnt in sorted(load.items()):
        if cnt > net.links[li].rate:
            violations.append(
                f"Step {step}: link {net.links[li].describe()} carried {cnt} > rate."
            )
    return violations
