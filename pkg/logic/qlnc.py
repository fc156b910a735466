# logic/qlnc.py
"""
QLNC codes as data.

A CodeSchedule is an ordered list of ScheduleOps over named qubits. `replay`
executes it on a FormulaEngine (optionally mirrored gate-for-gate on a Tableau)
and books every link use in a TrafficLog. The protocol engine runs the
prop1 schedule through it; the decomposition validator replays c3
codes through it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Collection, Dict, List, Optional, Sequence, Tuple

from .errors import FormulaMismatch, InvalidArgs, KindViolation, MissingLink, TerminationInvalid
from .formulas import FormulaEngine, QubitId
from .network import CLASSICAL_ONLY, LinkKind, Network, QUANTUM_ONLY
from .tableau import Tableau

PLUS, ZERO, CNOT, SEND, TERMINATE = "plus", "zero", "cnot", "send", "terminate"
OPS = (PLUS, ZERO, CNOT, SEND, TERMINATE)
LOCAL = -1  # bit link id for a correction on the measuring node itself


@dataclass(frozen=True)
class ScheduleOp:
    op: str
    qubit: str                          # created / target / sent / terminated qubit label
    node: str = ""                      # creation node (plus, zero)
    control: str = ""                   # cnot control label
    link: int = LOCAL                   # link used by a send
    corrections: Tuple[str, ...] = ()   # Z-correction targets of a terminate
    bit_links: Tuple[int, ...] = ()     # link carrying the outcome to each correction
    step: int = 0                       # time offset of the link use

    def to_dict(self) -> dict:
        d = {"op": self.op, "qubit": self.qubit}
        if self.node:
            d["node"] = self.node
        if self.control:
            d["control"] = self.control
        if self.op == SEND:
            d["link"] = self.link
        if self.op == TERMINATE:
            d["corrections"] = list(self.corrections)
            d["bit_links"] = list(self.bit_links)
        if self.step:
            d["step"] = self.step
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScheduleOp":
        op = str(d["op"])
        if op not in OPS:
            raise ValueError(f"Unknown schedule op {op!r}.")
        return cls(
            op=op,
            qubit=str(d["qubit"]),
            node=str(d.get("node", "")),
            control=str(d.get("control", "")),
            link=int(d.get("link", LOCAL)),
            corrections=tuple(str(c) for c in d.get("corrections", ())),
            bit_links=tuple(int(b) for b in d.get("bit_links", ())),
            step=int(d.get("step", 0)),
        )


@dataclass(frozen=True)
class CodeSchedule:
    ops: Tuple[ScheduleOp, ...]
    # (label ending at t_i, label ending at r_i), one entry per pair
    pairs: Tuple[Tuple[str, str], ...]
    name: str = ""
    # pair index of each entry of `pairs`; empty means 1..len(pairs)
    indices: Tuple[int, ...] = ()

    def pair_indices(self) -> Tuple[int, ...]:
        return self.indices or tuple(range(1, len(self.pairs) + 1))

    def qubit_count(self) -> int:
        return sum(1 for o in self.ops if o.op in (PLUS, ZERO))

    def depth(self) -> int:
        return max((o.step for o in self.ops), default=0)

    def links_used(self) -> Dict[int, int]:
        """link id -> number of payload units one replay puts on it."""
        uses: Dict[int, int] = {}
        for o in self.ops:
            if o.op == SEND:
                uses[o.link] = uses.get(o.link, 0) + 1
            elif o.op == TERMINATE:
                for li in set(o.bit_links):
                    if li != LOCAL:
                        uses[li] = uses.get(li, 0) + 1
        return uses

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "ops": [o.to_dict() for o in self.ops],
            "pairs": [list(p) for p in self.pairs],
        }
        if self.indices:
            d["indices"] = list(self.indices)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CodeSchedule":
        pairs = tuple((str(a), str(b)) for a, b in d.get("pairs", ()))
        indices = tuple(int(i) for i in d.get("indices", ()))
        if indices and len(indices) != len(pairs):
            raise ValueError(f"{len(indices)} pair indices for {len(pairs)} pairs.")
        return cls(
            ops=tuple(ScheduleOp.from_dict(o) for o in d.get("ops", ())),
            pairs=pairs,
            name=str(d.get("name", "")),
            indices=indices,
        )


@dataclass
class ReplayResult:
    qubits: Dict[str, QubitId] = field(default_factory=dict)
    location: Dict[str, str] = field(default_factory=dict)
    bits: Dict[str, int] = field(default_factory=dict)

    def pair_qubits(self, schedule: CodeSchedule) -> Dict[int, Tuple[QubitId, QubitId]]:
        return {
            i: (self.qubits[t_lbl], self.qubits[r_lbl])
            for i, (t_lbl, r_lbl) in zip(schedule.pair_indices(), schedule.pairs)
        }


# ----------------- link lookup -----------------

def _link(net: Network, src: str, dst: str, kinds) -> int:
    found = net.find_links(src, dst, kinds)
    if not found:
        kind = "/".join(sorted(k.value for k in kinds))
        raise MissingLink(f"No {kind} link {src}->{dst} in {net.name or 'network'}.")
    return found[0]


# ----------------- schedules -----------------

def prop1_schedule(net: Network) -> CodeSchedule:
    """
    Steps i-vi on a prop1 network: receivers build GHZ states and fan
    them out over (b)/(c); m2 sums and terminates over (f); m1 fans the sum out
    over (e); transmitters decode with CNOTs and terminate over (g).
    Step offsets: (b),(c) -> 1; (d),(f) -> 2; (e) -> 3; (g) -> 4.
    """
    k = net.k
    T = {i: net.transmitter(i) for i in range(1, k + 1)}
    R = {i: net.receiver(i) for i in range(1, k + 1)}
    Q, C = QUANTUM_ONLY, CLASSICAL_ONLY
    ops: List[ScheduleOp] = []

    root = {i: f"a{i}@{R[i]}" for i in T}
    to_t = {(i, j): f"a{i}>{T[j]}" for i in T for j in T if j != i}
    to_m2 = {i: f"a{i}>m2" for i in T}

    # i. GHZ at each receiver, one copy per outgoing link
    for i in T:
        ops.append(ScheduleOp(PLUS, root[i], node=R[i]))
        for j in T:
            if j != i:
                ops.append(ScheduleOp(ZERO, to_t[i, j], node=R[i]))
                ops.append(ScheduleOp(CNOT, to_t[i, j], control=root[i]))
        ops.append(ScheduleOp(ZERO, to_m2[i], node=R[i]))
        ops.append(ScheduleOp(CNOT, to_m2[i], control=root[i]))
    for i in T:
        for j in T:
            if j != i:
                ops.append(ScheduleOp(SEND, to_t[i, j], link=_link(net, R[i], T[j], Q), step=1))
        ops.append(ScheduleOp(SEND, to_m2[i], link=_link(net, R[i], "m2", Q), step=1))

    # ii. m2 accumulates the sum of all symbols
    total = "sum@m2"
    ops.append(ScheduleOp(ZERO, total, node="m2"))
    for i in T:
        ops.append(ScheduleOp(CNOT, total, control=to_m2[i]))

    # iii. terminate the single symbols at m2; the kept copy at r_i is corrected
    for i in T:
        ops.append(ScheduleOp(
            TERMINATE, to_m2[i], corrections=(root[i],),
            bit_links=(_link(net, "m2", R[i], C),), step=2,
        ))
    ops.append(ScheduleOp(SEND, total, link=_link(net, "m2", "m1", Q), step=2))

    # iv. m1 copies the sum once per transmitter
    sums = {1: total}
    for i in T:
        if i != 1:
            sums[i] = f"sum>{T[i]}"
            ops.append(ScheduleOp(ZERO, sums[i], node="m1"))
            ops.append(ScheduleOp(CNOT, sums[i], control=total))
    for i in T:
        ops.append(ScheduleOp(SEND, sums[i], link=_link(net, "m1", T[i], Q), step=3))

    # v. at t_j every single-symbol qubit is added into the sum, leaving a_j
    for j in T:
        for i in T:
            if i != j:
                ops.append(ScheduleOp(CNOT, sums[j], control=to_t[i, j]))

    # vi. t_i terminates its a_j copies; t_j holds the matching a_j
    for i in T:
        for j in T:
            if j != i:
                ops.append(ScheduleOp(
                    TERMINATE, to_t[j, i], corrections=(sums[j],),
                    bit_links=(_link(net, T[i], T[j], C),), step=4,
                ))

    pairs = tuple((sums[i], root[i]) for i in T)
    return CodeSchedule(ops=tuple(ops), pairs=pairs, name=f"prop1-k{k}")


def reverse_path_schedule(net: Network, paths: Dict[int, Sequence[int]]) -> CodeSchedule:
    """
    Plain Bell-pair relay: r_i prepares a Bell pair and forwards one half hop by
    hop along `paths[i]` (link ids from r_i to t_i). Pairs without a path are
    skipped.
    """
    ops: List[ScheduleOp] = []
    pairs: List[Tuple[str, str]] = []
    for i in sorted(paths):
        r, t = net.receiver(i), net.transmitter(i)
        keep, half = f"b{i}@{r}", f"b{i}>{t}"
        ops.append(ScheduleOp(PLUS, keep, node=r))
        ops.append(ScheduleOp(ZERO, half, node=r))
        ops.append(ScheduleOp(CNOT, half, control=keep))
        for hop, li in enumerate(paths[i], start=1):
            ops.append(ScheduleOp(SEND, half, link=int(li), step=hop))
        pairs.append((half, keep))
    return CodeSchedule(ops=tuple(ops), pairs=tuple(pairs), name="reverse-paths", indices=tuple(sorted(paths)))


# ----------------- replay -----------------

def replay(
    net: Network,
    schedule: CodeSchedule,
    engine: FormulaEngine,
    *,
    oracle: Optional[Tableau] = None,
    traffic=None,
    start_step: int = 0,
    qubit_links: Optional[Collection[int]] = None,
    bit_links: Optional[Collection[int]] = None,
) -> ReplayResult:
    """
    Execute `schedule`. Engine qubit ids double as oracle qubit indices, so both
    must be fresh. `qubit_links` / `bit_links` restrict which links sends and
    correction bits may use (None = any link of a suitable kind).
    """
    res = ReplayResult()

    def qid(label: str) -> QubitId:
        if label not in res.qubits:
            raise InvalidArgs(f"Schedule refers to unknown qubit {label!r}.")
        return res.qubits[label]

    for o in schedule.ops:
        if o.op in (PLUS, ZERO):
            if o.qubit in res.qubits:
                raise InvalidArgs(f"Qubit label {o.qubit!r} created twice.")
            if o.op == PLUS:
                q, _ = engine.new_plus(tag=o.qubit)
                if oracle is not None:
                    oracle.h(q)
            else:
                q = engine.new_zero(tag=o.qubit)
            res.qubits[o.qubit] = q
            res.location[o.qubit] = o.node

        elif o.op == CNOT:
            c, t = qid(o.control), qid(o.qubit)
            if res.location[o.control] != res.location[o.qubit]:
                raise InvalidArgs(
                    f"CNOT {o.control}@{res.location[o.control]} -> {o.qubit}@{res.location[o.qubit]} "
                    "is not an intra-node operation."
                )
            engine.apply_cnot(c, t)
            if oracle is not None:
                oracle.cnot(c, t)

        elif o.op == SEND:
            q = qid(o.qubit)
            if not 0 <= o.link < len(net.links):
                raise MissingLink(f"Send of {o.qubit} names unknown link #{o.link}.")
            link = net.links[o.link]
            if link.src != res.location[o.qubit]:
                raise MissingLink(f"Link {link.describe()} does not leave {res.location[o.qubit]} (qubit {o.qubit}).")
            if link.kind != LinkKind.QUANTUM:
                raise KindViolation(f"Qubit {o.qubit} routed over classical link {link.describe()}.")
            if qubit_links is not None and o.link not in qubit_links:
                raise MissingLink(f"Link {link.describe()} is outside the allowed qubit links.")
            if not engine.is_active(q):
                raise InvalidArgs(f"Qubit {o.qubit} was terminated before being sent.")
            if traffic is not None:
                traffic.record(start_step + o.step, o.link, "qubit", f"{o.qubit}")
            res.location[o.qubit] = link.dst

        elif o.op == TERMINATE:
            victim = qid(o.qubit)
            corr = [qid(c) for c in o.corrections]
            if len(o.bit_links) != len(o.corrections):
                raise InvalidArgs(f"Termination of {o.qubit}: one bit link per correction required.")
            here = res.location[o.qubit]
            booked = set()
            for c_lbl, li in zip(o.corrections, o.bit_links):
                there = res.location[c_lbl]
                if li == LOCAL:
                    if there != here:
                        raise MissingLink(f"Correction {c_lbl}@{there} is remote but no link was given.")
                    continue
                if not 0 <= li < len(net.links):
                    raise MissingLink(f"Termination of {o.qubit} names unknown link #{li}.")
                link = net.links[li]
                if link.src != here or link.dst != there:
                    raise MissingLink(
                        f"Outcome of {o.qubit}@{here} cannot reach {c_lbl}@{there} over {link.describe()}."
                    )
                if bit_links is not None and li not in bit_links:
                    raise MissingLink(f"Link {link.describe()} is outside the allowed correction links.")
                if traffic is not None and li not in booked:
                    traffic.record(start_step + o.step, li, "bit", f"outcome of {o.qubit}")
                    booked.add(li)
            try:
                bit = engine.terminate(victim, corr)
            except FormulaMismatch as exc:
                raise TerminationInvalid(f"Termination of {o.qubit} is invalid: {exc}") from exc
            if oracle is not None:
                oracle.measure_x(victim, outcome=bit)
                if bit:
                    for q in corr:
                        oracle.pauli_z(q)
            res.bits[o.qubit] = bit

        else:
            raise InvalidArgs(f"Unknown schedule op {o.op!r}.")

    return res
