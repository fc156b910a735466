# logic/protocol.py
"""
Time-stepped building blocks: link traffic accounting, per-pair Bell-pair
inventory, one prop1 QLNC round, and superdense coding.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .errors import CapacityExceeded, InvalidArgs, KindViolation, MissingLink, NoBellPair, OracleMismatch, TerminationInvalid
from .formulas import FormulaEngine, QubitId
from .network import ALL_KINDS, LinkKind, Network
from .qlnc import CodeSchedule, prop1_schedule, replay
from .tableau import Tableau
from .validate import check_traffic

QUBIT = "qubit"
BIT = "bit"
PAYLOADS = (QUBIT, BIT)
DEFAULT_LATENCY = 3


# ----------------- traffic -----------------

@dataclass(frozen=True)
class TrafficRecord:
    step: int
    link: int
    payload: str
    description: str = ""


class TrafficLog:
    """Ordered link uses; rejects a record that would exceed a link's rate."""

    def __init__(self, net: Network):
        self.net = net
        self.records: List[TrafficRecord] = []
        self._load: Counter = Counter()

    def __len__(self) -> int:
        return len(self.records)

    def load(self, step: int, link: int) -> int:
        return self._load[(step, link)]

    def spare(self, step: int, link: int) -> bool:
        return self._load[(step, link)] + 1 <= self.net.links[link].rate

    def record(self, step: int, link: int, payload: str, description: str = "") -> TrafficRecord:
        if payload not in PAYLOADS:
            raise InvalidArgs(f"Unknown payload kind {payload!r}.")
        if step < 1:
            raise InvalidArgs(f"Link uses happen at steps >= 1, got {step}.")
        if not 0 <= link < len(self.net.links):
            raise MissingLink(f"Unknown link #{link}.")
        l = self.net.links[link]
        if payload == QUBIT and l.kind != LinkKind.QUANTUM:
            raise KindViolation(f"Step {step}: qubit on classical link {l.describe()}.")
        if not self.spare(step, link):
            raise CapacityExceeded(f"Step {step}: link {l.describe()} already carries {self.load(step, link)}.")
        rec = TrafficRecord(step=step, link=link, payload=payload, description=description)
        self.records.append(rec)
        self._load[(step, link)] += 1
        return rec

    def send(
        self,
        step: int,
        src: str,
        dst: str,
        payload: str,
        kinds: Iterable[LinkKind] = ALL_KINDS,
        description: str = "",
    ) -> int:
        """Book the first src->dst link of an allowed kind with spare capacity; returns its id."""
        ks = set(kinds)
        if payload == QUBIT:
            ks &= {LinkKind.QUANTUM}
        candidates = self.net.find_links(src, dst, ks)
        if not candidates:
            raise MissingLink(f"No link {src}->{dst} can carry a {payload}.")
        for li in candidates:
            if self.spare(step, li):
                self.record(step, li, payload, description)
                return li
        raise CapacityExceeded(f"Step {step}: every link {src}->{dst} is full.")

    @property
    def last_step(self) -> int:
        return max((r.step for r in self.records), default=0)

    def violations(self) -> List[str]:
        return check_traffic(self.records, self.net)

    def usage_by_link(self) -> Dict[int, int]:
        out: Counter = Counter(r.link for r in self.records)
        return dict(sorted(out.items()))

    def max_load(self, link: int) -> int:
        return max((c for (s, li), c in self._load.items() if li == link), default=0)


# ----------------- Bell inventory -----------------

@dataclass
class BellInventory:
    counts: Dict[int, int] = field(default_factory=dict)
    high_water: int = 0

    @classmethod
    def empty(cls, k: int) -> "BellInventory":
        return cls(counts={i: 0 for i in range(1, k + 1)})

    def add(self, pair: int, n: int = 1) -> None:
        self.counts[pair] = self.counts.get(pair, 0) + n
        self.high_water = max(self.high_water, self.counts[pair])

    def take(self, pair: int) -> None:
        if self.counts.get(pair, 0) <= 0:
            raise NoBellPair(f"Pair {pair} has no shared Bell pair left.")
        self.counts[pair] -= 1

    def available(self, pair: int) -> int:
        return self.counts.get(pair, 0)

    def merge(self, delta: "BellInventory") -> None:
        for pair, n in delta.counts.items():
            if n:
                self.add(pair, n)


@dataclass
class PairLedger:
    """
    Bell-pair landings and uses keyed by step. `settle` replays them in step
    order; a pair is usable from the step after it lands.
    """
    k: int
    events: List[Tuple[int, int, int]] = field(default_factory=list)  # (step, +1 land / -1 use, pair)

    def land(self, step: int, pair: int, n: int = 1) -> None:
        self.events.extend((step, 1, pair) for _ in range(n))

    def use(self, step: int, pair: int) -> None:
        self.events.append((step, -1, pair))

    def land_round(self, step: int, delta: BellInventory) -> None:
        for pair, n in delta.counts.items():
            self.land(step, pair, n)

    def settle(self) -> BellInventory:
        inventory = BellInventory.empty(self.k)
        for step, sign, pair in sorted(self.events, key=lambda e: (e[0], e[1])):
            if sign > 0:
                inventory.add(pair)
            else:
                try:
                    inventory.take(pair)
                except NoBellPair as exc:
                    raise NoBellPair(f"Step {step}: {exc}") from exc
        return inventory


# ----------------- QLNC round -----------------

@dataclass
class RoundResult:
    delta: BellInventory
    traffic: TrafficLog
    latency: int
    pair_qubits: Dict[int, Tuple[QubitId, QubitId]]  # i -> (half at t_i, half at r_i)
    engine: FormulaEngine
    tableau: Optional[Tableau] = None


@lru_cache(maxsize=32)
def _cached_prop1_schedule(net: Network) -> CodeSchedule:
    return prop1_schedule(net)


def qlnc_round(
    net: Network,
    engine: Optional[FormulaEngine] = None,
    oracle: bool = False,
    *,
    start_step: int = 0,
    traffic: Optional[TrafficLog] = None,
    latency_constant: int = DEFAULT_LATENCY,
    log_func: Optional[Callable[[str], None]] = None,
) -> RoundResult:
    """
    One entanglement-distribution round on a prop1 network. Leaves one
    Bell pair per transmitter/receiver pair; checked symbolically, and on the
    tableau too when `oracle` is set.
    """
    schedule = _cached_prop1_schedule(net)
    engine = engine if engine is not None else FormulaEngine()
    if engine.qubits:
        raise InvalidArgs("qlnc_round needs a fresh formula engine.")
    traffic = traffic if traffic is not None else TrafficLog(net)
    tab = Tableau(schedule.qubit_count()) if oracle else None

    res = replay(net, schedule, engine, oracle=tab, traffic=traffic, start_step=start_step)
    pair_qubits = res.pair_qubits(schedule)

    report = engine.classify()
    if report.unresolved:
        raise TerminationInvalid(f"Round left unresolved qubits {list(report.unresolved)}.")
    clusters = {qs for _, qs in report.clusters}
    for i, (tq, rq) in pair_qubits.items():
        if frozenset({tq, rq}) not in clusters:
            raise TerminationInvalid(f"Pair {i} does not share a single symbol after the round.")
    if tab is not None:
        for i, (tq, rq) in pair_qubits.items():
            if not tab.is_bell(tq, rq):
                raise OracleMismatch(f"Tableau does not hold a Bell pair for pair {i}.")

    delta = BellInventory.empty(net.k)
    for i in pair_qubits:
        delta.add(i)
    if log_func:
        extra = " (oracle ok)" if tab is not None else ""
        log_func(f"✅ QLNC round at step {start_step}: {net.k} Bell pairs{extra}")
    return RoundResult(
        delta=delta,
        traffic=traffic,
        latency=latency_constant,
        pair_qubits=pair_qubits,
        engine=engine,
        tableau=tab,
    )


# ----------------- superdense coding -----------------

@dataclass(frozen=True)
class SuperdenseMessage:
    b1: int
    b0: int

    def __post_init__(self):
        if self.b1 not in (0, 1) or self.b0 not in (0, 1):
            raise InvalidArgs(f"Superdense message bits must be 0/1, got ({self.b1}, {self.b0}).")

    @classmethod
    def from_int(cls, v: int) -> "SuperdenseMessage":
        if not 0 <= v <= 3:
            raise InvalidArgs(f"Superdense message value {v} outside 0..3.")
        return cls(b1=v >> 1, b0=v & 1)

    def __int__(self) -> int:
        return 2 * self.b1 + self.b0

    def __str__(self) -> str:
        return f"{self.b1}{self.b0}"


ALL_MESSAGES = tuple(SuperdenseMessage.from_int(v) for v in range(4))


class SuperdenseCodec:
    """
    Encoding 00->I, 01->X, 10->Z, 11->X*Z on the transmitter half; decoding is
    CNOT(half_a, half_b), H(half_a), then Z-measurements giving (b1, b0).
    Without a tableau the applied Pauli frame is tracked symbolically.
    """

    def __init__(self, tableau: Optional[Tableau] = None):
        self.tableau = tableau
        self._partner: Dict[QubitId, QubitId] = {}
        self._frame: Dict[QubitId, Tuple[int, int]] = {}

    def register_pair(self, half_a: QubitId, half_b: QubitId) -> None:
        if half_a == half_b:
            raise InvalidArgs(f"A Bell pair needs two qubits, got {half_a} twice.")
        if half_a in self._partner or half_b in self._partner:
            raise InvalidArgs(f"Qubit {half_a} or {half_b} already belongs to a live pair.")
        self._partner[half_a] = half_b
        self._partner[half_b] = half_a
        self._frame[half_a] = (0, 0)

    def is_live(self, half: QubitId) -> bool:
        return half in self._partner

    def encode(self, message: SuperdenseMessage, half: QubitId) -> None:
        if half not in self._frame:
            raise NoBellPair(f"Qubit {half} is not the transmitter half of a live Bell pair.")
        x, z = message.b0, message.b1
        if self.tableau is not None:
            if x:
                self.tableau.pauli_x(half)
            if z:
                self.tableau.pauli_z(half)
        fx, fz = self._frame[half]
        self._frame[half] = (fx ^ x, fz ^ z)

    def decode(self, half_a: QubitId, half_b: QubitId) -> SuperdenseMessage:
        if self._partner.get(half_a) != half_b or half_a not in self._frame:
            raise NoBellPair(f"Qubits {half_a} and {half_b} are not a live Bell pair.")
        fx, fz = self._frame.pop(half_a)
        del self._partner[half_a]
        del self._partner[half_b]
        if self.tableau is None:
            return SuperdenseMessage(b1=fz, b0=fx)
        t = self.tableau
        t.cnot(half_a, half_b)
        t.h(half_a)
        # both outcomes are deterministic on a Bell pair
        if t.z_is_random(half_a) or t.z_is_random(half_b):
            raise NoBellPair(f"Qubits {half_a}, {half_b} were not a Bell pair when decoded.")
        m1 = t.measure_z(half_a)
        m0 = t.measure_z(half_b)
        return SuperdenseMessage(b1=m1, b0=m0)


def superdense_encode(codec: SuperdenseCodec, message: SuperdenseMessage, half: QubitId) -> None:
    codec.encode(message, half)


def superdense_decode(codec: SuperdenseCodec, half_a: QubitId, half_b: QubitId) -> SuperdenseMessage:
    return codec.decode(half_a, half_b)
