from dataclasses import replace

import pytest

from logic.errors import (
    CapacityExceeded,
    InvalidArgs,
    KindViolation,
    MissingLink,
    NoBellPair,
)
from logic.formulas import FormulaEngine
from logic.network import QUANTUM_ONLY, LinkKind, build_butterfly, build_prop1
from logic.protocol import (
    ALL_MESSAGES,
    BIT,
    QUBIT,
    BellInventory,
    PairLedger,
    SuperdenseCodec,
    SuperdenseMessage,
    TrafficLog,
    qlnc_round,
    superdense_decode,
    superdense_encode,
)
from logic.qlnc import CodeSchedule, prop1_schedule, replay, reverse_path_schedule
from logic.tableau import new_tableau
from logic.utils import SeededRNG


# ----------------- QLNC round -----------------

@pytest.mark.parametrize("k", range(2, 9))
def test_round_leaves_one_cluster_per_pair(k):
    net = build_prop1(k)
    res = qlnc_round(net, FormulaEngine(rng=SeededRNG(k)))
    report = res.engine.classify()
    assert report.unresolved == ()
    assert len(report.clusters) == k
    clusters = {qs for _, qs in report.clusters}
    for i, (tq, rq) in res.pair_qubits.items():
        assert frozenset({tq, rq}) in clusters
    assert res.delta.counts == {i: 1 for i in range(1, k + 1)}


def test_round_qubit_budget_and_depth():
    for k in (2, 5):
        sched = prop1_schedule(build_prop1(k))
        assert sched.qubit_count() == k * k + 2 * k
        assert sched.depth() == 4


@pytest.mark.parametrize("k", [2, 3, 4])
def test_oracle_agrees_with_formulas_across_seeds(k):
    net = build_prop1(k)
    for seed in range(100):
        res = qlnc_round(net, FormulaEngine(rng=SeededRNG(seed)), oracle=True)
        for tq, rq in res.pair_qubits.values():
            assert res.tableau.is_bell(tq, rq)


def test_round_traffic_respects_link_rates(prop1_k3):
    res = qlnc_round(prop1_k3, start_step=10)
    assert res.traffic.violations() == []
    steps = {r.step for r in res.traffic.records}
    assert steps == {11, 12, 13, 14}
    assert res.latency == 3
    # every qubit rides a quantum link, every outcome a classical one
    for rec in res.traffic.records:
        kind = prop1_k3.links[rec.link].kind
        assert (rec.payload == QUBIT) == (kind == LinkKind.QUANTUM)


def test_round_fails_without_component_f():
    net = build_prop1(3)
    cut = replace(net, links=tuple(l for l in net.links if l.component != "f"))
    with pytest.raises(MissingLink):
        qlnc_round(cut)


def test_round_needs_fresh_engine(prop1_k3, engine):
    engine.new_plus()
    with pytest.raises(InvalidArgs):
        qlnc_round(prop1_k3, engine)


def test_round_logs(prop1_k3):
    lines = []
    qlnc_round(prop1_k3, log_func=lines.append)
    assert len(lines) == 1 and "3 Bell pairs" in lines[0]


# ----------------- traffic -----------------

def test_traffic_log_checks():
    net = build_prop1(2)
    log = TrafficLog(net)
    a = net.component_links("a")[0]
    g = net.component_links("g")[0]
    log.record(1, a, QUBIT)
    with pytest.raises(CapacityExceeded):
        log.record(1, a, BIT)
    log.record(2, a, BIT)
    with pytest.raises(KindViolation):
        log.record(1, g, QUBIT)
    with pytest.raises(InvalidArgs):
        log.record(0, a, BIT)
    with pytest.raises(InvalidArgs):
        log.record(3, a, "photon")
    with pytest.raises(MissingLink):
        log.record(3, len(net.links), BIT)
    assert log.last_step == 2
    assert log.max_load(a) == 1
    assert log.usage_by_link() == {a: 2}


def test_send_picks_a_link_with_room():
    net = build_butterfly()
    log = TrafficLog(net)
    li = log.send(1, "m1", "m2", BIT)
    assert net.links[li].component == "bottleneck"
    with pytest.raises(CapacityExceeded):
        log.send(1, "m1", "m2", BIT)
    with pytest.raises(MissingLink):
        log.send(1, "m1", "m2", QUBIT)
    with pytest.raises(MissingLink):
        log.send(1, "r1", "s1", BIT)


# ----------------- Bell inventory -----------------

def test_inventory_take_and_high_water():
    inv = BellInventory.empty(2)
    with pytest.raises(NoBellPair):
        inv.take(1)
    inv.add(1)
    inv.add(1)
    inv.take(1)
    assert inv.available(1) == 1
    assert inv.high_water == 2
    delta = BellInventory.empty(2)
    delta.add(2)
    inv.merge(delta)
    assert inv.available(2) == 1


# ----------------- superdense coding -----------------

def _bell_codec():
    t = new_tableau(2)
    t.h(0)
    t.cnot(0, 1)
    codec = SuperdenseCodec(t)
    codec.register_pair(0, 1)
    return codec


@pytest.mark.parametrize("msg", ALL_MESSAGES, ids=str)
def test_superdense_on_tableau(msg):
    codec = _bell_codec()
    superdense_encode(codec, msg, 0)
    assert superdense_decode(codec, 0, 1) == msg


@pytest.mark.parametrize("msg", ALL_MESSAGES, ids=str)
def test_superdense_symbolic(msg):
    codec = SuperdenseCodec()
    codec.register_pair(5, 6)
    codec.encode(msg, 5)
    assert codec.decode(5, 6) == msg
    assert not codec.is_live(5)


def test_no_encoding_decodes_to_00():
    codec = _bell_codec()
    assert codec.decode(0, 1) == SuperdenseMessage(0, 0)


def test_decode_consumes_the_pair():
    codec = _bell_codec()
    codec.decode(0, 1)
    with pytest.raises(NoBellPair):
        codec.decode(0, 1)
    with pytest.raises(NoBellPair):
        codec.encode(ALL_MESSAGES[1], 0)


def test_decode_of_product_state_has_no_bell_pair():
    codec = SuperdenseCodec(new_tableau(2))
    codec.register_pair(0, 1)
    with pytest.raises(NoBellPair):
        codec.decode(0, 1)
    assert not codec.is_live(0)


def test_pair_ledger_settles_in_step_order():
    ledger = PairLedger(2)
    ledger.use(5, 1)
    ledger.land(3, 1)
    ledger.land(4, 1)
    ledger.land(4, 2)
    ledger.use(6, 2)
    inv = ledger.settle()
    assert inv.available(1) == 1 and inv.available(2) == 0
    assert inv.high_water == 2


def test_pair_ledger_rejects_use_on_the_landing_step():
    ledger = PairLedger(1)
    ledger.land(4, 1)
    ledger.use(4, 1)
    with pytest.raises(NoBellPair, match="Step 4"):
        ledger.settle()


def test_message_values():
    assert [int(m) for m in ALL_MESSAGES] == [0, 1, 2, 3]
    assert str(SuperdenseMessage.from_int(2)) == "10"
    with pytest.raises(InvalidArgs):
        SuperdenseMessage.from_int(4)
    with pytest.raises(InvalidArgs):
        SuperdenseMessage(2, 0)


def test_register_pair_errors():
    codec = SuperdenseCodec()
    with pytest.raises(InvalidArgs):
        codec.register_pair(1, 1)
    codec.register_pair(1, 2)
    with pytest.raises(InvalidArgs):
        codec.register_pair(2, 3)


def test_single_pair_relay_keeps_its_pair_index():
    net = build_prop1(3)
    path = [
        net.find_links("r3", "m2", QUANTUM_ONLY)[0],
        net.find_links("m2", "m1", QUANTUM_ONLY)[0],
        net.find_links("m1", "t3", QUANTUM_ONLY)[0],
    ]
    sched = reverse_path_schedule(net, {3: path})
    assert sched.pair_indices() == (3,)
    res = replay(net, sched, FormulaEngine())
    assert list(res.pair_qubits(sched)) == [3]
    assert CodeSchedule.from_dict(sched.to_dict()) == sched
    assert prop1_schedule(net).pair_indices() == (1, 2, 3)
