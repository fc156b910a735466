# logic/formulas.py
"""
Symbolic qubit-formula engine.

Every qubit carries a formula: a GF(2) sum of symbols, stored as a frozenset of
symbol ids. A CNOT replaces the target formula by the symmetric difference of the
two formulas, so mod-2 cancellation is structural. Terminating a qubit
(X-basis measurement + classically controlled Z) is only allowed when the
correction qubits' formulas sum to the victim's formula.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import FormulaMismatch, SelfTarget, TerminatedQubit, UnknownQubit
from .utils import SeededRNG

SymbolId = int
QubitId = int
QubitFormula = FrozenSet[SymbolId]

ACTIVE = "active"
TERMINATED = "terminated"


@dataclass
class QubitRecord:
    qid: QubitId
    formula: QubitFormula
    status: str = ACTIVE
    tag: str = ""


@dataclass(frozen=True)
class ZRecord:
    """One logged Pauli-Z; `cause` is the terminated victim, or None for a direct call."""
    qubit: QubitId
    cause: Optional[QubitId] = None


@dataclass(frozen=True)
class ClusterReport:
    clusters: Tuple[Tuple[SymbolId, FrozenSet[QubitId]], ...]
    unresolved: Tuple[QubitId, ...]

    def cluster_of(self, symbol: SymbolId) -> FrozenSet[QubitId]:
        for s, qs in self.clusters:
            if s == symbol:
                return qs
        return frozenset()


def formula_str(formula: Iterable[SymbolId]) -> str:
    syms = sorted(formula)
    return " + ".join(f"a{s}" for s in syms) if syms else "0"


def gf2_sum(formulas: Iterable[QubitFormula]) -> QubitFormula:
    acc: FrozenSet[SymbolId] = frozenset()
    for f in formulas:
        acc = acc ^ f
    return acc


def gf2_in_span(target: QubitFormula, formulas: Iterable[QubitFormula]) -> bool:
    """Whether `target` is a GF(2) sum of some of `formulas` (elimination on lowest symbols)."""
    basis: Dict[SymbolId, QubitFormula] = {}

    def reduce(f: QubitFormula) -> QubitFormula:
        while f:
            pivot = min(f)
            if pivot not in basis:
                return f
            f = f ^ basis[pivot]
        return f

    for f in formulas:
        r = reduce(frozenset(f))
        if r:
            basis[min(r)] = r
    return not reduce(frozenset(target))


@dataclass
class FormulaEngine:
    """Single-owner state machine over qubit formulas."""

    rng: SeededRNG = field(default_factory=SeededRNG)
    log_func: Optional[Callable[[str], None]] = None
    qubits: Dict[QubitId, QubitRecord] = field(default_factory=dict)
    z_log: List[ZRecord] = field(default_factory=list)
    _next_symbol: int = field(default=0, init=False)
    _next_qubit: int = field(default=0, init=False)

    # ----------------- creation -----------------

    def _new_qubit(self, formula: QubitFormula, tag: str) -> QubitId:
        qid = self._next_qubit
        self._next_qubit += 1
        self.qubits[qid] = QubitRecord(qid=qid, formula=formula, tag=tag)
        return qid

    def new_plus(self, tag: str = "") -> Tuple[QubitId, SymbolId]:
        sym = self._next_symbol
        self._next_symbol += 1
        return self._new_qubit(frozenset({sym}), tag), sym

    def new_zero(self, tag: str = "") -> QubitId:
        return self._new_qubit(frozenset(), tag)

    # ----------------- queries -----------------

    def _active(self, qid: QubitId) -> QubitRecord:
        rec = self.qubits.get(qid)
        if rec is None:
            raise UnknownQubit(f"Qubit {qid} does not exist.")
        if rec.status != ACTIVE:
            raise TerminatedQubit(f"Qubit {qid} ({rec.tag or 'untagged'}) is already terminated.")
        return rec

    def formula(self, qid: QubitId) -> QubitFormula:
        rec = self.qubits.get(qid)
        if rec is None:
            raise UnknownQubit(f"Qubit {qid} does not exist.")
        return rec.formula

    def is_active(self, qid: QubitId) -> bool:
        rec = self.qubits.get(qid)
        return rec is not None and rec.status == ACTIVE

    def active_qubits(self) -> List[QubitId]:
        return [q for q, r in self.qubits.items() if r.status == ACTIVE]

    @property
    def symbols_issued(self) -> int:
        return self._next_symbol

    # ----------------- gates -----------------

    def apply_cnot(self, control: QubitId, target: QubitId) -> None:
        if control == target:
            raise SelfTarget(f"CNOT control and target are both qubit {control}.")
        c = self._active(control)
        t = self._active(target)
        t.formula = t.formula ^ c.formula

    def apply_pauli_z(self, target: QubitId, cause: Optional[QubitId] = None) -> None:
        self._active(target)
        self.z_log.append(ZRecord(qubit=target, cause=cause))

    def terminate(self, victim: QubitId, corrections: Iterable[QubitId]) -> int:
        """X-measure `victim`; on outcome 1 the Z corrections are logged. Returns the bit."""
        v = self._active(victim)
        corr = list(dict.fromkeys(corrections))
        for q in corr:
            if q == victim:
                raise SelfTarget(f"Qubit {victim} cannot correct its own termination.")
            self._active(q)
        total = gf2_sum(self.qubits[q].formula for q in corr)
        if total != v.formula:
            raise FormulaMismatch(
                f"Corrections sum to {formula_str(total)} but qubit {victim} "
                f"carries {formula_str(v.formula)}."
            )
        bit = self.rng.bit()
        v.status = TERMINATED
        if bit:
            for q in corr:
                self.apply_pauli_z(q, cause=victim)
        if self.log_func:
            self.log_func(f"✂️ terminated q{victim} [{formula_str(v.formula)}] -> bit {bit}")
        return bit

    # ----------------- result -----------------

    def classify(self) -> ClusterReport:
        by_symbol: Dict[SymbolId, List[QubitId]] = {}
        unresolved: List[QubitId] = []
        for qid in sorted(self.active_qubits()):
            f = self.qubits[qid].formula
            if len(f) == 1:
                by_symbol.setdefault(next(iter(f)), []).append(qid)
            else:
                # empty formulas are unentangled |0>, also not part of any cluster
                unresolved.append(qid)
        clusters = tuple((s, frozenset(qs)) for s, qs in sorted(by_symbol.items()))
        return ClusterReport(clusters=clusters, unresolved=tuple(unresolved))
