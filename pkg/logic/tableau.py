# logic/tableau.py
"""
Stabilizer tableau (destabilizer + stabilizer rows) used as an independent
oracle for the symbolic engine.

Rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers, row 2n is scratch.
Each row is (x bits, z bits, sign bit r) for the Pauli (-1)^r * prod P_j with
P_j = X (x=1,z=0), Z (x=0,z=1), Y (x=1,z=1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from .errors import IndexOutOfRange, InvalidArgs, LengthMismatch, OracleMismatch, SelfTarget
from .utils import SeededRNG

GATES = ("H", "CNOT", "X", "Z")


@dataclass(frozen=True)
class PauliString:
    letters: str
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"Pauli sign must be +1 or -1, got {self.sign}.")
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"Unknown Pauli letters {sorted(bad)} in {self.letters!r}.")

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        s = text.strip()
        sign = 1
        if s[:1] in "+-":
            sign = -1 if s[0] == "-" else 1
            s = s[1:]
        return cls(letters=s.upper(), sign=sign)

    @classmethod
    def sparse(cls, n: int, ops: Dict[int, str], sign: int = 1) -> "PauliString":
        letters = ["I"] * n
        for q, p in ops.items():
            letters[q] = p
        return cls(letters="".join(letters), sign=sign)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return ("+" if self.sign == 1 else "-") + self.letters


def _g(x1, z1, x2, z2):
    """Exponent of i when multiplying single-qubit Paulis (vectorised)."""
    x1 = x1.astype(np.int64)
    z1 = z1.astype(np.int64)
    x2 = x2.astype(np.int64)
    z2 = z2.astype(np.int64)
    return np.where(
        (x1 == 1) & (z1 == 1), z2 - x2,
        np.where(
            (x1 == 1) & (z1 == 0), z2 * (2 * x2 - 1),
            np.where((x1 == 0) & (z1 == 1), x2 * (1 - 2 * z2), 0),
        ),
    )


class Tableau:
    def __init__(self, n: int, debug: bool = False):
        if n < 1:
            raise InvalidArgs(f"Tableau needs at least one qubit, got {n}.")
        self.n = n
        self.debug = debug
        self.x = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.z = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.r = np.zeros(2 * n + 1, dtype=np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1
        self.z[n + idx, idx] = 1

    # ----------------- helpers -----------------

    def _check(self, *qubits: int) -> None:
        for q in qubits:
            if not (0 <= int(q) < self.n):
                raise IndexOutOfRange(f"Qubit {q} outside 0..{self.n - 1}.")

    def _rowsum(self, h: int, i: int) -> None:
        total = 2 * int(self.r[h]) + 2 * int(self.r[i]) + int(
            _g(self.x[i], self.z[i], self.x[h], self.z[h]).sum()
        )
        self.r[h] = 1 if total % 4 == 2 else 0
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def _after_gate(self) -> None:
        if self.debug:
            self.check_invariants()

    def check_invariants(self) -> None:
        """Destabilizer i anticommutes only with stabilizer i; stabilizers commute."""
        n = self.n
        x, z = self.x[: 2 * n].astype(np.int64), self.z[: 2 * n].astype(np.int64)
        sym = (x @ z.T + z @ x.T) % 2
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        idx = np.arange(n)
        expected[idx, n + idx] = 1
        expected[n + idx, idx] = 1
        # destabilizers among themselves are unconstrained
        sym[:n, :n] = 0
        if not np.array_equal(sym, expected):
            raise OracleMismatch("Tableau lost its commutation structure.")

    # ----------------- gates -----------------

    def h(self, a: int) -> None:
        self._check(a)
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()
        self._after_gate()

    def cnot(self, a: int, b: int) -> None:
        self._check(a, b)
        if a == b:
            raise SelfTarget(f"CNOT control and target are both qubit {a}.")
        self.r ^= self.x[:, a] & self.z[:, b] & (self.x[:, b] ^ self.z[:, a] ^ 1)
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]
        self._after_gate()

    def pauli_x(self, a: int) -> None:
        self._check(a)
        self.r ^= self.z[:, a]
        self._after_gate()

    def pauli_z(self, a: int) -> None:
        self._check(a)
        self.r ^= self.x[:, a]
        self._after_gate()

    def apply_gate(self, gate: str, *qubits: int) -> None:
        g = gate.upper()
        if g == "H":
            self.h(*qubits)
        elif g in ("CNOT", "CX"):
            self.cnot(*qubits)
        elif g == "X":
            self.pauli_x(*qubits)
        elif g == "Z":
            self.pauli_z(*qubits)
        else:
            raise ValueError(f"Unknown gate {gate!r}; supported: {', '.join(GATES)}.")

    # ----------------- measurement -----------------

    def measure_z(self, a: int, rng: Optional[SeededRNG] = None, outcome: Optional[int] = None) -> int:
        """
        Z-basis measurement. A random outcome is taken from `outcome` when given
        (postselecting one of two equiprobable branches), else from `rng`.
        A deterministic outcome that contradicts `outcome` raises OracleMismatch.
        """
        self._check(a)
        n = self.n
        stab_hits = np.nonzero(self.x[n: 2 * n, a])[0]
        if stab_hits.size:
            p = n + int(stab_hits[0])
            for i in np.nonzero(self.x[: 2 * n, a])[0]:
                i = int(i)
                if i != p:
                    self._rowsum(i, p)
            self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, a] = 1
            if outcome is None:
                outcome = (rng or SeededRNG()).bit()
            self.r[p] = int(outcome) & 1
            self._after_gate()
            return int(self.r[p])

        s = 2 * n
        self.x[s] = 0
        self.z[s] = 0
        self.r[s] = 0
        for i in np.nonzero(self.x[:n, a])[0]:
            self._rowsum(s, int(i) + n)
        bit = int(self.r[s])
        if outcome is not None and int(outcome) != bit:
            raise OracleMismatch(f"Qubit {a} is deterministic with outcome {bit}, not {outcome}.")
        return bit

    def z_is_random(self, a: int) -> bool:
        """True when a Z-measurement of `a` would have two equiprobable outcomes."""
        self._check(a)
        return bool(self.x[self.n: 2 * self.n, a].any())

    def measure_x(self, a: int, rng: Optional[SeededRNG] = None, outcome: Optional[int] = None) -> int:
        self.h(a)
        bit = self.measure_z(a, rng=rng, outcome=outcome)
        self.h(a)
        return bit

    # ----------------- queries -----------------

    def stabilizes(self, p: PauliString) -> bool:
        if len(p) != self.n:
            raise LengthMismatch(f"Pauli string has {len(p)} letters, tableau has {self.n} qubits.")
        n = self.n
        px = np.array([c in "XY" for c in p.letters], dtype=np.uint8)
        pz = np.array([c in "ZY" for c in p.letters], dtype=np.uint8)
        stab_x, stab_z = self.x[n: 2 * n], self.z[n: 2 * n]
        anti = ((stab_x.astype(np.int64) @ pz + stab_z.astype(np.int64) @ px) % 2)
        if anti.any():
            return False
        # the stabilizers needed are those whose destabilizer anticommutes with p
        destab = ((self.x[:n].astype(np.int64) @ pz + self.z[:n].astype(np.int64) @ px) % 2)
        s = 2 * n
        self.x[s] = 0
        self.z[s] = 0
        self.r[s] = 0
        for i in np.nonzero(destab)[0]:
            self._rowsum(s, int(i) + n)
        if not (np.array_equal(self.x[s], px) and np.array_equal(self.z[s], pz)):
            return False
        sign = -1 if self.r[s] else 1
        return sign == p.sign

    def is_bell(self, q1: int, q2: int) -> bool:
        self._check(q1, q2)
        if q1 == q2:
            raise SelfTarget(f"is_bell needs two distinct qubits, got {q1} twice.")
        xx = PauliString.sparse(self.n, {q1: "X", q2: "X"})
        zz = PauliString.sparse(self.n, {q1: "Z", q2: "Z"})
        return self.stabilizes(xx) and self.stabilizes(zz)

    def stabilizer_strings(self) -> Sequence[str]:
        out = []
        n = self.n
        for row in range(n, 2 * n):
            letters = "".join(
                "IXZY"[int(self.x[row, j]) + 2 * int(self.z[row, j])] for j in range(n)
            )
            out.append(("-" if self.r[row] else "+") + letters)
        return out


def new_tableau(n: int, debug: bool = False) -> Tableau:
    return Tableau(n, debug=debug)
