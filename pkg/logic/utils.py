from __future__ import annotations
import random
import re
from fractions import Fraction
from typing import List, Sequence

RATE_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def _parse_rate(v) -> Fraction:
    """Parse a rate given as Fraction, int or a "p/q" / "p" string."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    m = RATE_RE.match(str(v))
    if not m:
        raise ValueError(f"Invalid rate {v!r}: expected 'p/q'.")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"Invalid rate {v!r}: zero denominator.")
    return Fraction(int(m.group(1)), den)


def _fmt_rate(r: Fraction) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def _norm_node(x) -> str:
    return str(x).strip()


def _node_sort_key(name: str):
    # natural order: t2 before t10, prefix first
    s = _norm_node(name)
    m = re.search(r"\d+", s)
    return (s[: m.start()] if m else s, int(m.group()) if m else -1, s)


def _clean_opt(v) -> str:
    if v is None:
        return ""
    s = str(v).strip()
    return "" if s.lower() in {"", "nan", "none", "null"} else s


# ----------------- bit streams -----------------

def bits_from_str(s: str) -> List[int]:
    s = _clean_opt(s)
    if any(c not in "01" for c in s):
        raise ValueError(f"Bit stream {s!r} may contain only 0 and 1.")
    return [int(c) for c in s]


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)


# ----------------- seeded randomness -----------------

class SeededRNG:
    """Wrapper around random.Random for deterministic simulation."""

    def __init__(self, seed: int = 0):
        self._rng = random.Random(int(seed))

    def bit(self) -> int:
        return self._rng.getrandbits(1)

    def bits(self, n: int) -> List[int]:
        return [self._rng.getrandbits(1) for _ in range(n)]