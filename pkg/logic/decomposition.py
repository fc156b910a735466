# logic/decomposition.py

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .capacity import min_cut_capacity
from .errors import FileError, MissingLink, NotValidated, QnetError
from .formulas import FormulaEngine, gf2_in_span, gf2_sum
from .network import ALL_KINDS, CLASSICAL_ONLY, LinkKind, Network, QUANTUM_ONLY
from .qlnc import SEND, TERMINATE, CodeSchedule, prop1_schedule, replay, reverse_path_schedule
from .utils import _fmt_rate, _node_sort_key, _parse_rate

COMPONENTS = ("c1", "c2", "c3", "c4")

# -----------------------------------------------------------------------------
# Data classes
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class ComponentEdge:
    link: int
    rate: Fraction


@dataclass(frozen=True)
class CodedSend:
    """
    One bit per code use on `link`: the XOR of the streams in `sources` (pairs
    whose transmitter is the link's tail) and of earlier sends in `inputs`
    (links arriving at the tail).
    """
    link: int
    sources: Tuple[int, ...] = ()
    inputs: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"link": self.link, "sources": list(self.sources), "inputs": list(self.inputs)}

    @classmethod
    def from_dict(cls, d: dict) -> "CodedSend":
        return cls(
            link=int(d["link"]),
            sources=tuple(int(s) for s in d.get("sources", ())),
            inputs=tuple(int(i) for i in d.get("inputs", ())),
        )


@dataclass(frozen=True)
class LinearCode:
    """Classical binary linear network code for c1; sends are listed in firing order."""
    sends: Tuple[CodedSend, ...]

    def to_dict(self) -> dict:
        return {"sends": [s.to_dict() for s in self.sends]}

    @classmethod
    def from_dict(cls, d: dict) -> "LinearCode":
        return cls(sends=tuple(CodedSend.from_dict(s) for s in d.get("sends", ())))


@dataclass
class Decomposition:
    """
    c1: classical part at uniform rate w_tilde, either routing paths per pair
        (`c1_paths`) or a linear network code (`c1_code`).
    c2: edge-disjoint forward quantum paths, one per pair, at uniform rate w.
    c3/c4: the replenishment code (`code`) and the links its terminations use.
    A link may appear in several components as split sub-edges.
    """
    c1: List[ComponentEdge] = field(default_factory=list)
    c2: List[ComponentEdge] = field(default_factory=list)
    c3: List[ComponentEdge] = field(default_factory=list)
    c4: List[ComponentEdge] = field(default_factory=list)
    w_tilde: Fraction = Fraction(0)
    w: Fraction = Fraction(0)
    c1_paths: Dict[int, List[int]] = field(default_factory=dict)
    c2_paths: Dict[int, List[int]] = field(default_factory=dict)
    code: Optional[CodeSchedule] = None
    c1_code: Optional[LinearCode] = None
    label: str = ""
    validated: bool = False

    def component(self, name: str) -> List[ComponentEdge]:
        return getattr(self, name)

    def is_empty(self) -> bool:
        return not any(self.component(c) for c in COMPONENTS)


@dataclass(frozen=True)
class RateSummary:
    w_tilde: Fraction
    w: Fraction
    achieved: Fraction


# -----------------------------------------------------------------------------
# Validation
# -----------------------------------------------------------------------------
def _check_path(net: Network, path: Sequence[int], src: str, dst: str, kinds) -> Optional[str]:
    if not path:
        return f"empty path {src}->{dst}"
    at = src
    for li in path:
        if not 0 <= li < len(net.links):
            return f"unknown link #{li}"
        l = net.links[li]
        if l.src != at:
            return f"link {l.describe()} does not continue from {at}"
        if l.kind not in kinds:
            return f"link {l.describe()} is {l.kind.value}"
        at = l.dst
    if at != dst:
        return f"path ends at {at}, not {dst}"
    return None


def _path_edges(paths: Dict[int, List[int]], rate: Fraction) -> Counter:
    c: Counter = Counter()
    for p in paths.values():
        for li in p:
            c[li] += rate
    return c


def _edge_totals(edges: Iterable[ComponentEdge]) -> Counter:
    c: Counter = Counter()
    for e in edges:
        c[e.link] += e.rate
    return c


def _check_code(net: Network, d: Decomposition) -> List[str]:
    """Replay the replenishment code inside c3/c4 and check the Bell pairs it leaves."""
    out: List[str] = []
    code = d.code
    c3_links = {e.link for e in d.c3}
    c4_links = {e.link for e in d.c4}
    engine = FormulaEngine()
    try:
        res = replay(net, code, engine, qubit_links=c3_links, bit_links=c3_links | c4_links)
    except QnetError as exc:
        return [f"c3 code does not replay: {exc}"]

    indices = code.pair_indices()
    if sorted(indices) != list(range(1, net.k + 1)):
        out.append(f"c3 code yields Bell pairs for {sorted(indices)}, one per pair 1..{net.k} needed.")
    report = engine.classify()
    clusters = {qs for _, qs in report.clusters}
    for i, (a_lbl, b_lbl) in zip(indices, code.pairs):
        if not 1 <= i <= net.k:
            continue
        ends = {res.location.get(a_lbl), res.location.get(b_lbl)}
        # information may flow either way along a pair
        if ends != {net.transmitter(i), net.receiver(i)}:
            out.append(f"c3 Bell pair {i} ends at {sorted(e or '?' for e in ends)}, not at pair {i}'s nodes.")
        elif frozenset({res.qubits[a_lbl], res.qubits[b_lbl]}) not in clusters:
            out.append(f"c3 code leaves pair {i} without a shared symbol.")

    # one replay per unit of w must fit into the c3 + c4 sub-edges
    room = _edge_totals(d.c3) + _edge_totals(d.c4)
    for li, uses in sorted(code.links_used().items()):
        if uses * d.w > room.get(li, 0):
            out.append(
                f"c3 code uses {net.links[li].describe()} {uses}x at w={_fmt_rate(d.w)}, "
                f"component rate is {_fmt_rate(room.get(li, 0))}."
            )
    return out


def _check_linear_code(net: Network, d: Decomposition) -> List[str]:
    """Propagate stream symbols through the c1 code; every receiver must decode its own stream."""
    out: List[str] = []
    content: Dict[int, frozenset] = {}
    for s in d.c1_code.sends:
        if not 0 <= s.link < len(net.links):
            out.append(f"c1 code sends on unknown link #{s.link}.")
            continue
        link = net.links[s.link]
        if s.link in content:
            out.append(f"c1 code sends twice on {link.describe()}.")
            continue
        parts = []
        for i in s.sources:
            if not 1 <= i <= net.k or net.transmitter(i) != link.src:
                out.append(f"c1 code: stream {i} is not available at {link.src}.")
            else:
                parts.append(frozenset({i}))
        for li in s.inputs:
            if li not in content or net.links[li].dst != link.src:
                out.append(f"c1 code: link #{li} does not deliver to {link.src} before {link.describe()}.")
            else:
                parts.append(content[li])
        content[s.link] = gf2_sum(parts)

    for i in range(1, net.k + 1):
        r = net.receiver(i)
        arriving = [f for li, f in content.items() if net.links[li].dst == r]
        if not gf2_in_span(frozenset({i}), arriving):
            out.append(f"c1 code: {r} cannot decode stream {i}.")

    expected = Counter({li: d.w_tilde for li in content})
    if _edge_totals(d.c1) != expected:
        out.append("c1 edges do not match the code's links at uniform rate w_tilde.")
    return out


def _check_c1(net: Network, d: Decomposition, pair_ids: Set[int]) -> List[str]:
    out: List[str] = []
    if d.w_tilde <= 0:
        out.append("c1 is nonempty but w_tilde is not positive.")
    if d.c1_code is not None:
        if d.c1_paths:
            out.append("c1 carries both routing paths and a linear code.")
        return out + _check_linear_code(net, d)
    if set(d.c1_paths) != pair_ids:
        out.append(f"c1 routes pairs {sorted(d.c1_paths)}, expected {sorted(pair_ids)}.")
    for i, p in sorted(d.c1_paths.items()):
        if i in pair_ids:
            err = _check_path(net, p, net.transmitter(i), net.receiver(i), ALL_KINDS)
            if err:
                out.append(f"c1 path for pair {i}: {err}.")
    if _edge_totals(d.c1) != _path_edges(d.c1_paths, d.w_tilde):
        out.append("c1 edges do not match its paths at uniform rate w_tilde.")
    return out


def _shared_c2_links(net: Network, paths: Dict[int, List[int]]) -> List[str]:
    out: List[str] = []
    owner: Dict[int, int] = {}
    for i, p in sorted(paths.items()):
        for li in p:
            if not 0 <= li < len(net.links):
                continue
            if li in owner:
                out.append(f"c2 paths for pairs {owner[li]} and {i} share {net.links[li].describe()}.")
            else:
                owner[li] = i
    return out


def validate_decomposition(net: Network, d: Decomposition) -> List[str]:
    """
    Returns violation strings (empty = valid) and records the verdict on
    `d.validated`. Components may share a link only up to its rate.
    """
    violations: List[str] = []
    pair_ids = set(range(1, net.k + 1))

    for name in COMPONENTS:
        for e in d.component(name):
            if not 0 <= e.link < len(net.links):
                violations.append(f"{name}: unknown link #{e.link}.")
            elif e.rate <= 0:
                violations.append(f"{name}: link {net.links[e.link].describe()} has rate {_fmt_rate(e.rate)}.")
    if violations:
        d.validated = False
        return violations

    # edge-disjointness up to split sub-edges
    total: Counter = Counter()
    for name in COMPONENTS:
        total += _edge_totals(d.component(name))
    for li, r in sorted(total.items()):
        if r > net.links[li].rate:
            violations.append(
                f"Link {net.links[li].describe()} oversubscribed: components use {_fmt_rate(r)}."
            )

    # c1: routing paths or a linear code at w_tilde
    if d.c1 or d.w_tilde or d.c1_code is not None:
        violations += _check_c1(net, d, pair_ids)

    # c2: exactly one forward quantum path per pair at w, no link shared
    if d.c2 or d.w:
        if d.w <= 0:
            violations.append("c2 is nonempty but w is not positive.")
        if set(d.c2_paths) != pair_ids:
            violations.append(f"c2 has paths for pairs {sorted(d.c2_paths)}, expected one per pair {sorted(pair_ids)}.")
        for i, p in sorted(d.c2_paths.items()):
            if i in pair_ids:
                err = _check_path(net, p, net.transmitter(i), net.receiver(i), QUANTUM_ONLY)
                if err:
                    violations.append(f"c2 path for pair {i}: {err}.")
        violations += _shared_c2_links(net, d.c2_paths)
        for e in d.c2:
            if net.links[e.link].kind != LinkKind.QUANTUM:
                violations.append(f"c2 uses classical link {net.links[e.link].describe()}.")
        if _edge_totals(d.c2) != _path_edges(d.c2_paths, d.w):
            violations.append("c2 edges do not match its paths at uniform rate w.")
        if d.code is None:
            violations.append("c2 is nonempty but no c3 replenishment code is given.")
        else:
            violations += _check_code(net, d)
    elif d.c3 or d.c4:
        violations.append("c3/c4 are nonempty but c2 carries no superdense paths.")

    d.validated = not violations
    return violations


def achieved_rate(d: Decomposition) -> RateSummary:
    if not d.validated:
        raise NotValidated("Decomposition must pass validate_decomposition first.")
    return RateSummary(w_tilde=d.w_tilde, w=d.w, achieved=d.w_tilde + 2 * d.w)


# -----------------------------------------------------------------------------
# Path search (lexicographic tie-breaking by node id)
# -----------------------------------------------------------------------------
def _bfs_path(net: Network, src: str, dst: str, usable: Callable[[int], bool]) -> Optional[List[int]]:
    prev: Dict[str, Tuple[str, int]] = {}
    seen = {src}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            break
        nxt = sorted(
            ((l.dst, i) for i, l in net.links_from(u) if usable(i)),
            key=lambda t: (_node_sort_key(t[0]), t[1]),
        )
        for v, li in nxt:
            if v not in seen:
                seen.add(v)
                prev[v] = (u, li)
                queue.append(v)
    if dst not in seen or src == dst:
        return None
    path: List[int] = []
    at = dst
    while at != src:
        at, li = prev[at][0], prev[at][1]
        path.append(li)
    return path[::-1]


def _pair_paths(net: Network, usable: Callable[[int], bool], reverse: bool = False) -> Optional[Dict[int, List[int]]]:
    paths: Dict[int, List[int]] = {}
    for i, (t, r) in enumerate(net.pairs(), start=1):
        p = _bfs_path(net, r, t, usable) if reverse else _bfs_path(net, t, r, usable)
        if p is None:
            return None
        paths[i] = p
    return paths


def _disjoint_pair_paths(net: Network, usable: Callable[[int], bool]) -> Optional[Dict[int, List[int]]]:
    """
    One forward path per pair with no link shared. Each packed path leaves the
    residual graph before the next pair's search. An early short path can block
    a later pair, so pair orders are tried in turn: all of them up to k=4,
    rotations beyond.
    """
    pairs = list(enumerate(net.pairs(), start=1))
    if len(pairs) <= 4:
        orders: Iterable = permutations(pairs)
    else:
        orders = (pairs[s:] + pairs[:s] for s in range(len(pairs)))
    for order in orders:
        taken: Set[int] = set()
        paths: Dict[int, List[int]] = {}
        for i, (t, r) in order:
            p = _bfs_path(net, t, r, lambda li: usable(li) and li not in taken)
            if p is None:
                break
            paths[i] = p
            taken.update(p)
        else:
            return dict(sorted(paths.items()))
    return None


def _uniform_rate(capacity: Dict[int, Fraction], load: Counter) -> Fraction:
    """Largest uniform rate with load[l] * rate <= capacity[l] on every loaded link."""
    rates = [capacity[li] / n for li, n in load.items() if n > 0]
    return min(rates) if rates else Fraction(0)


def _edges(load: Counter, rate: Fraction) -> List[ComponentEdge]:
    return [ComponentEdge(li, rate * n) for li, n in sorted(load.items()) if n > 0]


# -----------------------------------------------------------------------------
# Constructions
# -----------------------------------------------------------------------------
def routing_only_decomposition(net: Network, capacity: Optional[Dict[int, Fraction]] = None) -> Decomposition:
    """c1 only: shortest paths per pair sharing links, at the best uniform rate."""
    cap = capacity if capacity is not None else {i: l.rate for i, l in enumerate(net.links)}
    paths = _pair_paths(net, lambda li: cap.get(li, 0) > 0)
    if not paths:
        return Decomposition(label="routing-only")
    load = Counter(li for p in paths.values() for li in p)
    w_tilde = _uniform_rate(cap, load)
    return Decomposition(c1=_edges(load, w_tilde), w_tilde=w_tilde, c1_paths=paths, label="routing-only")


def _code_split(code: CodeSchedule) -> Tuple[Counter, Counter]:
    """Per-replay link uses, split into c3 and c4 (links only carrying the last wave of correction bits)."""
    waves = [o.step for o in code.ops if o.op == TERMINATE]
    last = max(waves, default=None)
    c3: Counter = Counter()
    c4: Counter = Counter()
    for o in code.ops:
        if o.op == SEND:
            c3[o.link] += 1
        elif o.op == TERMINATE:
            target = c4 if o.step == last else c3
            for li in set(o.bit_links):
                if li >= 0:
                    target[li] += 1
    for li in list(c4):
        if li in c3:
            c3[li] += c4.pop(li)
    return c3, c4


def _superdense_candidate(
    net: Network,
    c2_paths: Dict[int, List[int]],
    code: CodeSchedule,
    label: str,
) -> Decomposition:
    c2_load = Counter(li for p in c2_paths.values() for li in p)
    c3_load, c4_load = _code_split(code)
    rates = {i: l.rate for i, l in enumerate(net.links)}
    w = _uniform_rate(rates, c2_load + c3_load + c4_load)
    residual = {
        li: r - (c2_load[li] + c3_load[li] + c4_load[li]) * w for li, r in rates.items()
    }
    d = Decomposition(
        c2=_edges(c2_load, w), c3=_edges(c3_load, w), c4=_edges(c4_load, w),
        w=w, c2_paths=c2_paths, code=code, label=label,
    )
    leftover = routing_only_decomposition(net, residual)
    if leftover.w_tilde > 0:
        d.c1, d.c1_paths, d.w_tilde = leftover.c1, leftover.c1_paths, leftover.w_tilde
    return d


def prop1_decomposition(net: Network) -> Decomposition:
    """c2 = component (a), c3 = (b)-(f), c4 = (g), driven by the prop1 code."""
    c2_paths = {i: [net.find_links(t, r, QUANTUM_ONLY)[0]] for i, (t, r) in enumerate(net.pairs(), start=1)}
    return _superdense_candidate(net, c2_paths, prop1_schedule(net), "prop1")


def butterfly_xor_code(net: Network) -> LinearCode:
    """s1, s2 forward to m1 and across the sides; m1 XORs onto m2; m2 fans out to both sinks."""
    C = CLASSICAL_ONLY

    def link(src: str, dst: str) -> int:
        found = net.find_links(src, dst, C)
        if not found:
            raise MissingLink(f"No classical link {src}->{dst} in {net.name or 'network'}.")
        return found[0]

    s1m1, s2m1 = link("s1", "m1"), link("s2", "m1")
    m1m2 = link("m1", "m2")
    return LinearCode(sends=(
        CodedSend(s1m1, sources=(1,)),
        CodedSend(s2m1, sources=(2,)),
        CodedSend(link("s1", "r2"), sources=(1,)),
        CodedSend(link("s2", "r1"), sources=(2,)),
        CodedSend(m1m2, inputs=(s1m1, s2m1)),
        CodedSend(link("m2", "r1"), inputs=(m1m2,)),
        CodedSend(link("m2", "r2"), inputs=(m1m2,)),
    ))


def butterfly_decomposition(net: Network) -> Decomposition:
    """c1 = the XOR code on every butterfly link at w_tilde = 1; c2-c4 empty."""
    code = butterfly_xor_code(net)
    w_tilde = min(net.links[s.link].rate for s in code.sends)
    return Decomposition(
        c1=[ComponentEdge(s.link, w_tilde) for s in code.sends],
        w_tilde=w_tilde, c1_code=code, label="butterfly-xor",
    )


def find_decomposition_greedy(
    net: Network,
    log_func: Optional[Callable[[str], None]] = None,
) -> Decomposition:
    """
    Candidates, best achieved rate wins:
      1. routing only;
      2. forward quantum paths in c2 replenished by the prop1 code;
      3. forward quantum paths in c2 replenished by reverse Bell-pair relays.
    Leftover capacity of 2./3. goes to c1 routing. Only validated candidates count.
    """
    log = (lambda m: None) if log_func is None else log_func

    best = routing_only_decomposition(net)
    if validate_decomposition(net, best):
        best = Decomposition(label="empty")
        validate_decomposition(net, best)
    best_rate = achieved_rate(best).achieved
    log(f"ℹ️ routing-only candidate: {_fmt_rate(best_rate)}")

    def quantum(li: int) -> bool:
        return net.links[li].kind == LinkKind.QUANTUM and net.links[li].rate > 0

    c2_paths = _disjoint_pair_paths(net, quantum)
    if c2_paths is None:
        log("ℹ️ no edge-disjoint forward quantum paths for every pair; keeping routing")
        return best

    candidates: List[Decomposition] = []
    try:
        candidates.append(_superdense_candidate(net, c2_paths, prop1_schedule(net), "prop1-pattern"))
    except (QnetError, KeyError):
        pass
    reverse = _pair_paths(net, quantum, reverse=True)
    if reverse is not None:
        candidates.append(_superdense_candidate(net, c2_paths, reverse_path_schedule(net, reverse), "reverse-paths"))

    for cand in candidates:
        violations = validate_decomposition(net, cand)
        if violations:
            log(f"⚠️ {cand.label} candidate rejected: {violations[0]}")
            continue
        rate = achieved_rate(cand).achieved
        log(f"ℹ️ {cand.label} candidate: {_fmt_rate(rate)}")
        if rate > best_rate:
            best, best_rate = cand, rate

    log(f"✅ decomposition {best.label}: achieved {_fmt_rate(best_rate)}")
    return best


def routing_bound(net: Network) -> Fraction:
    """Average-rate upper bound for plain routing: max-flow transmitters -> receivers over k."""
    if net.k < 1:
        return Fraction(0)
    return min_cut_capacity(net, net.transmitters(), net.receivers()) / net.k


# -----------------------------------------------------------------------------
# File format
# -----------------------------------------------------------------------------
def decomposition_to_dict(d: Decomposition) -> dict:
    out = {
        "label": d.label,
        "w_tilde": _fmt_rate(d.w_tilde),
        "w": _fmt_rate(d.w),
        "c1_paths": {str(i): list(p) for i, p in sorted(d.c1_paths.items())},
        "c2_paths": {str(i): list(p) for i, p in sorted(d.c2_paths.items())},
        "code": d.code.to_dict() if d.code is not None else None,
        "c1_code": d.c1_code.to_dict() if d.c1_code is not None else None,
    }
    for name in COMPONENTS:
        out[name] = [{"link": e.link, "rate": _fmt_rate(e.rate)} for e in d.component(name)]
    return out


def decomposition_from_dict(data: dict) -> Decomposition:
    try:
        comps = {
            name: [ComponentEdge(int(e["link"]), _parse_rate(e["rate"])) for e in data.get(name, [])]
            for name in COMPONENTS
        }
        code = data.get("code")
        c1_code = data.get("c1_code")
        return Decomposition(
            **comps,
            w_tilde=_parse_rate(data.get("w_tilde", "0/1")),
            w=_parse_rate(data.get("w", "0/1")),
            c1_paths={int(i): [int(x) for x in p] for i, p in data.get("c1_paths", {}).items()},
            c2_paths={int(i): [int(x) for x in p] for i, p in data.get("c2_paths", {}).items()},
            code=CodeSchedule.from_dict(code) if code else None,
            c1_code=LinearCode.from_dict(c1_code) if c1_code else None,
            label=str(data.get("label", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FileError(f"Malformed decomposition description: {exc}") from exc


def save_decomposition(d: Decomposition, path) -> None:
    text = json.dumps(decomposition_to_dict(d), indent=2, sort_keys=True) + "\n"
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise FileError(f"Could not write decomposition file {path}: {exc}") from exc


def load_decomposition(path) -> Decomposition:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8-sig"))
    except OSError as exc:
        raise FileError(f"Could not read decomposition file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileError(f"Decomposition file {path} is not valid JSON: {exc}") from exc
    return decomposition_from_dict(data)
