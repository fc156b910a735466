# logic/runner.py
"""
Scenario configuration and dispatch shared by the command line and the
Streamlit dashboard. `run` never prints; it returns the text to show plus the
files it wrote.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from .decomposition import (
    achieved_rate,
    find_decomposition_greedy,
    load_decomposition,
    routing_bound,
    save_decomposition,
    validate_decomposition,
)
from .diagnostics import compare_modes, run_comparison
from .errors import BadConfig, FileError, QnetError
from .network import Network, build_butterfly, build_prop1, build_two_node_loop, load_network
from .reports import format_table, write_reports
from .scenarios import (
    ThroughputReport,
    run_butterfly,
    run_combined,
    run_fig1_loop,
    run_qlnc_only,
    run_superdense_only,
)
from .utils import _clean_opt, _fmt_rate, bits_from_str, bits_to_str
from .validate import validate

SCENARIOS = (
    "fig1",
    "butterfly",
    "prop1-combined",
    "prop1-qlnc-only",
    "prop1-superdense-only",
    "prop1-compare",
    "decompose",
    "validate",
)
TOPOLOGIES = ("prop1", "loop", "butterfly")

# tableau size grows as (k^2 + 2k)^2
ORACLE_MAX_K = 6

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BAD_CONFIG = 2


@dataclass
class ScenarioConfig:
    scenario: str
    k: int = 10
    n_b: int = 1000
    seed: int = 0
    oracle: bool = False
    latency_constant: int = 3
    verbose: int = 0
    b1: str = "1011"
    b2: str = "0110"
    topology: str = "prop1"
    network: str = ""
    decomposition: str = ""
    out: str = ""
    simulate: Optional[bool] = None


@dataclass
class RunOutcome:
    status: int
    text: str
    reports: List[ThroughputReport] = field(default_factory=list)
    artifacts: Dict[str, str] = field(default_factory=dict)


# ----------------- parsing -----------------

_INT_KEYS = {"k", "n_b", "seed", "latency_constant", "verbose"}
_STR_KEYS = {"b1", "b2", "topology", "network", "decomposition", "out"}
_BOOL_KEYS = {"oracle", "simulate"}
_ON = {"on", "true", "yes", "1"}
_OFF = {"off", "false", "no", "0"}


def _parse_bool(key: str, value: str) -> bool:
    v = value.strip().lower()
    if v in _ON:
        return True
    if v in _OFF:
        return False
    raise BadConfig(f"{key} must be on or off, got {value!r}.")


def parse_config(tokens: Sequence[str]) -> ScenarioConfig:
    """`scenario key=value ...` -> checked ScenarioConfig."""
    if not tokens:
        raise BadConfig(f"Missing scenario; choose one of: {', '.join(SCENARIOS)}.")
    scenario = tokens[0].strip()
    if scenario not in SCENARIOS:
        raise BadConfig(f"Unknown scenario {scenario!r}; choose one of: {', '.join(SCENARIOS)}.")
    values: Dict[str, object] = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise BadConfig(f"Expected key=value, got {tok!r}.")
        key, value = (s.strip() for s in tok.split("=", 1))
        key = key.replace("-", "_")
        if key in values:
            raise BadConfig(f"{key} given twice.")
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise BadConfig(f"{key} must be an integer, got {value!r}.") from None
        elif key in _BOOL_KEYS:
            values[key] = _parse_bool(key, value)
        elif key in _STR_KEYS:
            values[key] = _clean_opt(value)
        else:
            known = sorted(f.name for f in fields(ScenarioConfig) if f.name != "scenario")
            raise BadConfig(f"Unknown key {key!r}; known keys: {', '.join(known)}.")
    config = ScenarioConfig(scenario=scenario, **values)
    check_config(config)
    return config


def check_config(c: ScenarioConfig) -> None:
    """Scenario-specific argument completeness; raises BadConfig."""
    if c.scenario not in SCENARIOS:
        raise BadConfig(f"Unknown scenario {c.scenario!r}.")
    if c.n_b < 0:
        raise BadConfig(f"n_b must be nonnegative, got {c.n_b}.")
    if c.latency_constant < 3:
        raise BadConfig(f"latency_constant must be at least 3, got {c.latency_constant}.")
    if c.scenario.startswith("prop1-") and c.k < 2:
        raise BadConfig(f"{c.scenario} needs k >= 2, got {c.k}.")
    if c.scenario in ("prop1-combined", "prop1-compare", "fig1") and c.n_b % 2:
        raise BadConfig(f"{c.scenario} needs an even n_b, got {c.n_b}.")
    if c.oracle and c.scenario.startswith("prop1-") and c.k > ORACLE_MAX_K:
        raise BadConfig(f"oracle mode is capped at k <= {ORACLE_MAX_K} (got k={c.k}); rerun with oracle=off.")
    if c.scenario == "butterfly":
        try:
            b1, b2 = bits_from_str(c.b1), bits_from_str(c.b2)
        except ValueError as exc:
            raise BadConfig(str(exc)) from None
        if len(b1) != len(b2):
            raise BadConfig(f"b1 and b2 must have equal length ({len(b1)} vs {len(b2)}).")
    if c.scenario in ("decompose", "validate") and not c.network and c.topology not in TOPOLOGIES:
        raise BadConfig(f"topology must be one of {', '.join(TOPOLOGIES)}, got {c.topology!r}.")
    if c.scenario == "decompose" and not c.network and c.topology == "prop1" and c.k < 2:
        raise BadConfig(f"prop1 topology needs k >= 2, got {c.k}.")


# ----------------- dispatch -----------------

def _network_for(c: ScenarioConfig) -> Network:
    if c.network:
        return load_network(c.network)
    if c.topology == "loop":
        return build_two_node_loop()
    if c.topology == "butterfly":
        return build_butterfly()
    return build_prop1(c.k)


def _report_lines(r: ThroughputReport) -> List[str]:
    lines = [format_table([r])]
    if r.payload_ok is not None:
        lines.append("payload: intact" if r.payload_ok else "payload: CORRUPTED")
    if r.inventory_high_water is not None:
        lines.append(f"bell inventory high-water: {r.inventory_high_water}")
    if r.oracle_pairs_verified is not None:
        lines.append(f"oracle: all {r.oracle_pairs_verified} pairs Bell-verified")
    lines += [f"note: {n}" for n in r.notes]
    return lines


def _finish_reports(c: ScenarioConfig, reports: List[ThroughputReport], lines: List[str]) -> RunOutcome:
    artifacts: Dict[str, str] = {}
    if c.out:
        write_reports(reports, c.out)
        artifacts["report"] = c.out
    failed = any(r.payload_ok is False for r in reports)
    return RunOutcome(
        status=EXIT_VIOLATION if failed else EXIT_OK,
        text="\n".join(lines) + "\n",
        reports=reports,
        artifacts=artifacts,
    )


def run(config: ScenarioConfig, log_func: Optional[Callable[[str], None]] = None) -> RunOutcome:
    """
    Execute one scenario. Exit status: 0 ok, 1 invariant violation, 2 bad
    configuration or unreadable/unwritable files.
    """
    log = (lambda m: None) if log_func is None else log_func
    try:
        check_config(config)
        return _dispatch(config, log)
    except (BadConfig, FileError) as exc:
        log(f"❌ {exc}")
        return RunOutcome(status=EXIT_BAD_CONFIG, text=f"error: {exc}\n")
    except QnetError as exc:
        log(f"❌ {exc}")
        return RunOutcome(status=EXIT_VIOLATION, text=f"invariant violation: {exc}\n")


def _dispatch(c: ScenarioConfig, log: Callable[[str], None]) -> RunOutcome:
    s = c.scenario
    if s == "prop1-combined":
        r = run_combined(c.k, c.n_b, seed=c.seed, oracle=c.oracle, latency_constant=c.latency_constant,
                         simulate=c.simulate, log_func=log)
        return _finish_reports(c, [r], _report_lines(r))
    if s == "prop1-qlnc-only":
        r = run_qlnc_only(c.k, c.n_b, seed=c.seed, simulate=c.simulate, log_func=log)
        return _finish_reports(c, [r], _report_lines(r))
    if s == "prop1-superdense-only":
        r = run_superdense_only(c.k, c.n_b, seed=c.seed, oracle=c.oracle, simulate=c.simulate, log_func=log)
        return _finish_reports(c, [r], _report_lines(r))
    if s == "fig1":
        r = run_fig1_loop(c.n_b, seed=c.seed, oracle=c.oracle, log_func=log)
        return _finish_reports(c, [r], _report_lines(r))
    if s == "prop1-compare":
        return _run_compare(c, log)
    if s == "butterfly":
        return _run_butterfly(c, log)
    if s == "decompose":
        return _run_decompose(c, log)
    return _run_validate(c, log)


def _run_compare(c: ScenarioConfig, log: Callable[[str], None]) -> RunOutcome:
    reports = run_comparison(c.k, c.n_b, seed=c.seed, latency_constant=c.latency_constant,
                             simulate=c.simulate, log_func=log)
    table = compare_modes(reports)
    base = reports[0].elapsed
    lines = [table.drop(columns=["vs_combined_f"]).to_string(index=False)]
    if base:
        worst = min(reports[1].elapsed, reports[2].elapsed)
        lines.append(
            f"separation: min(qlnc-only, superdense-only) / combined = {worst}/{base} = {worst / base:.6f}"
        )
    for r in reports:
        if r.payload_ok is False:
            lines.append(f"payload: CORRUPTED in {r.mode}")
    return _finish_reports(c, reports, lines)


def _run_butterfly(c: ScenarioConfig, log: Callable[[str], None]) -> RunOutcome:
    b1, b2 = bits_from_str(c.b1), bits_from_str(c.b2)
    res = run_butterfly(b1, b2, log_func=log)
    ok = res.out1 == b1 and res.out2 == b2 and not res.traffic.violations()
    peak = res.traffic.max_load(res.traffic.net.find_links("m1", "m2")[0])
    lines = [
        f"b1   = {bits_to_str(b1)}",
        f"b2   = {bits_to_str(b2)}",
        f"out1 = {bits_to_str(res.out1)}",
        f"out2 = {bits_to_str(res.out2)}",
        f"bottleneck m1->m2 = {bits_to_str(res.bottleneck_bits)} (peak {peak} bit/step)",
        f"elapsed: {res.elapsed}",
        "streams recovered" if ok else "streams CORRUPTED",
    ]
    artifacts: Dict[str, str] = {}
    if c.out:
        payload = {
            "scenario": "butterfly",
            "b1": bits_to_str(b1), "b2": bits_to_str(b2),
            "out1": bits_to_str(res.out1), "out2": bits_to_str(res.out2),
            "elapsed_steps": res.elapsed,
        }
        try:
            Path(c.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as exc:
            raise FileError(f"Could not write {c.out}: {exc}") from exc
        artifacts["report"] = c.out
    return RunOutcome(status=EXIT_OK if ok else EXIT_VIOLATION, text="\n".join(lines) + "\n", artifacts=artifacts)


def _run_decompose(c: ScenarioConfig, log: Callable[[str], None]) -> RunOutcome:
    net = _network_for(c)
    bad = validate(net)
    if bad:
        return RunOutcome(status=EXIT_VIOLATION, text="\n".join(f"network: {v}" for v in bad) + "\n")
    d = find_decomposition_greedy(net, log_func=log)
    violations = validate_decomposition(net, d)
    lines = [f"network: {net.name or 'unnamed'} ({len(net.nodes)} nodes, {len(net.links)} links, k={net.k})"]
    if violations:
        lines += [f"violation: {v}" for v in violations]
    else:
        rs = achieved_rate(d)
        lines += [
            f"decomposition: {d.label}",
            f"w_tilde = {_fmt_rate(rs.w_tilde)}, w = {_fmt_rate(rs.w)}, achieved = {_fmt_rate(rs.achieved)}",
            f"routing bound (max-flow / k) = {_fmt_rate(routing_bound(net))}",
        ]
        for name in ("c1", "c2", "c3", "c4"):
            lines.append(f"{name}: {len(d.component(name))} edges")
    artifacts: Dict[str, str] = {}
    if c.out:
        save_decomposition(d, c.out)
        artifacts["decomposition"] = c.out
    return RunOutcome(
        status=EXIT_VIOLATION if violations else EXIT_OK,
        text="\n".join(lines) + "\n",
        artifacts=artifacts,
    )


def _run_validate(c: ScenarioConfig, log: Callable[[str], None]) -> RunOutcome:
    net = _network_for(c)
    violations = [f"network: {v}" for v in validate(net)]
    if not violations and c.decomposition:
        d = load_decomposition(c.decomposition)
        violations += [f"decomposition: {v}" for v in validate_decomposition(net, d)]
    if violations:
        log(f"⚠️ {len(violations)} violation(s)")
        return RunOutcome(status=EXIT_VIOLATION, text="\n".join(violations) + "\n")
    log("✅ no violations")
    what = "network and decomposition" if c.decomposition else "network"
    return RunOutcome(status=EXIT_OK, text=f"{what} valid: {net.name or 'unnamed'}\n")
