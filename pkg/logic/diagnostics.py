# logic/diagnostics.py

from __future__ import annotations
from fractions import Fraction
from typing import Iterable, List, Optional

import pandas as pd

from .network import Network
from .protocol import TrafficLog
from .scenarios import (
    ThroughputReport,
    run_combined,
    run_qlnc_only,
    run_superdense_only,
    separation_ratios,
)
from .utils import _fmt_rate


def run_comparison(
    k: int,
    n_b: int,
    *,
    seed: int = 0,
    latency_constant: int = 3,
    simulate: Optional[bool] = None,
    log_func=None,
) -> List[ThroughputReport]:
    """The three prop1 modes on the same (k, n_b, seed)."""
    return [
        run_combined(k, n_b, seed=seed, latency_constant=latency_constant, simulate=simulate, log_func=log_func),
        run_qlnc_only(k, n_b, seed=seed, simulate=simulate, log_func=log_func),
        run_superdense_only(k, n_b, seed=seed, simulate=simulate, log_func=log_func),
    ]


def compare_modes(reports: List[ThroughputReport]) -> pd.DataFrame:
    """
    One row per mode with elapsed times and the slowdown against the first
    (combined) row, as an exact "p/q" and a float for sorting/plotting.
    """
    if not reports:
        return pd.DataFrame(columns=["mode", "elapsed", "paper_literal_elapsed", "steady_rate", "vs_combined", "vs_combined_f"])
    base = reports[0].elapsed
    rows = []
    for r in reports:
        ratio = Fraction(r.elapsed, base) if base else Fraction(0)
        rows.append({
            "mode": r.mode,
            "elapsed": r.elapsed,
            "paper_literal_elapsed": "" if r.paper_literal_elapsed is None else r.paper_literal_elapsed,
            "steady_rate": _fmt_rate(r.steady_rate),
            "vs_combined": _fmt_rate(ratio),
            "vs_combined_f": round(float(ratio), 6),
        })
    return pd.DataFrame(rows)


def separation_sweep(ks: Iterable[int], n_b: int, latency_constant: int = 3) -> pd.DataFrame:
    """Closed-form separation ratios per k; `min_ratio` is the weaker of the two baselines."""
    rows = []
    for k in ks:
        q, s = separation_ratios(k, n_b, latency_constant)
        m = min(q, s)
        rows.append({
            "k": k,
            "n_b": n_b,
            "qlnc_only_ratio": _fmt_rate(q),
            "superdense_only_ratio": _fmt_rate(s),
            "min_ratio": _fmt_rate(m),
            "min_ratio_f": round(float(m), 6),
        })
    return pd.DataFrame(rows)


def traffic_frame(log: TrafficLog) -> pd.DataFrame:
    """Per-link usage summary: uses by payload kind and the peak per-step load."""
    net: Network = log.net
    if not log.records:
        return pd.DataFrame(columns=["link", "component", "kind", "qubits", "bits", "peak", "rate"])
    df = pd.DataFrame([(r.step, r.link, r.payload) for r in log.records], columns=["step", "link", "payload"])
    uses = df.groupby(["link", "payload"]).size().unstack(fill_value=0)
    peak = df.groupby(["link", "step"]).size().groupby("link").max()
    rows = []
    for li in sorted(uses.index):
        l = net.links[li]
        rows.append({
            "link": f"{l.src}->{l.dst}",
            "component": l.component,
            "kind": l.kind.value,
            "qubits": int(uses.loc[li].get("qubit", 0)),
            "bits": int(uses.loc[li].get("bit", 0)),
            "peak": int(peak.loc[li]),
            "rate": _fmt_rate(l.rate),
        })
    return pd.DataFrame(rows)
