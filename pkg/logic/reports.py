# logic/reports.py
"""Throughput report file format (JSON, rates as "p/q") and the text table writer."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, List, Sequence

import pandas as pd

from .errors import FileError
from .scenarios import SUPERDENSE_ONLY, ThroughputReport
from .utils import _fmt_rate, _parse_rate

TABLE_COLS = ["mode", "k", "n_b", "elapsed_steps", "paper_literal_elapsed", "avg_rate", "steady_rate", "simulated"]


def report_to_dict(r: ThroughputReport) -> dict:
    d = {
        "mode": r.mode,
        "k": r.k,
        "n_b": r.n_b,
        "elapsed_steps": r.elapsed,
        "avg_rate": _fmt_rate(r.avg_rate),
        "steady_rate": _fmt_rate(r.steady_rate),
        "per_pair_bits": list(r.per_pair_bits),
        "seed": r.seed,
        "latency_constant": r.latency_constant,
        "simulated": r.simulated,
        "notes": list(r.notes),
    }
    if r.mode == SUPERDENSE_ONLY:
        d["paper_literal_elapsed"] = r.paper_literal_elapsed
    if r.payload_ok is not None:
        d["payload_ok"] = r.payload_ok
    if r.oracle_pairs_verified is not None:
        d["oracle_pairs_verified"] = r.oracle_pairs_verified
    if r.inventory_high_water is not None:
        d["inventory_high_water"] = r.inventory_high_water
    return d


def report_from_dict(d: dict) -> ThroughputReport:
    try:
        return ThroughputReport(
            mode=str(d["mode"]),
            k=int(d["k"]),
            n_b=int(d["n_b"]),
            elapsed=int(d["elapsed_steps"]),
            per_pair_bits=tuple(int(b) for b in d["per_pair_bits"]),
            avg_rate=_parse_rate(d["avg_rate"]),
            steady_rate=_parse_rate(d.get("steady_rate", "0/1")),
            seed=int(d.get("seed", 0)),
            latency_constant=int(d.get("latency_constant", 3)),
            paper_literal_elapsed=(
                int(d["paper_literal_elapsed"]) if d.get("paper_literal_elapsed") is not None else None
            ),
            simulated=bool(d.get("simulated", False)),
            payload_ok=d.get("payload_ok"),
            oracle_pairs_verified=d.get("oracle_pairs_verified"),
            inventory_high_water=d.get("inventory_high_water"),
            notes=tuple(str(n) for n in d.get("notes", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FileError(f"Malformed report: {exc}") from exc


def reports_to_json(reports: Sequence[ThroughputReport]) -> str:
    payload = {"reports": [report_to_dict(r) for r in reports]}
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def reports_from_json(text: str) -> List[ThroughputReport]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileError(f"Report file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("reports"), list):
        raise FileError("Report file must hold an object with a 'reports' list.")
    return [report_from_dict(d) for d in data["reports"]]


def write_reports(reports: Sequence[ThroughputReport], path) -> None:
    try:
        Path(path).write_text(reports_to_json(reports), encoding="utf-8")
    except OSError as exc:
        raise FileError(f"Could not write report file {path}: {exc}") from exc


def read_reports(path) -> List[ThroughputReport]:
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise FileError(f"Could not read report file {path}: {exc}") from exc
    return reports_from_json(text)


# ----------------- human table -----------------

def reports_frame(reports: Iterable[ThroughputReport]) -> pd.DataFrame:
    rows = []
    for r in reports:
        d = report_to_dict(r)
        rows.append({c: d.get(c, "") for c in TABLE_COLS})
    df = pd.DataFrame(rows, columns=TABLE_COLS)
    if not df.empty:
        df["paper_literal_elapsed"] = df["paper_literal_elapsed"].map(lambda v: "" if v is None or v == "" else str(v))
    return df


def format_table(reports: Iterable[ThroughputReport]) -> str:
    df = reports_frame(reports)
    if df.empty:
        return "(no reports)"
    return df.to_string(index=False)
