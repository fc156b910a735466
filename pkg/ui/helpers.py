from __future__ import annotations
import streamlit as st
import pandas as pd

from logic.errors import FileError
from logic.network import Network, network_from_json, sorted_node_names
from logic.reports import reports_frame, reports_to_json
from logic.utils import _fmt_rate

# ----------------- Session helpers -----------------

def ensure_session_keys() -> None:
    """Create all session_state keys used by the app if missing."""
    defaults = [
        ("network",     None),
        ("network_src", ""),
        ("outcome",     None),
        ("last_config", None),
        ("log_lines",   []),
    ]
    for k, v in defaults:
        if k not in st.session_state:
            st.session_state[k] = v


def read_network(src) -> Network:
    """Read a network description from an uploaded file (bytes) or text."""
    raw = src.getvalue() if hasattr(src, "getvalue") else src
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise FileError("Network file is not UTF-8 text.") from exc
    return network_from_json(raw)

# ----------------- DataFrame helpers -----------------

def nodes_frame(net: Network) -> pd.DataFrame:
    order = {name: i for i, name in enumerate(sorted_node_names(net))}
    rows = [
        {"node": n.name, "role": n.role, "index": "" if n.index is None else n.index}
        for n in net.nodes
    ]
    df = pd.DataFrame(rows)
    if df.empty:
        return df
    return df.sort_values(by="node", key=lambda s: s.map(order), ignore_index=True)


def links_frame(net: Network) -> pd.DataFrame:
    rows = [
        {
            "id": i,
            "src": l.src,
            "dst": l.dst,
            "kind": l.kind.value,
            "rate": _fmt_rate(l.rate),
            "component": l.component,
        }
        for i, l in enumerate(net.links)
    ]
    return pd.DataFrame(rows)


def reports_download(reports) -> bytes:
    return reports_to_json(reports).encode("utf-8")


def reports_table(reports) -> pd.DataFrame:
    return reports_frame(reports)
