from __future__ import annotations
import json
import streamlit as st
import pandas as pd

from .helpers import links_frame, nodes_frame, reports_download, reports_table
from .runner import run_scenario
from logic import (
    achieved_rate,
    build_butterfly,
    build_prop1,
    build_two_node_loop,
    find_decomposition_greedy,
    separation_sweep,
    traffic_frame,
    validate,
    validate_decomposition,
)
from logic.decomposition import decomposition_to_dict, routing_bound
from logic.runner import ORACLE_MAX_K, SCENARIOS, ScenarioConfig
from logic.utils import _fmt_rate


# =========================
# Feature flags / constants
# =========================
PROTOCOL_SCENARIOS = [s for s in SCENARIOS if s not in ("decompose", "validate")]
BUILTIN_TOPOLOGIES = {
    "prop1 separation network (k pairs)": "prop1",
    "Two-node loop": "loop",
    "Butterfly": "butterfly",
}


# =========================
# Scenario runner
# =========================
def render_scenario_form():
    st.markdown("### ▶️ Run a scenario")
    c1, c2, c3, c4 = st.columns(4)
    with c1:
        scenario = st.selectbox("Scenario", PROTOCOL_SCENARIOS, index=PROTOCOL_SCENARIOS.index("prop1-compare"))
    with c2:
        k = st.number_input("k (pairs)", min_value=2, max_value=64, value=10, step=1)
    with c3:
        n_b = st.number_input("n_b (bits per pair)", min_value=0, max_value=200_000, value=1000, step=2)
    with c4:
        seed = st.number_input("seed", min_value=0, value=0, step=1)

    o1, o2, o3 = st.columns(3)
    with o1:
        oracle = st.checkbox(
            "Stabilizer oracle",
            value=False,
            help=f"Mirror every round on a stabilizer tableau (k ≤ {ORACLE_MAX_K}).",
        )
    with o2:
        latency = st.number_input("Latency constant", min_value=3, max_value=10, value=3, step=1)
    with o3:
        b_cols = st.columns(2)
        b1 = b_cols[0].text_input("b1 (butterfly)", value="1011")
        b2 = b_cols[1].text_input("b2 (butterfly)", value="0110")

    if st.button("🔁 Run"):
        config = ScenarioConfig(
            scenario=scenario, k=int(k), n_b=int(n_b), seed=int(seed),
            oracle=bool(oracle), latency_constant=int(latency), b1=b1, b2=b2,
        )
        run_scenario(config)


def render_outcome():
    outcome = st.session_state.get("outcome")
    if outcome is None:
        return
    st.markdown("---")
    if outcome.status == 0:
        st.success("✅ Scenario finished without violations.")
    elif outcome.status == 1:
        st.error("❌ Invariant violation, see the output below.")
    else:
        st.warning("⚠️ Bad configuration.")
    st.code(outcome.text, language="text")

    if outcome.reports:
        st.dataframe(reports_table(outcome.reports), use_container_width=True)
        st.download_button(
            "📥 Download report (JSON)",
            reports_download(outcome.reports),
            "report.json",
            "application/json",
        )
        for r in outcome.reports:
            if r.traffic is not None:
                with st.expander(f"🚦 Link usage: {r.mode}", expanded=False):
                    st.dataframe(traffic_frame(r.traffic), use_container_width=True)


# =========================
# Separation sweep
# =========================
def render_separation_sweep():
    with st.expander("📈 Separation sweep (closed form)", expanded=False):
        c1, c2, c3 = st.columns(3)
        k_min = c1.number_input("k from", min_value=2, value=2, step=1)
        k_max = c2.number_input("k to", min_value=2, value=19, step=1)
        n_b = c3.number_input("n_b", min_value=2, value=40_000, step=2, key="sweep_n_b")
        if k_max < k_min:
            st.info("ℹ️ 'k to' must be at least 'k from'.")
            return
        df = separation_sweep(range(int(k_min), int(k_max) + 1), int(n_b))
        st.dataframe(df, use_container_width=True)
        st.download_button(
            "📥 Download sweep (CSV)",
            df.to_csv(index=False).encode("utf-8-sig"),
            "separation_sweep.csv",
            "text/csv",
        )


# =========================
# Network + decomposition
# =========================
def _current_network(choice: str, k: int):
    if choice == "Uploaded network":
        return st.session_state.get("network")
    topo = BUILTIN_TOPOLOGIES[choice]
    if topo == "loop":
        return build_two_node_loop()
    if topo == "butterfly":
        return build_butterfly()
    return build_prop1(k)


def render_network_view():
    with st.expander("🕸️ Network, validation and decomposition", expanded=False):
        options = list(BUILTIN_TOPOLOGIES)
        if st.session_state.get("network") is not None:
            options = ["Uploaded network"] + options
        choice = st.selectbox("Network", options)
        k = st.number_input("k for the prop1 network", min_value=2, max_value=32, value=3, step=1, key="net_k")
        net = _current_network(choice, int(k))
        if net is None:
            st.info("ℹ️ No network loaded.")
            return

        left, right = st.columns([1, 2])
        with left:
            st.dataframe(nodes_frame(net), use_container_width=True)
        with right:
            st.dataframe(links_frame(net), use_container_width=True)

        problems = validate(net)
        if problems:
            st.error("❌ Network violations:")
            st.dataframe(pd.DataFrame({"violation": problems}), use_container_width=True)
            return
        st.success("✅ Network is well formed.")

        if st.button("🧩 Find decomposition"):
            st.session_state["log_lines"] = []
            d = find_decomposition_greedy(net, log_func=lambda m: st.session_state["log_lines"].append(m))
            violations = validate_decomposition(net, d)
            if violations:
                st.error("❌ " + violations[0])
                return
            rs = achieved_rate(d)
            st.markdown(
                f"**{d.label}**: w̃ = `{_fmt_rate(rs.w_tilde)}`, w = `{_fmt_rate(rs.w)}`, "
                f"achieved = `{_fmt_rate(rs.achieved)}` (routing bound `{_fmt_rate(routing_bound(net))}`)"
            )
            rows = [
                {"component": name, "link": f"{net.links[e.link].src}->{net.links[e.link].dst}", "rate": _fmt_rate(e.rate)}
                for name in ("c1", "c2", "c3", "c4")
                for e in d.component(name)
            ]
            st.dataframe(pd.DataFrame(rows), use_container_width=True)
            st.download_button(
                "📥 Download decomposition (JSON)",
                json.dumps(decomposition_to_dict(d), indent=2, sort_keys=True).encode("utf-8"),
                "decomposition.json",
                "application/json",
            )


# =========================
# Logs
# =========================
def render_logs():
    if not st.session_state.get("log_lines"):
        return
    st.markdown("---")
    st.markdown("### 🐞 Run Log")

    n = st.slider("Show last N lines", min_value=20, max_value=1000, value=200, step=20)
    tail = st.session_state["log_lines"][-n:]
    st.text_area("Log (compact)", value="\n".join(tail), height=200, label_visibility="collapsed")

    log_bytes = "\n".join(st.session_state["log_lines"]).encode("utf-8-sig")
    st.download_button("📥 Download Log", log_bytes, file_name="run.log", mime="text/plain")
