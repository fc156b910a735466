import streamlit as st

from .helpers import read_network


def render_uploads():
    st.markdown("### 📁 Network description")

    paste = st.toggle(
        "Paste JSON instead of file upload",
        key="paste_network",
        help="Switch to paste a network description directly.",
    )

    # Clear previous network when switching modes
    if st.session_state.get("_last_paste_network") != paste:
        st.session_state["network"] = None
        st.session_state["network_src"] = ""
        st.session_state["_last_paste_network"] = paste

    if paste:
        text = st.text_area(
            "Network JSON",
            key="network_text",
            height=160,
            placeholder='{"k": 1, "nodes": [...], "links": [...]}',
        )
        if text.strip():
            try:
                st.session_state["network"] = read_network(text)
                st.session_state["network_src"] = "pasted"
            except ValueError as e:
                st.error(f"Failed to read network: {e}")
    else:
        net_file = st.file_uploader("🕸️ Network JSON", type="json", label_visibility="collapsed")
        st.markdown(
            "*🕸️ Network*",
            help="Optional. Used by the decomposition and validation views; "
                 "the protocol scenarios build their own networks.",
        )
        if net_file:
            try:
                st.session_state["network"] = read_network(net_file)
                st.session_state["network_src"] = net_file.name
            except ValueError as e:
                st.error(f"Failed to read network: {e}")
