import streamlit as st

from logic.runner import ScenarioConfig, run


def run_scenario(config: ScenarioConfig):
    """
    Run one scenario through the shared runner and keep its outcome in the
    session. Log lines are collected fresh for every run.
    """
    # Initialize/clear log
    st.session_state["log_lines"] = []

    outcome = run(
        config,
        log_func=lambda msg: st.session_state["log_lines"].append(msg),
    )

    st.session_state["last_config"] = config
    st.session_state["outcome"] = outcome
    return outcome
