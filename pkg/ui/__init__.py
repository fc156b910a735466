# ui/__init__.py
"""
Streamlit sections for the network-coding dashboard.
Submodules import `streamlit`; keep this file import-free so `logic/` stays usable without it.
"""
__all__ = []
