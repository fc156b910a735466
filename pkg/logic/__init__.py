# logic/__init__.py
from .formulas import FormulaEngine, ClusterReport, formula_str
from .tableau import PauliString, Tableau, new_tableau
from .network import (
    LinkKind,
    Network,
    build_butterfly,
    build_prop1,
    build_two_node_loop,
    load_network,
    normalize_unit_edges,
    save_network,
)
from .capacity import Partition, cut_out_capacity, min_cut_capacity
from .validate import validate, check_traffic
from .protocol import SuperdenseCodec, SuperdenseMessage, TrafficLog, qlnc_round
from .scenarios import (
    ThroughputReport,
    run_butterfly,
    run_combined,
    run_fig1_loop,
    run_qlnc_only,
    run_superdense_only,
)
from .decomposition import (
    Decomposition,
    achieved_rate,
    find_decomposition_greedy,
    validate_decomposition,
)
from .diagnostics import compare_modes, separation_sweep, traffic_frame
from .runner import ScenarioConfig, parse_config, run

__all__ = [
    "FormulaEngine",
    "ClusterReport",
    "formula_str",
    "PauliString",
    "Tableau",
    "new_tableau",
    "LinkKind",
    "Network",
    "build_butterfly",
    "build_prop1",
    "build_two_node_loop",
    "load_network",
    "normalize_unit_edges",
    "save_network",
    "Partition",
    "cut_out_capacity",
    "min_cut_capacity",
    "validate",
    "check_traffic",
    "SuperdenseCodec",
    "SuperdenseMessage",
    "TrafficLog",
    "qlnc_round",
    "ThroughputReport",
    "run_butterfly",
    "run_combined",
    "run_fig1_loop",
    "run_qlnc_only",
    "run_superdense_only",
    "Decomposition",
    "achieved_rate",
    "find_decomposition_greedy",
    "validate_decomposition",
    "compare_modes",
    "separation_sweep",
    "traffic_frame",
    "ScenarioConfig",
    "parse_config",
    "run",
]
