import sys
from pathlib import Path

import pytest

# --- Ensure local packages (logic/) are importable ---------------------------
ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))
# -----------------------------------------------------------------------------

from logic.formulas import FormulaEngine
from logic.network import build_prop1, build_two_node_loop
from logic.utils import SeededRNG


@pytest.fixture
def engine():
    return FormulaEngine(rng=SeededRNG(7))


@pytest.fixture
def prop1_k3():
    return build_prop1(3)


@pytest.fixture
def loop():
    return build_two_node_loop()
