import json

import pytest

import cli
from logic.errors import BadConfig
from logic.runner import EXIT_BAD_CONFIG, EXIT_OK, EXIT_VIOLATION, ScenarioConfig, parse_config, run


def test_prop1_compare_table():
    out = run(parse_config(["prop1-compare", "k=10", "n_b=1000"]))
    assert out.status == EXIT_OK
    assert [r.mode for r in out.reports] == ["combined", "qlnc-only", "superdense-only"]
    assert [r.elapsed for r in out.reports] == [503, 1000, 913]
    assert "1103" in out.text
    assert "separation: min(qlnc-only, superdense-only) / combined = 913/503 = 1.815109" in out.text


def test_combined_with_oracle_reports_verification():
    out = run(parse_config(["prop1-combined", "k=3", "n_b=4", "oracle=on"]))
    assert out.status == EXIT_OK
    assert "oracle: all 3 pairs Bell-verified" in out.text
    assert "payload: intact" in out.text


def test_butterfly_defaults():
    out = run(parse_config(["butterfly"]))
    assert out.status == EXIT_OK
    lines = out.text.splitlines()
    assert "out1 = 1011" in lines and "out2 = 0110" in lines
    assert "(peak 1 bit/step)" in out.text
    assert lines[-1] == "streams recovered"


def test_same_config_same_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    first = run(parse_config(["prop1-superdense-only", "k=3", "n_b=20", "seed=5", f"out={a}"]))
    second = run(parse_config(["prop1-superdense-only", "k=3", "n_b=20", "seed=5", f"out={b}"]))
    assert first.text == second.text
    assert a.read_bytes() == b.read_bytes()
    assert first.artifacts == {"report": str(a)}


def test_decompose_then_validate(tmp_path):
    path = tmp_path / "loop.decomp.json"
    out = run(parse_config(["decompose", "topology=loop", f"out={path}"]))
    assert out.status == EXIT_OK
    assert "achieved = 2/1" in out.text
    assert json.loads(path.read_text(encoding="utf-8"))["label"] == "reverse-paths"

    checked = run(parse_config(["validate", "topology=loop", f"decomposition={path}"]))
    assert checked.status == EXIT_OK
    assert checked.text.startswith("network and decomposition valid")


def test_validate_flags_a_bad_decomposition(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"c3": [{"link": 0, "rate": "1/1"}]}), encoding="utf-8")
    out = run(parse_config(["validate", "topology=loop", f"decomposition={path}"]))
    assert out.status == EXIT_VIOLATION
    assert out.text.startswith("decomposition: ")


def test_missing_file_is_a_config_error(tmp_path):
    lines = []
    out = run(parse_config(["validate", f"network={tmp_path / 'nope.json'}"]), log_func=lines.append)
    assert out.status == EXIT_BAD_CONFIG
    assert out.text.startswith("error: ")
    assert lines and lines[0].startswith("❌")


@pytest.mark.parametrize("tokens", [
    [],
    ["teleport"],
    ["fig1", "n_b"],
    ["fig1", "colour=red"],
    ["fig1", "n_b=4", "n_b=6"],
    ["fig1", "n_b=four"],
    ["fig1", "oracle=maybe"],
    ["fig1", "n_b=5"],
    ["prop1-combined", "k=3", "n_b=3"],
    ["prop1-compare", "k=3", "n_b=7"],
    ["prop1-qlnc-only", "k=1"],
    ["prop1-combined", "k=7", "n_b=4", "oracle=on"],
    ["prop1-combined", "latency_constant=2"],
    ["butterfly", "b1=101", "b2=10"],
    ["butterfly", "b1=1a1", "b2=101"],
    ["decompose", "topology=ring"],
    ["prop1-qlnc-only", "n_b=-2"],
])
def test_bad_configs(tokens):
    with pytest.raises(BadConfig):
        parse_config(tokens)


def test_parse_config_accepts_dashes_and_switches():
    c = parse_config(["prop1-superdense-only", "n-b=11", "k=4", "oracle=yes", "simulate=off"])
    assert c == ScenarioConfig(scenario="prop1-superdense-only", k=4, n_b=11, oracle=True, simulate=False)


def test_run_rechecks_config():
    out = run(ScenarioConfig(scenario="fig1", n_b=3))
    assert out.status == EXIT_BAD_CONFIG
    out = run(ScenarioConfig(scenario="prop1-compare", k=3, n_b=7))
    assert out.status == EXIT_BAD_CONFIG
    assert "even n_b" in out.text


def test_closed_form_run_has_no_payload_line():
    out = run(parse_config(["prop1-qlnc-only", "k=3", "n_b=10", "simulate=off"]))
    assert out.status == EXIT_OK
    assert "payload" not in out.text


# ----------------- command line -----------------

def test_cli_success(capsys):
    assert cli.main(["butterfly", "b1=10", "b2=11"]) == 0
    captured = capsys.readouterr()
    assert "out2 = 11" in captured.out
    assert captured.err == ""


def test_cli_bad_config(capsys):
    assert cli.main(["prop1-combined", "n_b=3"]) == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_cli_verbose_logs_to_stderr(capsys, tmp_path):
    out = tmp_path / "fig1.json"
    assert cli.main(["fig1", "n_b=4", "verbose=1", f"out={out}"]) == 0
    captured = capsys.readouterr()
    assert "✅ fig1-loop" in captured.err
    assert f"wrote report: {out}" in captured.err
    assert out.exists()
