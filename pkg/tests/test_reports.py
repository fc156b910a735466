import json
from fractions import Fraction

import pytest

from logic.diagnostics import compare_modes, separation_sweep, traffic_frame
from logic.errors import FileError
from logic.reports import (
    format_table,
    read_reports,
    report_to_dict,
    reports_from_json,
    reports_to_json,
    write_reports,
)
from logic.scenarios import run_combined, run_fig1_loop, run_qlnc_only, run_superdense_only


def _sample():
    return [
        run_combined(3, 6, seed=1),
        run_qlnc_only(3, 6, seed=1),
        run_superdense_only(3, 6, seed=1),
        run_superdense_only(10, 1000, simulate=False),
    ]


def test_reports_survive_the_file_format(tmp_path):
    reports = _sample()
    path = tmp_path / "r.json"
    write_reports(reports, path)
    again = read_reports(path)
    assert again == reports
    assert reports_to_json(again) == path.read_text(encoding="utf-8")


def test_report_fields():
    sd = report_to_dict(run_superdense_only(10, 1000, simulate=False))
    assert sd["elapsed_steps"] == 913
    assert sd["paper_literal_elapsed"] == 1103
    assert sd["avg_rate"] == "1000/913"
    assert sd["steady_rate"] == "11/10"
    combined = report_to_dict(run_combined(2, 4))
    assert "paper_literal_elapsed" not in combined
    assert combined["payload_ok"] is True


def test_malformed_reports():
    with pytest.raises(FileError):
        reports_from_json("[]")
    with pytest.raises(FileError):
        reports_from_json("{oops")
    with pytest.raises(FileError):
        reports_from_json(json.dumps({"reports": [{"mode": "combined"}]}))


def test_table_writer():
    text = format_table(_sample())
    header = text.splitlines()[0]
    for col in ("mode", "elapsed_steps", "avg_rate", "steady_rate"):
        assert col in header
    assert "1103" in text
    assert format_table([]) == "(no reports)"


def test_compare_modes_against_combined():
    df = compare_modes(_sample()[:3])
    assert list(df["mode"]) == ["combined", "qlnc-only", "superdense-only"]
    assert df.loc[0, "vs_combined"] == "1/1"
    assert df.loc[1, "vs_combined"] == "1/1"  # n_b=6: 6 steps each
    assert compare_modes([]).empty


def test_separation_sweep():
    df = separation_sweep([10, 19], 40000)
    row = df[df["k"] == 19].iloc[0]
    assert row["superdense_only_ratio"] == "38003/20003"
    assert row["qlnc_only_ratio"] == "40000/20003"
    assert Fraction(row["min_ratio"]) == Fraction(38003, 20003)


def test_traffic_frame():
    r = run_fig1_loop(4)
    df = traffic_frame(r.traffic)
    assert set(df["component"]) == {"forward", "backward"}
    assert df["peak"].max() == 1
    assert df.set_index("component").loc["forward", "qubits"] == 2
