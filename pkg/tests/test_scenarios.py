from fractions import Fraction

import pytest

from logic.errors import InvalidArgs, InvalidK
from logic.scenarios import (
    COMBINED,
    SIMULATION_BUDGET,
    combined_elapsed,
    fig1_elapsed,
    paper_literal_superdense_elapsed,
    qlnc_only_elapsed,
    run_combined,
    run_fig1_loop,
    run_qlnc_only,
    run_superdense_only,
    separation_ratios,
    superdense_only_elapsed,
)


# ----------------- closed forms -----------------

def test_reference_timings_k10():
    assert combined_elapsed(1000) == 503
    assert qlnc_only_elapsed(1000) == 1000
    assert superdense_only_elapsed(10, 1000) == 913
    assert paper_literal_superdense_elapsed(10, 1000) == 1103


def test_zero_payload_takes_no_time():
    assert combined_elapsed(0) == 0
    assert superdense_only_elapsed(4, 0) == 0
    assert fig1_elapsed(0) == 0


def test_separation_at_k19():
    qlnc, sd = separation_ratios(19, 40000)
    assert qlnc == Fraction(40000, 20003)
    assert sd == Fraction(38003, 20003)
    assert min(qlnc, sd) >= Fraction(1899, 1000)
    assert qlnc >= Fraction(1999, 1000)


@pytest.mark.parametrize("k", [2, 3, 10, 19])
def test_combined_strictly_beats_both_baselines(k):
    # below n_b = 8 the latency constant dominates
    for n_b in range(8, 400, 2):
        c = combined_elapsed(n_b)
        assert c < qlnc_only_elapsed(n_b)
        assert c < superdense_only_elapsed(k, n_b)


def test_closed_forms_are_monotone_in_n_b():
    for f in (combined_elapsed, qlnc_only_elapsed, fig1_elapsed):
        values = [f(n) for n in range(0, 200, 2)]
        assert values == sorted(values)
    sd = [superdense_only_elapsed(5, n) for n in range(200)]
    assert sd == sorted(sd)


def test_latency_constant_shifts_combined():
    assert combined_elapsed(1000, latency_constant=4) == 504


# ----------------- simulated runs -----------------

def test_prop1_compare_reference_numbers():
    c = run_combined(10, 1000)
    q = run_qlnc_only(10, 1000)
    s = run_superdense_only(10, 1000)
    assert (c.elapsed, q.elapsed, s.elapsed) == (503, 1000, 913)
    assert s.paper_literal_elapsed == 1103
    assert s.steady_rate == Fraction(11, 10)
    assert c.steady_rate == 2 and q.steady_rate == 1
    assert all(r.simulated and r.payload_ok for r in (c, q, s))
    assert c.per_pair_bits == (1000,) * 10
    assert c.avg_rate == Fraction(1000, 503)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_superdense_only_simulation_matches_closed_form(k):
    for n_b in range(0, 41):
        r = run_superdense_only(k, n_b)
        assert r.elapsed == superdense_only_elapsed(k, n_b), n_b
        assert r.payload_ok


@pytest.mark.parametrize("k", [2, 5])
def test_combined_simulation_matches_closed_form(k):
    for n_b in range(0, 30, 2):
        r = run_combined(k, n_b)
        assert r.elapsed == combined_elapsed(n_b)
        assert r.payload_ok
        assert r.notes == ()


def test_combined_with_oracle():
    r = run_combined(3, 8, seed=4, oracle=True)
    assert r.payload_ok
    assert r.oracle_pairs_verified == 3
    # pairs are consumed the step after they land
    assert r.inventory_high_water == 1


def test_superdense_only_with_oracle():
    r = run_superdense_only(3, 12, seed=2, oracle=True)
    assert r.payload_ok and r.oracle_pairs_verified == 3


def test_runs_are_deterministic_per_seed():
    assert run_combined(3, 20, seed=9) == run_combined(3, 20, seed=9)
    assert run_superdense_only(3, 9, seed=1) == run_superdense_only(3, 9, seed=1)


def test_combined_latency_option():
    r = run_combined(2, 10, latency_constant=4)
    assert r.elapsed == 9
    assert r.notes and "latency constant 4" in r.notes[0]
    with pytest.raises(InvalidArgs):
        run_combined(2, 10, latency_constant=2)


def test_fig1_loop():
    r = run_fig1_loop(2)
    assert r.elapsed == 2 and r.payload_ok
    r = run_fig1_loop(100, seed=3, oracle=True)
    assert r.elapsed == fig1_elapsed(100) == 51
    assert r.steady_rate == 2
    assert r.traffic.violations() == []


def test_argument_checks():
    with pytest.raises(InvalidArgs):
        run_combined(3, 7)
    with pytest.raises(InvalidArgs):
        run_qlnc_only(3, -1)
    with pytest.raises(InvalidK):
        run_superdense_only(1, 10)
    with pytest.raises(InvalidArgs):
        run_fig1_loop(3)


def test_large_runs_fall_back_to_closed_form():
    n_b = SIMULATION_BUDGET // 4 + 2
    r = run_combined(2, n_b)
    assert not r.simulated
    assert r.mode == COMBINED
    assert r.elapsed == combined_elapsed(n_b)
    assert r.payload_ok is None


def test_log_func_gets_a_summary_line():
    lines = []
    run_qlnc_only(2, 4, log_func=lines.append)
    assert lines == ["✅ qlnc-only k=2 n_b=4: elapsed 4, 8 link uses"]


def test_separation_grows_with_k():
    ratios = [min(separation_ratios(k, 40000)) for k in range(2, 20)]
    assert ratios == sorted(ratios)


def test_simulated_runs_keep_link_discipline():
    for r in (run_combined(4, 16, oracle=True), run_superdense_only(4, 17), run_qlnc_only(4, 5), run_fig1_loop(6)):
        assert r.traffic.violations() == []


@pytest.mark.parametrize("k", range(5, 9))
def test_superdense_only_serves_every_pair(k):
    n_b = 3 * k + 1
    r = run_superdense_only(k, n_b)
    assert r.payload_ok
    assert r.per_pair_bits == (n_b,) * k
    assert r.elapsed == superdense_only_elapsed(k, n_b)


def test_superdense_only_k10_longer_payload():
    assert run_superdense_only(10, 1100).elapsed == 1003


def test_bell_pairs_are_spent_after_they_land():
    # every superdense send settles against a pair that landed a step earlier
    assert run_fig1_loop(6).inventory_high_water == 1
    assert run_combined(2, 12, latency_constant=5).inventory_high_water == 1
    assert run_superdense_only(3, 12).inventory_high_water >= 1
