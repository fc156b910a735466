import pytest
from hypothesis import given, settings, strategies as st

from logic.errors import LengthMismatch
from logic.scenarios import run_butterfly
from logic.utils import bits_from_str, bits_to_str


def test_reference_streams():
    res = run_butterfly(bits_from_str("1011"), bits_from_str("0110"))
    assert bits_to_str(res.out1) == "1011"
    assert bits_to_str(res.out2) == "0110"
    assert bits_to_str(res.bottleneck_bits) == "1101"
    assert res.elapsed == 6


def test_equal_streams_send_zeros_over_the_bottleneck():
    b = bits_from_str("110100")
    res = run_butterfly(b, b)
    assert res.out1 == b and res.out2 == b
    assert set(res.bottleneck_bits) == {0}


def test_bottleneck_carries_one_bit_per_step():
    res = run_butterfly([1, 0, 1], [0, 0, 1])
    bottleneck = next(i for i, l in enumerate(res.traffic.net.links) if l.component == "bottleneck")
    assert res.traffic.max_load(bottleneck) == 1
    assert res.traffic.usage_by_link()[bottleneck] == 3
    assert res.traffic.violations() == []


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        run_butterfly([1, 0], [1])


def test_empty_streams():
    res = run_butterfly([], [])
    assert res.out1 == [] and res.out2 == [] and res.elapsed == 0


@settings(max_examples=100)
@given(st.integers(1, 128).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                        st.lists(st.integers(0, 1), min_size=n, max_size=n))
))
def test_every_stream_pair_is_recovered(streams):
    b1, b2 = streams
    res = run_butterfly(b1, b2)
    assert res.out1 == b1
    assert res.out2 == b2
    assert res.elapsed == len(b1) + 2
