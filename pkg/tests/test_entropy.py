import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polybimatroid.bisets import Biset, all_bisets
from polybimatroid.entropy import (
    DiscreteReadings,
    EntropyOracle,
    ReadingTable,
    discretize,
    entropy,
    equal_width_bins,
    ingest,
)
from polybimatroid.errors import ReadingsError

from conftest import TABLE1_HUMID, TABLE1_TEMP, random_entropy_oracle

HEADER = "location,timestep,temperature,humidity\n"


def write(tmp_path, body, name="r.csv"):
    p = tmp_path / name
    p.write_text(body)
    return p


def test_ingest_table1_matches_source(table1_path):
    rt = ingest(table1_path)
    assert rt.categorical
    assert rt.locations == (1, 2, 3)
    assert rt.timesteps == tuple(range(1, 8))
    for row, loc in enumerate(rt.locations):
        assert [("low", "high")[int(v)] for v in rt.temp[row]] == TABLE1_TEMP[loc]
        assert [("humid", "dry")[int(v)] for v in rt.humid[row]] == TABLE1_HUMID[loc]


def test_ingest_empty_file(tmp_path):
    with pytest.raises(ReadingsError, match="empty"):
        ingest(write(tmp_path, ""))


def test_ingest_incomplete_grid(tmp_path):
    rows = [f"{l},{d},20.0,30.0" for l in (1, 2) for d in range(1, 6) if (l, d) != (2, 5)]
    with pytest.raises(ReadingsError, match="location 2, timestep 5"):
        ingest(write(tmp_path, HEADER + "\n".join(rows) + "\n"))


def test_ingest_duplicate_and_parse_errors(tmp_path):
    with pytest.raises(ReadingsError, match="line 3.*duplicate"):
        ingest(write(tmp_path, HEADER + "1,1,2.0,3.0\n1,1,2.5,3.0\n"))
    with pytest.raises(ReadingsError, match="line 2"):
        ingest(write(tmp_path, HEADER + "1,1,warm,3.0\n"))
    with pytest.raises(ReadingsError, match="header"):
        ingest(write(tmp_path, "a,b,c,d\n1,1,2,3\n"))
    with pytest.raises(ReadingsError, match="positive"):
        ingest(write(tmp_path, HEADER + "0,1,2,3\n"))


def test_ingest_numeric(tmp_path):
    rt = ingest(write(tmp_path, HEADER + "2,1,10.5,40\n1,1,11,41\n1,2,12,42\n2,2,13,43\n"))
    assert not rt.categorical
    assert rt.locations == (1, 2)
    np.testing.assert_allclose(rt.temp, [[11, 12], [10.5, 13]])


def test_equal_width_bins_boundaries():
    assert equal_width_bins(np.array([10.0, 20.0, 30.0, 40.0]), 3).tolist() == [0, 1, 2, 2]
    assert equal_width_bins(np.array([10.0, 25.0, 40.0]), 3)[-1] == 2
    assert equal_width_bins(np.array([5.0, 5.0, 5.0]), 2).tolist() == [0, 0, 0]


def test_discretize_global_bins():
    rt = ReadingTable((1, 2), (1, 2), np.array([[10.0, 20.0], [30.0, 40.0]]), np.full((2, 2), 7.0))
    d = discretize(rt, 3, 2)
    assert d.temp_bins.tolist() == [[0, 1], [2, 2]]
    assert d.humid_bins.tolist() == [[0, 0], [0, 0]]


def test_worked_values(table1_oracle):
    h = entropy(table1_oracle, Biset({0, 2}, {1}, 3))
    assert h == pytest.approx(-(2 * (2 / 7) * math.log2(2 / 7) + 3 * (1 / 7) * math.log2(1 / 7)), abs=1e-12)
    assert h == pytest.approx(2.24, abs=5e-3)
    h = entropy(table1_oracle, Biset({1}, {2}, 3))
    assert h == pytest.approx(-sum(p * math.log2(p) for p in (4 / 7, 2 / 7, 1 / 7)), abs=1e-12)
    assert h == pytest.approx(1.38, abs=5e-3)
    assert table1_oracle() == 0.0


def test_wide_codes_fall_back_to_row_unique():
    rng = np.random.default_rng(0)
    n, t = 45, 40
    o = random_entropy_oracle(rng, n, t)
    b = Biset(range(0, n, 2), range(1, n, 2), n)
    assert o.evaluate(b) == pytest.approx(math.log2(t), abs=1e-12)


def test_bins_validated():
    with pytest.raises(ValueError):
        DiscreteReadings(np.array([[3]]), np.array([[0]]), 3, 2)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(1, 5), st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_entropy_bounds_and_monotone(n, t, seed):
    o = random_entropy_oracle(np.random.default_rng(seed), n, t)
    cap = math.log2(t)
    for b in all_bisets(n):
        h = o.evaluate(b)
        assert -1e-12 <= h <= cap + 1e-12
        for i in set(range(n)) - b.support:
            assert o(b.s1 | {i}, b.s2) >= h - 1e-12
            assert o(b.s1, b.s2 | {i}) >= h - 1e-12


def test_order_independent_entropy():
    rng = np.random.default_rng(1)
    o = random_entropy_oracle(rng, 4, 25)
    plain = EntropyOracle(o.readings, memoize=False)
    b = Biset({3, 0}, {2}, 4)
    assert o.evaluate(b) == plain.evaluate(b) == plain.evaluate(Biset({0, 3}, {2}, 4))
