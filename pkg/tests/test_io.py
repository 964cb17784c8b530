import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symbreak import io
from symbreak.ai_dynamics import AiScenario
from symbreak.exact import GridSpec, wigner
from symbreak.tomography import marginals, sample_quadratures, uniform_angles


@given(st.lists(st.floats(allow_nan=False), min_size=1, max_size=20))
def test_float_formatting_round_trips(values):
    assert [float(io.fmt(v)) for v in values] == values


def test_infinity_literal():
    assert io.fmt(math.inf) == "inf" and io.fmt(-math.inf) == "-inf"
    assert io.fmt(True) == "1" and io.fmt(np.int64(7)) == "7"


def test_table_round_trip(tmp_path):
    path = io.write_table(tmp_path / "a" / "t.csv", ["x", "label", "y"],
                          [np.array([0.1, 1 / 3]), ["p", "q"], [math.inf, -2.5e-300]])
    back = io.read_table(path)
    assert back["x"].tolist() == [0.1, 1 / 3]
    assert back["label"].tolist() == ["p", "q"]
    assert back["y"][0] == math.inf and back["y"][1] == -2.5e-300
    assert path.read_text().splitlines()[0] == "x,label,y"


def test_wigner_round_trip(tmp_path):
    s = AiScenario.from_reduced(100.0, 1.0, 0.1)
    g = wigner(s, 1.3, GridSpec(24, 8.0))
    csv_path, json_path = io.write_wigner(tmp_path / "w", g)
    assert csv_path.suffix == ".csv" and json_path.suffix == ".json"
    back = io.read_wigner(tmp_path / "w")
    assert np.array_equal(back.values, g.values)
    assert np.array_equal(back.q_axis, g.q_axis) and np.array_equal(back.p_axis, g.p_axis)
    assert back.t == g.t and back.n_atoms == g.n_atoms


def test_quadratures_and_samples(tmp_path):
    s = AiScenario.from_reduced(100.0, 1.0, 1.0)
    g = wigner(s, s.ramp.t0, GridSpec(32, 8.0))
    q = marginals(g, uniform_angles(5))
    back = io.read_quadratures(io.write_quadratures(tmp_path / "q.csv", q))
    assert np.array_equal(back.angles, q.angles) and np.array_equal(back.distributions, q.distributions)
    sampled = sample_quadratures(q, 10, seed=1)
    path = io.write_samples(tmp_path / "s.csv", sampled.angles, sampled.samples)
    table = io.read_table(path)
    assert table["value"].size == 50
    assert np.array_equal(table["value"][:10], sampled.samples[0])
    assert table["sample_index"][:10].tolist() == list(range(10))


def test_checksum_and_json(tmp_path):
    p = io.write_json(tmp_path / "m.json", {"a": np.float64(1.5), "b": np.arange(3)})
    assert p.read_text().startswith("{")
    assert len(io.sha256(p)) == 64
    with pytest.raises(TypeError):
        io.write_json(tmp_path / "bad.json", {"x": object()})
