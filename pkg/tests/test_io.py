import json

import numpy as np
import pytest

from conftest import dimer, line, random_graph
from periodic_eigen import io
from periodic_eigen.graph import WindowFunction


def test_float_format_round_trips(rng):
    for x in rng.normal(scale=1e3, size=200):
        assert float(io.format_float(x)) == x
    assert io.format_float(1.0) == "1.0"
    assert io.format_float(0.0) == "0.0"
    assert io.format_float(0.1) == "0.10000000000000001"
    with pytest.raises(ValueError):
        io.format_float(float("nan"))


def test_dumps_is_valid_json():
    doc = {"a": [1, 2.5, -0.0], "b": {"c": None, "d": True}, "e": [], "f": [{"x": "y"}],
           "g": np.array([1.0, 2.0])}
    assert json.loads(io.dumps(doc)) == {"a": [1, 2.5, 0.0], "b": {"c": None, "d": True},
                                        "e": [], "f": [{"x": "y"}], "g": [1.0, 2.0]}


def test_graph_round_trip(rng):
    for g in [line(), dimer()] + [random_graph(rng) for _ in range(10)]:
        h = io.graph_from_json(json.loads(io.dumps(io.graph_to_json(g))))
        assert h.vertices == g.vertices and h.edges == g.edges
        assert h.potential == g.potential and h.base_vertex == g.base_vertex


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(extra=1),
    lambda d: d.pop("base_vertex"),
    lambda d: d["vertices"][0].update(colour="red"),
    lambda d: d["edges"][0].update(offset=[0.5]),
    lambda d: d["edges"][0].update(weight="1"),
    lambda d: d.update(dimension=-1),
    lambda d: d.update(allow_self_loops="yes"),
])
def test_graph_schema_rejections(mutate):
    doc = io.graph_to_json(line())
    mutate(doc)
    with pytest.raises(io.SchemaError):
        io.graph_from_json(doc)


def test_window_round_trip(rng):
    f = WindowFunction(((-1, 1), (0, 2)), ("a", "b"), rng.uniform(size=(3, 3, 2)))
    back = io.window_from_json(json.loads(io.dumps(io.window_to_json(f))), ("a", "b"))
    assert back.box == f.box
    np.testing.assert_array_equal(back.values, f.values)


def test_window_must_cover_box():
    doc = {"box": [[0, 1]], "values": [{"offset": [0], "vertex": "a", "value": 1.0}]}
    with pytest.raises(io.SchemaError, match="cover"):
        io.window_from_json(doc, ("a",))
