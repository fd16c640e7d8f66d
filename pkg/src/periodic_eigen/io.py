"""JSON documents read and written by the command line.

Floats are written with 17 significant digits so every value round-trips
bit for bit; output is otherwise canonical (fixed key order, no trailing
whitespace), which keeps repeated runs byte-identical.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .graph import Edge, PeriodicGraph, WindowFunction

GRAPH_KEYS = {"dimension", "vertices", "edges", "base_vertex"}
GRAPH_OPTIONAL = {"allow_self_loops"}


class SchemaError(ValueError):
    """A JSON document does not follow the expected layout."""


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x!r}")
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 2) -> str:
    """Serialise dicts, lists, strings, numbers, booleans and None."""
    return _dump(obj, indent, 0) + "\n"


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_dump(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
               for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def _number(x, what):
    _require(isinstance(x, (int, float)) and not isinstance(x, bool), f"{what} must be a number")
    return float(x)


def graph_from_json(doc: dict) -> PeriodicGraph:
    """Build a graph from the on-disk layout; unknown keys are rejected."""
    _require(isinstance(doc, dict), "graph document must be an object")
    keys = set(doc)
    _require(GRAPH_KEYS <= keys, f"graph is missing keys {sorted(GRAPH_KEYS - keys)}")
    extra = keys - GRAPH_KEYS - GRAPH_OPTIONAL
    _require(not extra, f"unknown graph keys {sorted(extra)}")
    d = doc["dimension"]
    _require(isinstance(d, int) and not isinstance(d, bool) and d >= 0,
             "dimension must be a nonnegative integer")
    vertices, potential = [], {}
    _require(isinstance(doc["vertices"], list), "vertices must be an array")
    for v in doc["vertices"]:
        _require(isinstance(v, dict) and set(v) == {"name", "potential"},
                 "each vertex needs exactly 'name' and 'potential'")
        _require(isinstance(v["name"], str), "vertex names must be strings")
        vertices.append(v["name"])
        potential[v["name"]] = _number(v["potential"], f"potential of {v['name']}")
    edges = []
    _require(isinstance(doc["edges"], list), "edges must be an array")
    for i, e in enumerate(doc["edges"]):
        _require(isinstance(e, dict) and set(e) == {"tail", "head", "offset", "weight"},
                 f"edge {i} needs exactly 'tail', 'head', 'offset', 'weight'")
        _require(isinstance(e["tail"], str) and isinstance(e["head"], str),
                 f"edge {i} endpoints must be strings")
        off = e["offset"]
        _require(isinstance(off, list) and all(isinstance(z, int) and not isinstance(z, bool)
                                               for z in off),
                 f"edge {i} offset must be an integer array")
        edges.append(Edge(e["tail"], e["head"], tuple(off), _number(e["weight"], f"edge {i} weight")))
    _require(isinstance(doc["base_vertex"], str), "base_vertex must be a string")
    loops = doc.get("allow_self_loops", False)
    _require(isinstance(loops, bool), "allow_self_loops must be a boolean")
    return PeriodicGraph(d, tuple(vertices), potential, tuple(edges), doc["base_vertex"], loops)


def graph_to_json(g: PeriodicGraph) -> dict:
    doc = {
        "dimension": g.dimension,
        "vertices": [{"name": v, "potential": float(g.potential[v])} for v in g.vertices],
        "edges": [{"tail": e.tail, "head": e.head, "offset": list(e.offset), "weight": e.weight}
                  for e in g.edges],
        "base_vertex": g.base_vertex,
    }
    if g.allow_self_loops:
        doc["allow_self_loops"] = True
    return doc


def load_graph(path) -> PeriodicGraph:
    with open(path, encoding="utf-8") as fh:
        return graph_from_json(json.load(fh))


def window_to_json(f: WindowFunction) -> dict:
    """Window function layout: box plus one record per cell, lexicographic."""
    values = []
    for z, v in f.cells():
        values.append({"offset": list(z), "vertex": v, "value": f[z, v]})
    return {"box": [list(b) for b in f.box], "values": values}


def window_from_json(doc: dict, vertices) -> WindowFunction:
    _require(isinstance(doc, dict) and set(doc) == {"box", "values"},
             "window document needs exactly 'box' and 'values'")
    box = tuple(tuple(int(x) for x in b) for b in doc["box"])
    _require(all(len(b) == 2 and b[0] <= b[1] for b in box), "box entries must be [lo, hi]")
    vertices = tuple(vertices)
    shape = tuple(hi - lo + 1 for lo, hi in box) + (len(vertices),)
    vals = np.full(shape, np.nan)
    col = {v: j for j, v in enumerate(vertices)}
    for rec in doc["values"]:
        _require(set(rec) == {"offset", "vertex", "value"}, "bad window value record")
        z = tuple(int(x) for x in rec["offset"])
        _require(len(z) == len(box) and all(lo <= a <= hi for a, (lo, hi) in zip(z, box)),
                 f"offset {list(z)} outside the box")
        _require(rec["vertex"] in col, f"unknown vertex {rec['vertex']!r}")
        vals[tuple(a - lo for a, (lo, _) in zip(z, box)) + (col[rec["vertex"]],)] = \
            _number(rec["value"], "window value")
    _require(not np.isnan(vals).any(), "window does not cover every cell of box x V")
    return WindowFunction(box, vertices, vals)


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
