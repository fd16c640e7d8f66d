import math

import numpy as np
import pytest

from periodic_eigen.graph import Edge, PeriodicGraph, validate


def line(potential=0.0):
    """The integer line with unit weights."""
    return PeriodicGraph.build(1, ["a"], [Edge("a", "a", (1,), 1.0), Edge("a", "a", (-1,), 1.0)],
                               potential={"a": potential})


def dimer():
    return PeriodicGraph.build(1, ["a", "b"], [
        Edge("a", "b", (0,), 1.0), Edge("b", "a", (0,), 1.0),
        Edge("b", "a", (1,), 2.0), Edge("a", "b", (-1,), 2.0),
    ])


def square():
    edges = [Edge("a", "a", z, 1.0) for z in [(1, 0), (-1, 0), (0, 1), (0, -1)]]
    return PeriodicGraph.build(2, ["a"], edges)


def random_graph(rng, max_vertices=4, max_dim=2, symmetric=False, potential=True):
    """A random admissible graph: support-symmetric, connected, cycle lattice Z^d.

    Weights are drawn from [0.1, 3]; reverse edges get independent weights
    unless ``symmetric``.
    """
    d = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_vertices + 1))
    names = [f"v{i}" for i in range(n)]
    pairs = {}

    def add(t, h, z):
        z = tuple(int(x) for x in z)
        if t == h and not any(z):
            return
        back = (h, t, tuple(-x for x in z))
        if (t, h, z) in pairs:
            return
        w = float(rng.uniform(0.1, 3.0))
        pairs[(t, h, z)] = w
        pairs[back] = w if symmetric else float(rng.uniform(0.1, 3.0))

    for i in range(1, n):
        add(names[int(rng.integers(0, i))], names[i], rng.integers(-1, 2, size=d))
    for k in range(d):
        unit = np.zeros(d, dtype=int)
        unit[k] = 1
        v = names[int(rng.integers(0, n))]
        add(v, v, unit)
    for _ in range(int(rng.integers(0, 3))):
        add(names[int(rng.integers(0, n))], names[int(rng.integers(0, n))],
            rng.integers(-1, 2, size=d))
    edges = [Edge(t, h, z, w) for (t, h, z), w in pairs.items()]
    pot = {v: float(rng.uniform(0.0, 1.0)) if potential else 0.0 for v in names}
    g = PeriodicGraph.build(d, names, edges, potential=pot)
    assert validate(g).ok
    return g


@pytest.fixture
def L1():
    return line()


@pytest.fixture
def D1():
    return dimer()


@pytest.fixture
def Z2():
    return square()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


LN2 = math.log(2.0)
