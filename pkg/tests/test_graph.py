import numpy as np
import pytest

from conftest import dimer, line, random_graph
from periodic_eigen.errors import DegenerateDegree, NoPathInWindow, WindowTooSmall
from periodic_eigen.graph import (Edge, PeriodicGraph, WindowFunction, apply_operator,
                                  apply_operator_window, degree, harnack_bound, shift,
                                  symmetrize, validate)


def test_line_is_valid(L1):
    assert validate(L1).ok


def test_index_two_cycle_lattice_rejected():
    edges = [Edge("a", "a", z, 1.0) for z in [(2, 0), (-2, 0), (0, 1), (0, -1)]]
    report = validate(PeriodicGraph.build(2, ["a"], edges))
    assert not report.ok
    assert "connectivity" in report.kinds()


def test_missing_reverse_edge_rejected():
    g = PeriodicGraph.build(1, ["a"], [Edge("a", "a", (1,), 1.0)])
    report = validate(g)
    assert "support_symmetry" in report.kinds()


def test_symmetrize_repairs_missing_reverse():
    g = PeriodicGraph.build(1, ["a"], [Edge("a", "a", (1,), 1.0)])
    fixed = symmetrize(g)
    assert validate(fixed).ok
    assert {e.key for e in fixed.edges} == {("a", "a", (1,)), ("a", "a", (-1,))}


@pytest.mark.parametrize("bad, kind", [
    (lambda: PeriodicGraph.build(1, ["a"], [Edge("a", "a", (1,), -1.0),
                                            Edge("a", "a", (-1,), 1.0)]), "weight"),
    (lambda: PeriodicGraph.build(1, ["a"], [Edge("a", "a", (0,), 1.0), Edge("a", "a", (1,), 1.0),
                                            Edge("a", "a", (-1,), 1.0)]), "self_loop"),
    (lambda: PeriodicGraph.build(1, ["a"], [Edge("a", "b", (1,), 1.0),
                                            Edge("a", "a", (-1,), 1.0)]), "vertex"),
    (lambda: PeriodicGraph.build(1, ["a"], [Edge("a", "a", (1, 0), 1.0),
                                            Edge("a", "a", (-1,), 1.0)]), "offset"),
    (lambda: PeriodicGraph.build(1, ["a"], [Edge("a", "a", (1,), 1.0), Edge("a", "a", (1,), 2.0),
                                            Edge("a", "a", (-1,), 1.0)]), "duplicate"),
])
def test_validation_kinds(bad, kind):
    report = validate(bad())
    assert not report.ok
    assert any(kind in k for k in report.kinds())


def test_disconnected_vertices_rejected():
    g = PeriodicGraph.build(1, ["a", "b"], [
        Edge("a", "a", (1,), 1.0), Edge("a", "a", (-1,), 1.0),
        Edge("b", "b", (1,), 1.0), Edge("b", "b", (-1,), 1.0)])
    assert "connectivity" in validate(g).kinds()


def test_degrees(L1, D1):
    assert degree(L1, "a") == 2.0
    assert degree(line(potential=5.0), "a") == 7.0
    assert degree(D1, "a") == 3.0 and degree(D1, "b") == 3.0
    with pytest.raises(KeyError):
        degree(L1, "zz")


def test_degree_invariant_under_relabel_and_gauge(rng):
    for _ in range(20):
        g = random_graph(rng)
        perm = list(reversed(g.vertices))
        relabel = {v: f"w_{v}" for v in g.vertices}
        h = PeriodicGraph.build(g.dimension, [relabel[v] for v in perm],
                                [Edge(relabel[e.tail], relabel[e.head], e.offset, e.weight)
                                 for e in g.edges],
                                potential={relabel[v]: g.potential[v] for v in g.vertices},
                                base_vertex=relabel[g.base_vertex])
        gauge = {v: rng.integers(-2, 3, size=g.dimension) for v in g.vertices}
        k = PeriodicGraph.build(g.dimension, g.vertices,
                                [Edge(e.tail, e.head,
                                      tuple(int(x) for x in np.add(e.offset, gauge[e.tail])
                                            - gauge[e.head]), e.weight) for e in g.edges],
                                potential=g.potential)
        for v in g.vertices:
            assert degree(h, relabel[v]) == degree(g, v)
            assert degree(k, v) == degree(g, v)


def _table(g, box, fn):
    return WindowFunction.from_callable(box, g.vertices, fn)


def test_apply_operator_examples(L1):
    box = ((-3, 3),)
    one = _table(L1, box, lambda z, v: 1.0)
    assert apply_operator(L1, one, ((0,), "a")) == 0.0
    pow2 = _table(L1, box, lambda z, v: 2.0 ** z[0])
    assert apply_operator(L1, pow2, ((0,), "a")) == -0.5
    delta = _table(L1, box, lambda z, v: float(z[0] == 0))
    assert apply_operator(L1, delta, ((0,), "a")) == 2.0
    with pytest.raises(WindowTooSmall):
        apply_operator(L1, one, ((3,), "a"))


def test_constant_gives_potential(rng):
    for _ in range(10):
        g = random_graph(rng)
        box = ((-2, 2),) * g.dimension
        one = _table(g, box, lambda z, v: 1.0)
        hf = apply_operator_window(g, one)
        centre = (2,) * g.dimension
        for j, v in enumerate(g.vertices):
            assert hf[centre + (j,)] == pytest.approx(g.potential[v], abs=1e-13)


def test_window_operator_matches_pointwise(rng):
    for _ in range(10):
        g = random_graph(rng)
        box = ((-3, 3),) * g.dimension
        f = WindowFunction(box, g.vertices, rng.uniform(0.5, 2.0, size=(7,) * g.dimension
                                                        + (g.n_vertices,)))
        hf = apply_operator_window(g, f, lam=0.3)
        for z, v in f.cells():
            idx = tuple(a + 3 for a in z) + (g.index[v],)
            try:
                ref = apply_operator(g, f, (z, v), lam=0.3)
            except WindowTooSmall:
                assert np.isnan(hf[idx])
                continue
            assert hf[idx] == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_shift_examples(L1):
    f = _table(L1, ((-2, 2),), lambda z, v: 2.0 ** z[0])
    same = shift(f, (0,))
    assert same.box == f.box and np.array_equal(same.values, f.values)
    moved = shift(f, (1,))
    assert moved.box == ((-1, 3),)
    for z in range(-1, 4):
        assert moved[(z,), "a"] == 2.0 ** (z - 1)
    twice = shift(shift(f, (1,)), (-3,))
    once = shift(f, (-2,))
    assert twice.box == once.box and np.array_equal(twice.values, once.values)


def test_harnack_examples(L1):
    assert harnack_bound(L1, ((0,), "a"), ((1,), "a")).constant == 0.5
    assert harnack_bound(L1, ((0,), "a"), ((2,), "a")).constant == 0.25
    same = harnack_bound(L1, ((0,), "a"), ((0,), "a"))
    assert same.constant == 1.0 and same.witness_path == ()


def test_harnack_path_product(D1):
    h = harnack_bound(D1, ((0,), "a"), ((2,), "b"))
    prod = 1.0
    for (z, v), (w, u) in zip(h.witness_path, h.witness_path[1:]):
        dz = tuple(b - a for a, b in zip(z, w))
        e = next(e for e in D1.out_edges(v) if e.head == u and e.offset == dz)
        prod *= e.weight / degree(D1, v)
    assert h.constant == pytest.approx(prod, rel=1e-14)


def test_harnack_errors(L1):
    with pytest.raises(DegenerateDegree):
        harnack_bound(L1, ((0,), "a"), ((1,), "a"), lam=2.0)
    with pytest.raises(NoPathInWindow):
        harnack_bound(L1, ((0,), "a"), ((5,), "a"), search_box=((0, 2),))


def test_harnack_bound_holds_for_superharmonic(L1):
    # 2^z has eigenvalue -0.5, so it is lam-superharmonic for every lam <= -0.5
    f = lambda z: 2.0 ** z
    for lam in (-0.5, -1.0, -3.0):
        for a, b in [(0, 1), (0, -1), (2, -2), (-3, 1)]:
            c = harnack_bound(L1, ((a,), "a"), ((b,), "a"), lam=lam).constant
            assert f(a) >= c * f(b)


def test_harnack_equality_case(L1):
    c = harnack_bound(L1, ((0,), "a"), ((1,), "a"), lam=0.0).constant
    assert abs(1.0 - c * 2.0) <= 1e-12


def test_harnack_positive_cycle_is_degenerate():
    # deg - lam = 0.5 > 0, but each edge factor is 2 so cycles blow up
    with pytest.raises(DegenerateDegree):
        harnack_bound(line(), ((0,), "a"), ((1,), "a"), lam=1.5)
