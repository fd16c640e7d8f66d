import math

import numpy as np
import pytest

from conftest import LN2, random_graph
from periodic_eigen.floquet import (assemble_dq, assemble_q, ground_state_operator,
                                    is_irreducible)
from periodic_eigen.graph import Edge, PeriodicGraph


def test_line_examples(L1):
    assert assemble_q(L1, [0.0]).entries.tolist() == [[2.0]]
    assert assemble_q(L1, [LN2]).entries == pytest.approx(np.array([[2.5]]), rel=1e-15)
    assert ground_state_operator(L1, [0.0]).tolist() == [[0.0]]
    assert ground_state_operator(L1, [LN2]) == pytest.approx(np.array([[-0.5]]), rel=1e-15)


@pytest.mark.parametrize("alpha", [-1.3, 0.0, 0.4, 2.0])
def test_dimer_matrix(D1, alpha):
    q = assemble_q(D1, [alpha]).entries
    expected = np.array([[0.0, 1 + 2 * math.exp(-alpha)], [1 + 2 * math.exp(alpha), 0.0]])
    np.testing.assert_allclose(q, expected, rtol=1e-15, atol=0)
    assert is_irreducible(q)


def test_dimer_ground_state(D1):
    assert ground_state_operator(D1, [0.0]).tolist() == [[3.0, -3.0], [-3.0, 3.0]]


def test_reducible_detected():
    assert not is_irreducible(np.eye(2))
    assert is_irreducible(np.array([[2.0]]))


def test_overflow_names_edge(L1):
    with pytest.raises(OverflowError, match="edge"):
        assemble_q(L1, [701.0])


def test_random_graphs_irreducible(rng):
    for _ in range(30):
        g = random_graph(rng)
        alpha = rng.uniform(-3, 3, size=g.dimension)
        q = assemble_q(g, alpha).entries
        assert np.all(q >= 0)
        assert is_irreducible(q)


def test_ground_state_plus_q_is_maxdeg(rng):
    for _ in range(30):
        g = random_graph(rng)
        alpha = rng.uniform(-2, 2, size=g.dimension)
        q = assemble_q(g, alpha).entries
        gso = ground_state_operator(g, alpha)
        ident = g.max_degree * np.eye(g.n_vertices)
        assert np.array_equal(gso, ident - q)
        # adding q back is exact up to the rounding of the diagonal difference
        assert np.all(np.abs(gso + q - ident) <= np.spacing(np.maximum(np.abs(q), g.max_degree)))


def test_symmetric_weights_transpose(rng):
    for _ in range(30):
        g = random_graph(rng, symmetric=True)
        alpha = rng.uniform(-2, 2, size=g.dimension)
        a = assemble_q(g, alpha).entries
        b = assemble_q(g, -alpha).entries
        np.testing.assert_allclose(a, b.T, rtol=1e-12, atol=0)


def test_entries_log_convex(rng):
    for _ in range(30):
        g = random_graph(rng)
        a1, a2 = rng.uniform(-2, 2, size=(2, g.dimension))
        q1, q2 = assemble_q(g, a1).entries, assemble_q(g, a2).entries
        qm = assemble_q(g, 0.5 * (a1 + a2)).entries
        mask = qm > 0
        assert np.all(np.log(qm[mask]) <= 0.5 * (np.log(q1[mask]) + np.log(q2[mask])) + 1e-12)


def test_derivative_matches_finite_difference(rng):
    h = 1e-6
    for _ in range(20):
        g = random_graph(rng)
        alpha = rng.uniform(-1, 1, size=g.dimension)
        dq = assemble_dq(g, alpha)
        for k in range(g.dimension):
            e = np.zeros(g.dimension)
            e[k] = h
            fd = (assemble_q(g, alpha + e).entries - assemble_q(g, alpha - e).entries) / (2 * h)
            np.testing.assert_allclose(dq[k], fd, rtol=1e-6, atol=1e-8)


def test_entry_formula(rng):
    g = PeriodicGraph.build(2, ["a", "b"], [
        Edge("a", "b", (1, 0), 0.7), Edge("b", "a", (-1, 0), 1.1),
        Edge("a", "b", (0, 1), 0.3), Edge("b", "a", (0, -1), 2.0),
        Edge("a", "a", (1, 1), 0.5), Edge("a", "a", (-1, -1), 0.5)])
    alpha = np.array([0.3, -0.8])
    q = assemble_q(g, alpha).entries
    deg_a, deg_b = 0.7 + 0.3 + 1.0, 1.1 + 2.0
    assert q[0, 1] == pytest.approx(0.7 * math.exp(0.3) + 0.3 * math.exp(-0.8), rel=1e-15)
    assert q[1, 0] == pytest.approx(1.1 * math.exp(-0.3) + 2.0 * math.exp(0.8), rel=1e-15)
    assert q[0, 0] == pytest.approx(0.5 * math.exp(-0.5) + 0.5 * math.exp(0.5)
                                    + max(deg_a, deg_b) - deg_a, rel=1e-15)
    assert q[1, 1] == 0.0
