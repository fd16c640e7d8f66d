import numpy as np
import pytest

from oracles import charpoly, oracle_theta, random_irreducible
from periodic_eigen.errors import ConvergenceError, IrreducibilityError
from periodic_eigen.perron import perron_eigen


def test_charpoly_oracle_sanity():
    assert charpoly([[1, 2], [3, 4]]) == [1.0, -5.0, -2.0]


@pytest.mark.parametrize("m, theta", [
    ([[0, 1], [1, 0]], 1.0),
    ([[2, 1], [1, 2]], 3.0),
    ([[1, 2], [3, 4]], (5 + 33 ** 0.5) / 2),
])
def test_examples(m, theta):
    r = perron_eigen(m)
    assert r.theta == pytest.approx(theta, rel=1e-12)
    assert r.width <= 1e-10
    assert r.right[0] == 1.0
    if m[0][0] == m[1][1]:
        np.testing.assert_allclose(r.right, [1.0, 1.0], rtol=1e-12)


def test_random_against_charpoly(rng):
    for n in range(1, 7):
        for sparse in (False, True):
            for _ in range(10):
                m = random_irreducible(rng, n, sparse)
                r = perron_eigen(m)
                assert r.cw_lower <= r.theta <= r.cw_upper
                assert r.width <= 1e-10
                assert abs(r.theta - oracle_theta(m)) <= 1e-8 * oracle_theta(m)
                assert np.all(r.right > 0) and np.all(r.left > 0)
                resid = np.max(np.abs(m @ r.right - r.theta * r.right))
                assert resid <= 1e-10 * np.max(np.abs(m).sum(axis=1)) * np.max(r.right)


def test_row_sum_bracketing(rng):
    for n in range(1, 7):
        for _ in range(10):
            m = random_irreducible(rng, n, sparse=True)
            r = perron_eigen(m)
            rows = m.sum(axis=1)
            assert rows.min() <= r.cw_lower and r.cw_upper <= rows.max()
            assert rows.min() <= r.theta <= rows.max()


def test_monotone_in_entries(rng):
    for _ in range(20):
        n = int(rng.integers(2, 6))
        m = random_irreducible(rng, n)
        i, j = rng.integers(0, n, size=2)
        bigger = m.copy()
        bigger[i, j] += 0.05
        assert perron_eigen(bigger).cw_lower > perron_eigen(m).cw_upper


def test_transpose(rng):
    for _ in range(20):
        n = int(rng.integers(1, 7))
        m = random_irreducible(rng, n, sparse=True)
        a, b = perron_eigen(m), perron_eigen(m.T)
        assert abs(a.theta - b.theta) <= max(a.width, b.width) + 1e-15 * a.theta
        np.testing.assert_allclose(a.left / a.left[0], b.right / b.right[0], rtol=1e-9)
        assert float(a.left @ a.right) == pytest.approx(1.0, rel=1e-14)


def test_reducible_rejected():
    with pytest.raises(IrreducibilityError):
        perron_eigen(np.eye(2))
    with pytest.raises(IrreducibilityError):
        perron_eigen([[1.0, 1.0], [0.0, 1.0]])


def test_convergence_failure_carries_best():
    with pytest.raises(ConvergenceError) as info:
        perron_eigen([[1.0, 2.0], [3.0, 4.0]], max_iter=2)
    best = info.value.best
    assert best is not None and best.cw_lower <= best.cw_upper


def test_input_checks():
    with pytest.raises(ValueError):
        perron_eigen([[1.0, -1.0], [1.0, 1.0]])
    with pytest.raises(ValueError):
        perron_eigen(np.ones((2, 3)))
