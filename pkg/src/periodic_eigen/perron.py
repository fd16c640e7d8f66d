"""Perron-Frobenius eigenpairs of irreducible nonnegative matrices.

Power iteration runs on ``m + I``; the unit shift puts a positive diagonal
under any irreducible pattern, which makes the matrix primitive and the
iteration convergent. Collatz-Wielandt ratios of every iterate bracket the
Perron root, so the returned enclosure is a certificate, not an estimate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, IrreducibilityError
from .floquet import support_strongly_connected

SHIFT = 1.0
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True, eq=False)
class PerronResult:
    theta: float
    right: np.ndarray
    left: np.ndarray
    cw_lower: float
    cw_upper: float
    iterations: int

    @property
    def width(self) -> float:
        return self.cw_upper - self.cw_lower


def perron_eigen(m, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                 base_index: int = 0, start=None, start_left=None,
                 check: bool = True) -> PerronResult:
    """Perron root and positive eigenvectors of an irreducible nonnegative matrix.

    Parameters
    ----------
    m : (n, n) array_like
        Nonnegative irreducible matrix.
    tol : float
        Target width of the Collatz-Wielandt enclosure, relative to
        ``max(1, theta)``.
    max_iter : int
        Iteration cap.
    base_index : int
        The right vector is scaled to 1 at this index.
    start, start_left : array_like, optional
        Positive starting vectors (default all ones).
    check : bool
        Verify irreducibility structurally before iterating.

    Returns
    -------
    PerronResult
        ``left`` is scaled so that ``left @ right == 1``.

    Raises
    ------
    IrreducibilityError
        If the support of ``m`` is not strongly connected, or an iterate
        loses positivity.
    ConvergenceError
        If the enclosure is still wider than requested after ``max_iter``
        steps; ``best`` holds the partial :class:`PerronResult`.
    """
    a = np.ascontiguousarray(m, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n or n == 0:
        raise ValueError("expected a nonempty square matrix")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError("matrix must be finite and nonnegative")
    if check and not support_strongly_connected(a):
        raise IrreducibilityError("matrix support is not strongly connected")
    x0 = np.ones(n) if start is None else np.asarray(start, dtype=float).copy()
    y0 = np.ones(n) if start_left is None else np.asarray(start_left, dtype=float).copy()
    if np.any(x0 <= 0) or np.any(y0 <= 0):
        raise ValueError("starting vectors must be positive")
    lo, hi, x, y, iters, status = _kernels.power_iteration(a, x0, y0, SHIFT, float(tol),
                                                          int(max_iter))
    if status == _kernels.STATUS_REDUCIBLE:
        raise IrreducibilityError("iterate lost positivity; matrix is not irreducible")
    # removing the shift can round the bounds past the row-sum bracket, which
    # is itself a valid enclosure
    rows = a.sum(axis=1)
    rmin, rmax = float(rows.min()), float(rows.max())
    lo, hi = min(max(lo, rmin), rmax), max(min(hi, rmax), rmin)
    res = _result(lo, hi, x, y, iters, base_index)
    if status != _kernels.STATUS_OK:
        raise ConvergenceError(
            f"Collatz-Wielandt enclosure [{lo!r}, {hi!r}] wider than tol={tol} "
            f"after {iters} iterations", best=res)
    return res


def _result(lo, hi, x, y, iters, base_index) -> PerronResult:
    right = x / x[base_index]
    left = y / float(y @ right)
    return PerronResult(0.5 * (lo + hi), right, left, float(lo), float(hi), int(iters))
