"""The dispersion function ``Lambda(alpha) = max_deg - theta(alpha)`` and its maximum.

``Lambda`` is strictly concave, so plain gradient ascent with a backtracking
line search finds its unique maximiser ``alpha_star`` and the spectral
bottom ``lambda0 = Lambda(alpha_star)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .floquet import _alpha, assemble_dq, assemble_q
from .graph import PeriodicGraph
from .perron import PerronResult, perron_eigen

ARMIJO_C = 1e-4
DEFAULT_GRAD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DispersionPoint:
    alpha: np.ndarray
    theta: float
    lam: float
    gradient: np.ndarray
    perron: PerronResult


@dataclass(frozen=True, eq=False)
class Lambda0Result:
    lambda0: float
    alpha_star: np.ndarray
    gradient_norm: float
    iterations: int


def _solve(g: PeriodicGraph, alpha, tol, start=None) -> tuple[np.ndarray, PerronResult]:
    fm = assemble_q(g, alpha)
    # support of Q_alpha does not depend on alpha; validation covers irreducibility
    pr = perron_eigen(fm.entries, tol=tol, base_index=g.index[g.base_vertex],
                      start=start, start_left=start, check=False)
    return fm.alpha, pr


def _gradient(g: PeriodicGraph, alpha: np.ndarray, pr: PerronResult) -> np.ndarray:
    dq = assemble_dq(g, alpha)
    # left is normalised so that left @ right = 1
    return -np.einsum("i,kij,j->k", pr.left, dq, pr.right)


def lambda_at(g: PeriodicGraph, alpha, tol: float = 1e-12) -> DispersionPoint:
    """``Lambda(alpha)`` together with its gradient."""
    a, pr = _solve(g, alpha, tol)
    lam = g.max_degree - pr.theta
    return DispersionPoint(a, pr.theta, lam, _gradient(g, a, pr), pr)


def lambda_value(g: PeriodicGraph, alpha, tol: float = 1e-12) -> float:
    """``Lambda(alpha)`` alone (skips the gradient)."""
    _, pr = _solve(g, alpha, tol)
    return g.max_degree - pr.theta


def lambda_gradient(g: PeriodicGraph, alpha, tol: float = 1e-12) -> np.ndarray:
    """``grad Lambda = -(left . dQ_k . right) / (left . right)``."""
    a, pr = _solve(g, alpha, tol)
    return _gradient(g, a, pr)


def spectral_lower_bound(g: PeriodicGraph, alpha, tol: float = 1e-12) -> float:
    """``max_deg - theta(alpha)``; never exceeds ``lambda0``."""
    return lambda_value(g, alpha, tol)


def find_lambda0(g: PeriodicGraph, grad_tol: float = DEFAULT_GRAD_TOL,
                 max_iter: int = 10_000, alpha0=None) -> Lambda0Result:
    """Maximise ``Lambda`` by gradient ascent with Armijo backtracking.

    Each iteration starts from step 1 and halves until the Armijo condition
    holds. Close to the optimum, decreases of ``Lambda`` fall below its
    rounding noise; a step is then also accepted when the change is within
    that noise and the directional derivative at the trial point shows the
    step did not overshoot the one-dimensional maximum by more than the
    Armijo margin allows.

    Raises
    ------
    ConvergenceError
        After ``max_iter`` iterations; ``best`` holds the last iterate as a
        :class:`Lambda0Result`.
    """
    pf_tol = min(1e-12, grad_tol * 0.1)
    d = g.dimension
    if d == 0:
        p = lambda_at(g, np.zeros(0), pf_tol)
        return Lambda0Result(p.lam, np.zeros(0), 0.0, 0)
    alpha = np.zeros(d) if alpha0 is None else _alpha(g, alpha0).copy()
    cur = lambda_at(g, alpha, pf_tol)
    it = 0
    while True:
        gnorm = float(np.linalg.norm(cur.gradient))
        if gnorm <= grad_tol:
            return Lambda0Result(cur.lam, cur.alpha, gnorm, it)
        if it >= max_iter:
            raise ConvergenceError(f"gradient norm {gnorm:g} > {grad_tol:g} after {it} iterations",
                                   best=Lambda0Result(cur.lam, cur.alpha, gnorm, it))
        it += 1
        g2 = gnorm * gnorm
        noise = 64 * np.finfo(float).eps * (g.max_degree + abs(cur.theta)) + cur.perron.width
        step = 1.0
        for _ in range(200):
            try:
                trial = lambda_at(g, cur.alpha + step * cur.gradient, pf_tol)
            except OverflowError:
                step *= 0.5
                continue
            gain = trial.lam - cur.lam
            if gain >= ARMIJO_C * step * g2:
                break
            slope = float(trial.gradient @ cur.gradient)
            if abs(gain) <= noise and slope >= (2 * ARMIJO_C - 1) * g2:
                break
            step *= 0.5
        else:
            raise ConvergenceError("line search failed to find an ascent step",
                                   best=Lambda0Result(cur.lam, cur.alpha, gnorm, it))
        cur = trial
