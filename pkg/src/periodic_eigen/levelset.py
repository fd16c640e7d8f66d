"""Tracing the level sets ``{alpha : Lambda(alpha) = lam}`` by rays from the maximiser.

Strict concavity makes ``Lambda`` strictly decreasing along every ray that
leaves ``alpha_star``, so each direction meets the level set exactly once.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, qmc

from .dispersion import Lambda0Result, find_lambda0, lambda_value
from .errors import EmptySet, NoSolution
from .graph import PeriodicGraph

MAX_DOUBLINGS = 60


@dataclass(frozen=True, eq=False)
class LevelSet:
    lam: float
    center: np.ndarray
    points: np.ndarray
    directions: np.ndarray
    radii: np.ndarray
    values: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        d = self.points.shape[1]
        w.writerow([f"alpha_{k + 1}" for k in range(d)] + ["lambda"])
        for p, val in zip(self.points, self.values):
            w.writerow([format(float(x), ".17g") for x in p] + [format(float(val), ".17g")])
        return buf.getvalue()


def radial_solve(g: PeriodicGraph, center, direction, lam: float, tol: float = 1e-10,
                 lambda0: float | None = None, pf_tol: float | None = None) -> float:
    """Radius ``t > 0`` with ``|Lambda(center + t*direction) - lam| <= tol``.

    The bracket grows ``t = 1, 2, 4, ...`` until ``Lambda`` drops below
    ``lam``; bisection then closes in on the crossing.

    Raises
    ------
    NoSolution
        If ``lam`` is not below ``Lambda(center) - tol``.
    OverflowError
        If the bracket expansion overflows the Floquet exponentials.
    """
    center = np.asarray(center, dtype=float)
    u = np.asarray(direction, dtype=float)
    pf_tol = pf_tol if pf_tol is not None else min(1e-12, tol * 1e-2)

    def Lam(t):
        return lambda_value(g, center + t * u, pf_tol)

    top = lambda0 if lambda0 is not None else Lam(0.0)
    if not lam < top - tol:
        raise NoSolution(f"level {lam!r} is not below lambda0 - tol = {top - tol!r}")
    lo, hi = 0.0, 1.0
    val = Lam(hi)
    for _ in range(MAX_DOUBLINGS):
        if abs(val - lam) <= tol:
            return hi
        if val < lam:
            break
        lo, hi = hi, 2.0 * hi
        val = Lam(hi)
    else:
        raise OverflowError("radial bracket did not close")
    while True:
        mid = 0.5 * (lo + hi)
        val = Lam(mid)
        if abs(val - lam) <= tol or mid in (lo, hi):
            return mid
        if val > lam:
            lo = mid
        else:
            hi = mid


def sphere_directions(d: int, n: int) -> np.ndarray:
    """Deterministic, evenly spread unit vectors in R^d.

    ``d = 1``: the two signs; ``d = 2``: ``n`` equispaced angles; ``d = 3``:
    a spherical Fibonacci lattice; ``d > 3``: a Halton sequence pushed
    through the normal quantile function and normalised.
    """
    if d == 1:
        return np.array([[-1.0], [1.0]])
    if d == 2:
        ang = 2 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if d == 3:
        i = np.arange(n) + 0.5
        z = 1 - 2 * i / n
        r = np.sqrt(1 - z * z)
        phi = np.pi * (3 - math.sqrt(5)) * i
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    pts = qmc.Halton(d, scramble=False).random(n + 1)[1:]
    gauss = norm.ppf(pts)
    return gauss / np.linalg.norm(gauss, axis=1, keepdims=True)


def trace_level_set(g: PeriodicGraph, lam: float, n_directions: int = 64, tol: float = 1e-10,
                    optimum: Lambda0Result | None = None, workers: int = 1) -> LevelSet:
    """Sample the level set at ``lam`` along rays from ``alpha_star``.

    Raises
    ------
    EmptySet
        For ``d = 0``.
    NoSolution
        If ``lam >= lambda0 - tol``.
    """
    d = g.dimension
    if d == 0:
        raise EmptySet("level sets are empty when the translation group is trivial")
    opt = optimum if optimum is not None else find_lambda0(g)
    if not lam < opt.lambda0 - tol:
        raise NoSolution(f"level {lam!r} is not below lambda0 - tol = {opt.lambda0 - tol!r}")
    dirs = sphere_directions(d, n_directions)
    center = np.asarray(opt.alpha_star, dtype=float)

    def solve(u):
        return radial_solve(g, center, u, lam, tol, lambda0=opt.lambda0)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            radii = np.array(list(pool.map(solve, dirs)))
    else:
        radii = np.array([solve(u) for u in dirs])
    pts = center + radii[:, None] * dirs
    vals = np.array([lambda_value(g, p) for p in pts])
    return LevelSet(float(lam), center, pts, dirs, radii, vals)


def polygon_is_convex(points: np.ndarray) -> bool:
    """True iff the closed polygon through ``points`` turns one way only."""
    p = np.asarray(points, dtype=float)
    e = np.roll(p, -1, axis=0) - p
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    return bool(np.all(cross > 0) or np.all(cross < 0))


def polygon_contains(points: np.ndarray, q) -> bool:
    """Strict containment of ``q`` in a convex polygon given in angular order."""
    p = np.asarray(points, dtype=float)
    q = np.asarray(q, dtype=float)
    e = np.roll(p, -1, axis=0) - p
    r = q - p
    cross = e[:, 0] * r[:, 1] - e[:, 1] * r[:, 0]
    return bool(np.all(cross > 0) or np.all(cross < 0))
