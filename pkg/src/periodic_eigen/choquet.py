"""Finite mixtures of multiplicative eigenfunctions on a level set.

``synthesize`` turns a discrete measure on the level set at ``lam`` into the
positive ``lam``-harmonic function it represents; ``decompose`` goes back
from window samples to a nonnegative mixture by nonnegative least squares
over a dictionary of traced level-set atoms.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dispersion import find_lambda0, lambda_value
from .eigenfunction import build_eigenfunction, tabulate
from .errors import ConvergenceError, NoSolution
from .graph import PeriodicGraph, WindowFunction, _norm_box
from .levelset import trace_level_set

CONDITION_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    lam: float
    atoms: tuple[tuple[np.ndarray, float], ...]

    @property
    def total(self) -> float:
        return math.fsum(w for _, w in self.atoms)

    def to_json(self) -> dict:
        return {"lambda": float(self.lam),
                "atoms": [{"alpha": [float(x) for x in a], "weight": float(w)}
                          for a, w in self.atoms]}

    @classmethod
    def from_json(cls, doc: dict) -> "DiscreteMeasure":
        if set(doc) != {"lambda", "atoms"}:
            raise ValueError(f"measure keys must be 'lambda' and 'atoms', got {sorted(doc)}")
        atoms = []
        for atom in doc["atoms"]:
            if set(atom) != {"alpha", "weight"}:
                raise ValueError("each atom needs exactly 'alpha' and 'weight'")
            w = float(atom["weight"])
            if not w >= 0:
                raise ValueError(f"atom weight {w!r} is negative")
            atoms.append((np.asarray(atom["alpha"], dtype=float), w))
        return cls(float(doc["lambda"]), tuple(atoms))


def nnls(a, b, max_iter: int | None = None):
    """Solve ``min ||a x - b||_2`` subject to ``x >= 0`` (Lawson-Hanson active set).

    Ties in the entering and leaving index are broken towards the lowest
    index, so the iteration path is deterministic.

    Returns
    -------
    x : ndarray
    rnorm : float
        ``||a x - b||_2``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = a.shape
    max_iter = 3 * n if max_iter is None else max_iter
    tol = 10 * np.finfo(float).eps * np.linalg.norm(a, 1) * max(m, n)
    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    # an entering column whose free solve is not positive would leave at once
    # with a zero step and re-enter forever; it is blocked until x moves
    blocked = np.zeros(n, dtype=bool)
    w = a.T @ (b - a @ x)
    it = 0
    while not passive.all():
        cand = np.where(passive | blocked, -np.inf, w)
        j = int(np.argmax(cand))
        if cand[j] <= tol:
            break
        passive[j] = True
        first = True
        while True:
            it += 1
            if it > max_iter:
                raise ConvergenceError("nnls exceeded its iteration limit", best=x)
            idx = np.flatnonzero(passive)
            s = np.zeros(n)
            s[idx] = np.linalg.lstsq(a[:, idx], b, rcond=None)[0]
            if np.all(s[idx] > 0):
                x = s
                blocked[:] = False
                break
            if first and s[j] <= 0:
                passive[j] = False
                blocked[j] = True
                break
            first = False
            bad = idx[s[idx] <= 0]
            ratios = x[bad] / (x[bad] - s[bad])
            k = int(np.argmin(ratios))
            x = x + ratios[k] * (s - x)
            x[bad[k]] = 0.0
            passive &= x > tol
            x[~passive] = 0.0
            blocked[:] = False
        w = a.T @ (b - a @ x)
    return x, float(np.linalg.norm(a @ x - b))


def synthesize(g: PeriodicGraph, m: DiscreteMeasure, window, atom_tol: float = 1e-6,
               pf_tol: float = 1e-12) -> WindowFunction:
    """``sum_i w_i exp(<alpha_i, z>) phi_{alpha_i}(v)`` on ``window x V``."""
    box = _norm_box(window)
    shape = tuple(hi - lo + 1 for lo, hi in box) + (g.n_vertices,)
    total = np.zeros(shape)
    if not m.atoms:
        warnings.warn("empty measure: synthesized function is identically zero", stacklevel=2)
    for alpha, weight in m.atoms:
        f = build_eigenfunction(g, alpha, pf_tol)
        if abs(f.lam - m.lam) > atom_tol:
            raise ValueError(f"atom {np.asarray(alpha).tolist()} has Lambda = {f.lam!r}, "
                             f"not on the level {m.lam!r}")
        total += weight * tabulate(f, box).values
    return WindowFunction(box, g.vertices, total)


def conditioning_box(alphas, requested, limit: float = CONDITION_LIMIT):
    """Largest box inside ``requested`` and inside a cube ``[-r, r]^d`` on which
    every ``exp(<alpha_i, z>)`` stays below ``limit``."""
    box = _norm_box(requested)
    spread = max((float(np.abs(a).sum()) for a in alphas), default=0.0)
    if spread == 0.0:
        return box
    r = int(math.floor(math.log(limit) / spread))
    out = tuple((max(lo, -r), min(hi, r)) for lo, hi in box)
    if any(hi < lo for lo, hi in out):
        raise ValueError("samples window lies outside the well-conditioned region")
    return out


def decompose(g: PeriodicGraph, lam: float, samples: WindowFunction, grid: int = 64,
              tol: float = 1e-10):
    """Fit window samples by a nonnegative mixture of level-set eigenfunctions.

    The level set at ``lam`` is traced along ``grid`` directions (both
    points when ``d = 1``); each traced point contributes one dictionary
    column. Samples are cropped to :func:`conditioning_box`.

    Returns
    -------
    measure : DiscreteMeasure
        Atoms with positive weight only.
    residual : float
        Relative residual ``||A w - s|| / ||s||``.
    """
    if tuple(samples.vertices) != g.vertices:
        raise ValueError("sample vertex order differs from the graph's")
    if np.any(samples.values <= 0):
        raise ValueError("samples must be positive")
    opt = find_lambda0(g)
    if not lam < opt.lambda0 - tol:
        raise NoSolution(f"level {lam!r} is not below lambda0 = {opt.lambda0!r}")
    ls = trace_level_set(g, lam, grid, tol, optimum=opt)
    box = conditioning_box(ls.points, samples.box)
    idx = tuple(slice(lo - slo, hi - slo + 1) for (lo, hi), (slo, _) in zip(box, samples.box))
    target = samples.values[idx].ravel()
    cols = [tabulate(build_eigenfunction(g, p), box).values.ravel() for p in ls.points]
    a = np.column_stack(cols)
    w, rnorm = nnls(a, target)
    atoms = tuple((p.copy(), float(x)) for p, x in zip(ls.points, w) if x > 0)
    return DiscreteMeasure(float(lam), atoms), rnorm / float(np.linalg.norm(target))


def measure_on_level(g: PeriodicGraph, m: DiscreteMeasure, tol: float = 1e-8) -> bool:
    """True iff every atom satisfies ``|Lambda(alpha) - lam| <= tol``."""
    return all(abs(lambda_value(g, a) - m.lam) <= tol for a, _ in m.atoms)
